#pragma once

// Dense complex linear algebra used throughout the library.
//
// Matrices are plain Eigen::MatrixXcd values. Every routine here is a pure
// function of its arguments; Eigen is used single-threaded so results are
// bit-reproducible for fixed input bytes.

#include <complex>
#include <functional>
#include <limits>
#include <string_view>

#include <Eigen/Dense>

#include "kframes/errors.hpp"

namespace kframes {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Index = Eigen::Index;

/// Default relative tolerance for identities and inequalities.
inline constexpr double kDefaultTol = 1e-9;

/// Relative singular-value cutoff used for range and null-space decisions on
/// frame-level operators (T_F, K, Douglas factors).
inline constexpr double kRangeRankTol = 1e-10;

inline constexpr double kMachineEps = std::numeric_limits<double>::epsilon();

struct HermEig {
  RVec values;  // ascending
  CMat vectors;  // orthonormal columns
};

struct Svd {
  CMat u;
  RVec sigma;  // descending, length min(rows, cols)
  CMat v;
};

/// Verdict for the claim A ≼ B.
struct LoewnerReport {
  double min_eig = 0.0;  // λ_min(B − A)
  double max_eig = 0.0;  // λ_max(B − A)
  double scale = 1.0;    // 1 + ‖A‖ + ‖B‖
  bool pass = false;     // min_eig ≥ −tol·scale
};

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x, double slack = 0.0) const { return x >= lo - slack && x <= hi + slack; }
  bool covers(const Interval& other, double slack = 0.0) const {
    return lo <= other.lo + slack && hi >= other.hi - slack;
  }
};

struct RayleighExtrema {
  double min = 0.0;
  double max = 0.0;
};

bool all_finite(const CMat& a);
void require_finite(const CMat& a, std::string_view what);

/// (A + Aᴴ)/2.
CMat hermitian_part(const CMat& a);

/// Inner product ⟨x, y⟩ = yᴴx, linear in the first argument.
inline Complex inner(const CVec& x, const CVec& y) { return y.dot(x); }

HermEig herm_eig(const CMat& a, double tol = kDefaultTol);

Svd svd(const CMat& a);

double default_rank_tol(const CMat& a);

/// Moore–Penrose pseudoinverse; singular values ≤ rank_tol·σ_max are dropped.
CMat pinv(const CMat& a, double rank_tol);
CMat pinv(const CMat& a);

double op_norm(const CMat& a);

/// Orthonormal basis (as columns) of range(A) under the given relative cutoff.
CMat range_basis(const CMat& a, double rank_tol = kRangeRankTol);

/// Orthogonal projector onto null(A).
CMat null_projector(const CMat& a, double rank_tol = kRangeRankTol);

LoewnerReport loewner_le(const CMat& a, const CMat& b, double tol = kDefaultTol);

/// V·diag(h(λ))·Vᴴ. Eigenvalues within tol·(1+‖A‖) of the domain are clamped
/// onto it; anything farther out raises DomainViolation.
CMat matfunc(const std::function<double(double)>& h, const Interval& domain, const CMat& a,
             double tol = kDefaultTol);

/// Extreme values of ⟨Qx,x⟩/⟨Dx,x⟩ over nonzero x in range(W), W with
/// orthonormal columns.
RayleighExtrema rayleigh_extrema_on_subspace(const CMat& q, const CMat& d, const CMat& w,
                                             double tol = kDefaultTol);

}  // namespace kframes
