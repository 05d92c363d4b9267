#include "kframes/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kframes {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::SingularDenominator: return "SingularDenominator";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::BadSubset: return "BadSubset";
    case ErrorCode::OverlappingSubsets: return "OverlappingSubsets";
    case ErrorCode::NotSolvable: return "NotSolvable";
    case ErrorCode::NotKFrame: return "NotKFrame";
    case ErrorCode::NotParseval: return "NotParseval";
    case ErrorCode::ZeroOperator: return "ZeroOperator";
    case ErrorCode::NotOperatorConvex: return "NotOperatorConvex";
    case ErrorCode::NotConvex: return "NotConvex";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NotUnital: return "NotUnital";
    case ErrorCode::SpectrumOutOfBracket: return "SpectrumOutOfBracket";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::UnknownTheoremId: return "UnknownTheoremId";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

bool all_finite(const CMat& a) {
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
    }
  }
  return true;
}

void require_finite(const CMat& a, std::string_view what) {
  if (!all_finite(a)) throw Error(ErrorCode::NonFinite, std::string(what) + " has NaN/Inf entries");
}

CMat hermitian_part(const CMat& a) { return (a + a.adjoint()) * 0.5; }

namespace {

void require_square(const CMat& a, std::string_view what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " must be square and nonempty, got " + std::to_string(a.rows()) +
                    "x" + std::to_string(a.cols()));
  }
}

// ‖A − Aᴴ‖ ≤ tol·(1 + ‖A‖). The Frobenius bound settles almost every call
// without an SVD.
void require_hermitian(const CMat& a, double tol) {
  require_square(a, "Hermitian operand");
  require_finite(a, "Hermitian operand");
  const CMat skew = a - a.adjoint();
  const double skew_f = skew.norm();
  const double n = static_cast<double>(a.rows());
  if (skew_f <= tol * (1.0 + a.norm() / std::sqrt(n))) return;
  const double skew_op = op_norm(skew);
  const double norm = op_norm(a);
  if (skew_op > tol * (1.0 + norm)) {
    throw Error(ErrorCode::NotHermitian, "‖A−Aᴴ‖ = " + std::to_string(skew_op) +
                                             " exceeds tol·(1+‖A‖) = " +
                                             std::to_string(tol * (1.0 + norm)));
  }
}

}  // namespace

HermEig herm_eig(const CMat& a, double tol) {
  require_hermitian(a, tol);
  Eigen::SelfAdjointEigenSolver<CMat> solver(hermitian_part(a), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NoConvergence, "Hermitian eigensolver did not converge");
  }
  return HermEig{solver.eigenvalues(), solver.eigenvectors()};
}

Svd svd(const CMat& a) {
  require_finite(a, "svd operand");
  Eigen::JacobiSVD<CMat> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NoConvergence, "Jacobi SVD did not converge");
  }
  return Svd{solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

double default_rank_tol(const CMat& a) {
  return kMachineEps * static_cast<double>(std::max(a.rows(), a.cols()));
}

CMat pinv(const CMat& a, double rank_tol) {
  const Svd s = svd(a);
  CMat out = CMat::Zero(a.cols(), a.rows());
  if (s.sigma.size() == 0) return out;
  const double cutoff = rank_tol * s.sigma(0);
  for (Index k = 0; k < s.sigma.size(); ++k) {
    if (s.sigma(k) <= cutoff || s.sigma(k) == 0.0) break;
    out.noalias() += s.v.col(k) * (1.0 / s.sigma(k)) * s.u.col(k).adjoint();
  }
  return out;
}

CMat pinv(const CMat& a) { return pinv(a, default_rank_tol(a)); }

double op_norm(const CMat& a) {
  if (a.size() == 0) return 0.0;
  return svd(a).sigma(0);
}

CMat range_basis(const CMat& a, double rank_tol) {
  const Svd s = svd(a);
  Index rank = 0;
  if (s.sigma.size() > 0 && s.sigma(0) > 0.0) {
    const double cutoff = rank_tol * s.sigma(0);
    while (rank < s.sigma.size() && s.sigma(rank) > cutoff) ++rank;
  }
  return s.u.leftCols(rank);
}

CMat null_projector(const CMat& a, double rank_tol) {
  const CMat row_space = range_basis(a.adjoint(), rank_tol);
  return CMat::Identity(a.cols(), a.cols()) - row_space * row_space.adjoint();
}

LoewnerReport loewner_le(const CMat& a, const CMat& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "Loewner comparison of differently sized operators");
  }
  const HermEig diff = herm_eig(b - a, tol);
  LoewnerReport r;
  r.min_eig = diff.values(0);
  r.max_eig = diff.values(diff.values.size() - 1);
  r.scale = 1.0 + op_norm(a) + op_norm(b);
  r.pass = r.min_eig >= -tol * r.scale;
  return r;
}

CMat matfunc(const std::function<double(double)>& h, const Interval& domain, const CMat& a,
             double tol) {
  const HermEig e = herm_eig(a, tol);
  const Index n = e.values.size();
  const double scale = 1.0 + std::max(std::abs(e.values(0)), std::abs(e.values(n - 1)));
  const double slack = tol * scale;
  // Eigenvalues this small are roundoff around zero; h need not be
  // Lipschitz there (√x), so they are evaluated as exact zeros.
  const double zero_floor = 8.0 * static_cast<double>(n) * kMachineEps * (scale - 1.0);
  RVec hv(n);
  for (Index k = 0; k < n; ++k) {
    double lambda = e.values(k);
    if (std::abs(lambda) <= zero_floor) lambda = 0.0;
    if (!domain.contains(lambda, slack)) {
      throw Error(ErrorCode::DomainViolation,
                  "eigenvalue " + std::to_string(lambda) + " outside [" + std::to_string(domain.lo) +
                      ", " + std::to_string(domain.hi) + "]");
    }
    hv(k) = h(std::clamp(lambda, domain.lo, domain.hi));
  }
  return e.vectors * hv.asDiagonal() * e.vectors.adjoint();
}

RayleighExtrema rayleigh_extrema_on_subspace(const CMat& q, const CMat& d, const CMat& w,
                                             double tol) {
  if (q.rows() != d.rows() || q.cols() != d.cols() || w.rows() != q.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "Rayleigh pencil operands disagree in size");
  }
  if (w.cols() == 0) throw Error(ErrorCode::SingularDenominator, "empty subspace");
  const CMat qr = hermitian_part(w.adjoint() * q * w);
  const CMat dr = hermitian_part(w.adjoint() * d * w);
  const HermEig de = herm_eig(dr, tol);
  const double dmax = de.values(de.values.size() - 1);
  if (!(de.values(0) > tol * (1.0 + std::abs(dmax)))) {
    throw Error(ErrorCode::SingularDenominator,
                "λ_min(WᴴDW) = " + std::to_string(de.values(0)) + " is not positive");
  }
  // Reduce the definite pencil with the Cholesky factor of the denominator.
  Eigen::LLT<CMat> llt(dr);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularDenominator, "Cholesky of WᴴDW failed");
  }
  const CMat lower = llt.matrixL();
  CMat c = lower.triangularView<Eigen::Lower>().solve(qr);
  c = lower.triangularView<Eigen::Lower>().solve(CMat(c.adjoint()));
  const HermEig ce = herm_eig(hermitian_part(c), tol);
  return {ce.values(0), ce.values(ce.values.size() - 1)};
}

}  // namespace kframes
