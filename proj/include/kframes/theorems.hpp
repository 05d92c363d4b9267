#pragma once

// Checkers for the duality identities, the Parseval K-frame identities and
// inequalities, and the v± constants.
//
// Every checker evaluates its quantities twice: once from explicit
// coefficient sums over the frame vectors, once from operator algebra
// (S_J, M_J, KK*). The sums feed the verdict; the gap between the two routes
// is reported as `path_err`.

#include <vector>

#include "kframes/frame.hpp"
#include "kframes/reports.hpp"

namespace kframes {

/// Σ_{J}⟨f,g_i⟩·conj⟨Kf,f_i⟩ − ‖Σ_{J}⟨f,g_i⟩f_i‖² against the J^c form.
IdentityReport check_thm_2_1(const DualPair& pair, const IndexSubset& j, const CVec& f,
                             double tol = kDefaultTol);

/// The same identity phrased with the coefficients (X_F f)_i of the canonical
/// Douglas solution.
IdentityReport check_cor_2_2(const KFrame& frame, const OperatorK& k, const IndexSubset& j,
                             const CVec& f, double tol = kDefaultTol);

/// Weighted form with arbitrary complex weights α_i and 1 − α_i.
IdentityReport check_thm_2_3(const DualPair& pair, const CVec& alpha, const CVec& f,
                             double tol = kDefaultTol);

/// Moving E ⊆ J^c across the split of a Parseval K-frame.
IdentityReport check_thm_2_4(const KFrame& frame, const OperatorK& k, const IndexSubset& j,
                             const IndexSubset& e, const CVec& f, double tol = kDefaultTol);

struct Thm25Report {
  IdentityReport equality;
  InequalityReport bound;  // (3/4)‖KK*f‖² ≤ common value
};

Thm25Report check_thm_2_5(const KFrame& frame, const OperatorK& k, const IndexSubset& j,
                          const CVec& f, double tol = kDefaultTol);

/// Extremes of
///   (Re Σ_{J^c} conj⟨f,f_i⟩⟨KK*f,f_i⟩ + ‖S_J f‖²) / ‖KK*f‖²
/// over nonzero f in range(K).
struct VConstants {
  double v_plus = 0.0;
  double v_minus = 0.0;
  IndexSubset subset;
  Index restricted_dim = 0;
};

VConstants v_constants(const KFrame& frame, const OperatorK& k, const IndexSubset& j,
                       double tol = kDefaultTol);

struct Thm27Report {
  VConstants v;
  VConstants v_complement;
  VConstants v_empty;
  VConstants v_full;
  double k_norm = 0.0;
  double k_pinv_norm = 0.0;
  double proof_bound = 0.0;   // ‖K‖‖K†‖(1 + ‖K‖‖K†‖)
  double stated_bound = 0.0;  // ‖K‖‖K†‖(1 + ‖K‖), reported only
  InequalityReport lower;     // 3/4 ≤ v_minus
  InequalityReport ordered;   // v_minus ≤ v_plus
  InequalityReport upper;     // v_plus ≤ proof_bound
  bool stated_bound_holds = false;
  IdentityReport symmetric_plus;
  IdentityReport symmetric_minus;
  bool trivial_subsets_ok = false;  // v(∅) = v(I) = 1
  bool pass = false;
};

Thm27Report check_thm_2_7(const KFrame& frame, const OperatorK& k, const IndexSubset& j,
                          double tol = kDefaultTol);

struct Lemma26Report {
  InequalityReport bessel;  // ‖S_F f‖² ≤ ‖S_F‖·Σ|⟨f,f_i⟩|²
  InequalityReport lower;   // Σ|⟨f,f_i⟩|² ≤ ‖K†‖²‖X_F‖²‖S_F f‖², f projected onto R(K)
};

Lemma26Report check_lemma_2_6(const KFrame& frame, const OperatorK& k, const CVec& f,
                              double tol = kDefaultTol);

/// (i) v₊ = v₋ = 1, (ii) ‖S_J f‖² = Re Σ_J ⟨f,f_i⟩conj⟨KK*f,f_i⟩ for every f
/// in the batch, (iii) the same for J^c.
struct Cor28Report {
  VConstants v;
  bool cond_i = false;
  bool cond_ii = false;
  bool cond_iii = false;
  double worst_ii = 0.0;   // largest normalized defect over the batch
  double worst_iii = 0.0;
  bool agree = false;
};

Cor28Report check_cor_2_8(const KFrame& frame, const OperatorK& k, const IndexSubset& j,
                          const std::vector<CVec>& batch, double tol = kDefaultTol);

/// Four pointwise conditions, each a complex quantity that must vanish:
/// (i) ‖S_J f‖² − Σ_J ⟨f,f_i⟩conj⟨KK*f,f_i⟩, (ii) the J^c analogue,
/// (iii) ⟨S_J f, S_{J^c} f⟩, (iv) ⟨f, S_{J^c}S_J f⟩.
struct Cor29Report {
  Complex defect[4];
  double scale = 1.0;  // shared by all four conditions
  bool holds[4] = {false, false, false, false};
  bool agree = false;
};

Cor29Report check_cor_2_9(const KFrame& frame, const OperatorK& k, const IndexSubset& j,
                          const CVec& f, double tol = kDefaultTol);

}  // namespace kframes
