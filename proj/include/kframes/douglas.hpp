#pragma once

// Douglas factorization: given R(L₁) ⊆ R(L₂), the reduced solution X of
// L₁ = L₂X, its norm characterisation and its kernel/range properties, plus
// the K-dual constructions built from it.

#include "kframes/frame.hpp"
#include "kframes/reports.hpp"

namespace kframes {

struct DouglasSolution {
  CMat x;
  double factor_residual = 0.0;  // ‖L₂X − L₁‖
  double norm_sq = 0.0;          // ‖X‖²
  double kernel_match = 0.0;     // ‖P_N(L₁) − P_N(X)‖
  double range_residual = 0.0;   // ‖(I − L₂†L₂)X‖
  bool range_ok = false;         // range_residual ≤ tol·(1 + ‖X‖)
};

/// X = L₂†L₁. Throws NotSolvable when ‖(I − L₂L₂†)L₁‖ > tol·(1 + ‖L₁‖).
DouglasSolution douglas_solve(const CMat& l1, const CMat& l2, double tol = kDefaultTol,
                              double rank_tol = kRangeRankTol);

/// Both sides of ‖X‖² = inf{α > 0 : L₁L₁* ≼ αL₂L₂*}: the order must hold at
/// α = ‖X‖² and fail at α = ‖X‖²(1 − δ).
struct InfimumReport {
  double norm_sq = 0.0;
  double delta = 0.0;
  LoewnerReport at_norm;
  LoewnerReport below_norm;
  bool pass = false;
};

InfimumReport douglas_infimum_check(const CMat& l1, const CMat& l2, const CMat& x,
                                    double tol = kDefaultTol, double delta = 1e-6);

/// X_F solving T_F X = K. Throws NotKFrame when R(K) ⊄ R(T_F).
CMat canonical_xf(const KFrame& f, const OperatorK& k, double tol = kDefaultTol);

/// {X_F*δ_i}: G = X_Fᴴ.
DualPair canonical_kdual(const KFrame& f, const OperatorK& k, double tol = kDefaultTol);

/// X = X_F + (I − T_F†T_F)Z, G = Xᴴ. Z is n×d.
DualPair parametrized_kdual(const KFrame& f, const OperatorK& k, const CMat& z,
                            double tol = kDefaultTol);

/// K = I reduction for a spanning frame: X_F against T_FᴴS_F⁻¹ and ‖X_F‖⁻²
/// against λ_min(S_F). Also evaluates ‖T_FᴴS_F‖⁻², the expression as
/// literally printed in the classical remark, to expose the discrepancy.
struct IdentityReductionReport {
  double lower_opt = 0.0;
  double lambda_min = 0.0;
  double lower_rel_err = 0.0;
  double xf_rel_err = 0.0;  // ‖X_F − T_FᴴS_F⁻¹‖ / ‖X_F‖
  double inverse_norm_form = 0.0;   // ‖T_FᴴS_F⁻¹‖⁻² = ‖S_F⁻¹‖⁻¹
  double printed_form = 0.0;        // ‖T_FᴴS_F‖⁻²
  bool printed_form_matches = false;
  bool pass = false;
};

IdentityReductionReport check_identity_reduction(const KFrame& f, double tol = kDefaultTol);

}  // namespace kframes
