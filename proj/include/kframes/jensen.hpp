#pragma once

// Jensen-type operator inequalities and their K-frame specialisations.

#include <vector>

#include "kframes/frame.hpp"
#include "kframes/reports.hpp"
#include "kframes/scalar_function.hpp"

namespace kframes {

/// A finite family of positive linear maps Φ_i: M_in → M_out, each either a
/// weight (Φ_i(A) = w_i·A, in = out) or a congruence (Φ_i(A) = V_iᴴ A V_i,
/// V_i of shape in×out).
class PositiveMapFamily {
 public:
  static PositiveMapFamily weights(std::vector<double> w, Index dim);
  static PositiveMapFamily congruences(std::vector<CMat> v);

  std::size_t size() const { return is_weights_ ? weights_.size() : congruences_.size(); }
  Index input_dim() const { return input_dim_; }
  Index output_dim() const { return output_dim_; }
  CMat apply(std::size_t i, const CMat& a) const;
  /// ‖Σ Φ_i(I) − I‖.
  double unital_residual() const;

 private:
  bool is_weights_ = true;
  std::vector<double> weights_;
  std::vector<CMat> congruences_;
  Index input_dim_ = 0;
  Index output_dim_ = 0;
};

/// h(Σ Φ_i(A_i)) ≼ Σ Φ_i(h(A_i)) for operator convex h.
LoewnerReport check_jensen_3_1(const std::vector<CMat>& as, const PositiveMapFamily& phis,
                               const ScalarFunction& h, double tol = kDefaultTol);

/// h((m+M)I − Σ Φ_i(A_i)) ≼ (h(m)+h(M))I − Σ Φ_i(h(A_i)) for convex h and
/// spectra of every A_i inside [m, M].
LoewnerReport check_jensen_3_2(const std::vector<CMat>& as, const PositiveMapFamily& phis,
                               const ScalarFunction& h, double m, double big_m,
                               double tol = kDefaultTol);

/// h(KK*/2) ≼ (h(S_J) + h(S_{J^c}))/2 for a Parseval K-frame; evaluated as
/// check_jensen_3_1 on (S_J, S_{J^c}) with weights {1/2, 1/2}.
LoewnerReport check_thm_3_3_i(const KFrame& frame, const OperatorK& k, const IndexSubset& j,
                              const ScalarFunction& h, double tol = kDefaultTol);

/// h(‖K‖²I − KK*/2) ≼ (h(0) + h(‖K‖²))I − (h(S_J) + h(S_{J^c}))/2, i.e.
/// check_jensen_3_2 on (S_J, S_{J^c}) with bracket [0, ‖K‖²].
LoewnerReport check_thm_3_3_ii(const KFrame& frame, const OperatorK& k, const IndexSubset& j,
                               const ScalarFunction& h, double tol = kDefaultTol);

/// The variant without the h(0) term:
///   h(‖K‖²I − KK*/2) ≼ h(‖K‖²)I − (h(S_J) + h(S_{J^c}))/2.
/// It coincides with check_thm_3_3_ii when h(0) = 0 and can fail when h(0) > 0.
LoewnerReport thm_3_3_ii_without_h0(const KFrame& frame, const OperatorK& k, const IndexSubset& j,
                                    const ScalarFunction& h, double tol = kDefaultTol);

struct Cor34Report {
  InequalityReport lower;  // ½‖KK*f‖² ≤ ‖S_J f‖² + ‖S_{J^c} f‖²
  InequalityReport upper;  // … ≤ 2‖K‖²‖K*f‖² − ½‖KK*f‖²
};

Cor34Report check_cor_3_4(const KFrame& frame, const OperatorK& k, const IndexSubset& j,
                          const CVec& f, double tol = kDefaultTol);

}  // namespace kframes
