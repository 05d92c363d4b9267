#include "kframes/douglas.hpp"

#include <cmath>

namespace kframes {

IdentityReport make_identity_report(Complex lhs, Complex rhs, double tol, double path_err) {
  IdentityReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_err = std::abs(lhs - rhs);
  r.rel_err = r.abs_err / (1.0 + std::abs(lhs) + std::abs(rhs));
  r.path_err = path_err;
  r.pass = r.rel_err <= tol;
  return r;
}

InequalityReport make_inequality_report(double lesser, double greater, double tol) {
  InequalityReport r;
  r.lesser = lesser;
  r.greater = greater;
  r.margin = greater - lesser;
  r.scale = 1.0 + std::abs(lesser) + std::abs(greater);
  r.pass = r.margin >= -tol * r.scale;
  return r;
}

double path_gap(Complex a, Complex a_alt, Complex b, Complex b_alt) {
  return std::max(std::abs(a - a_alt), std::abs(b - b_alt)) / (1.0 + std::abs(a) + std::abs(b));
}

DouglasSolution douglas_solve(const CMat& l1, const CMat& l2, double tol, double rank_tol) {
  if (l1.rows() != l2.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "L1 and L2 must share their codomain");
  }
  require_finite(l1, "L1");
  require_finite(l2, "L2");
  const CMat l2_pinv = pinv(l2, rank_tol);
  DouglasSolution s;
  s.x = l2_pinv * l1;
  const double l1_norm = op_norm(l1);
  s.factor_residual = op_norm(l2 * s.x - l1);
  if (s.factor_residual > tol * (1.0 + l1_norm)) {
    throw Error(ErrorCode::NotSolvable, "R(L1) is not contained in R(L2): residual " +
                                            std::to_string(s.factor_residual));
  }
  const double x_norm = op_norm(s.x);
  s.norm_sq = x_norm * x_norm;
  s.kernel_match = op_norm(null_projector(l1, rank_tol) - null_projector(s.x, rank_tol));
  const CMat row_projector = l2_pinv * l2;
  s.range_residual = op_norm(s.x - row_projector * s.x);
  s.range_ok = s.range_residual <= tol * (1.0 + x_norm);
  return s;
}

InfimumReport douglas_infimum_check(const CMat& l1, const CMat& l2, const CMat& x, double tol,
                                    double delta) {
  if (l1.rows() != l2.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "L1 and L2 must share their codomain");
  }
  InfimumReport r;
  const double xn = op_norm(x);
  r.norm_sq = xn * xn;
  r.delta = delta;
  const CMat a = l1 * l1.adjoint();
  const CMat b = l2 * l2.adjoint();
  r.at_norm = loewner_le(a, r.norm_sq * b, tol);
  if (r.norm_sq == 0.0) {
    r.below_norm = r.at_norm;
    r.pass = r.at_norm.pass;
    return r;
  }
  r.below_norm = loewner_le(a, r.norm_sq * (1.0 - delta) * b, tol);
  r.pass = r.at_norm.pass && !r.below_norm.pass;
  return r;
}

CMat canonical_xf(const KFrame& f, const OperatorK& k, double tol) {
  require_same_dim(f, k);
  try {
    return douglas_solve(k.matrix(), f.synthesis_matrix(), tol).x;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotSolvable) throw Error(ErrorCode::NotKFrame, e.what());
    throw;
  }
}

DualPair canonical_kdual(const KFrame& f, const OperatorK& k, double tol) {
  const CMat x = canonical_xf(f, k, tol);
  return make_dual_pair(f, x.adjoint(), k);
}

DualPair parametrized_kdual(const KFrame& f, const OperatorK& k, const CMat& z, double tol) {
  if (z.rows() != f.count() || z.cols() != f.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "Z must be count x dim");
  }
  require_finite(z, "Z");
  const CMat x_f = canonical_xf(f, k, tol);
  const CMat& t = f.synthesis_matrix();
  const CMat t_pinv = pinv(t, kRangeRankTol);
  const CMat null_part = z - t_pinv * (t * z);
  const CMat x = x_f + null_part;
  return make_dual_pair(f, x.adjoint(), k);
}

IdentityReductionReport check_identity_reduction(const KFrame& f, double tol) {
  const OperatorK identity(CMat::Identity(f.dim(), f.dim()));
  const KFrameBounds bounds = kframe_bounds(f, identity, tol);
  if (!bounds.is_kframe) throw Error(ErrorCode::NotKFrame, "frame does not span the space");
  const CMat s = frame_operator(f);
  const HermEig se = herm_eig(s, tol);
  const CMat s_inv = se.vectors * se.values.cwiseInverse().asDiagonal() * se.vectors.adjoint();
  const CMat x_f = canonical_xf(f, identity, tol);
  const CMat closed_form = f.synthesis_matrix().adjoint() * s_inv;

  IdentityReductionReport r;
  r.lower_opt = bounds.lower_opt;
  r.lambda_min = se.values(0);
  r.lower_rel_err = std::abs(r.lower_opt - r.lambda_min) / std::abs(r.lambda_min);
  r.xf_rel_err = op_norm(x_f - closed_form) / op_norm(x_f);
  const double inv_norm = op_norm(closed_form);
  r.inverse_norm_form = 1.0 / (inv_norm * inv_norm);
  const double printed = op_norm(f.synthesis_matrix().adjoint() * s);
  r.printed_form = 1.0 / (printed * printed);
  r.printed_form_matches =
      std::abs(r.printed_form - r.lambda_min) <= tol * (1.0 + std::abs(r.lambda_min));
  r.pass = r.lower_rel_err <= tol && r.xf_rel_err <= tol &&
           std::abs(r.inverse_norm_form - r.lambda_min) <= tol * std::abs(r.lambda_min);
  return r;
}

}  // namespace kframes
