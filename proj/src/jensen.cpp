#include "kframes/jensen.hpp"

#include <cmath>

namespace kframes {

PositiveMapFamily PositiveMapFamily::weights(std::vector<double> w, Index dim) {
  if (w.empty() || dim < 1) throw Error(ErrorCode::BadConfig, "empty map family");
  for (double x : w) {
    if (!std::isfinite(x) || x < 0.0) throw Error(ErrorCode::NotPositive, "weights must be finite and >= 0");
  }
  PositiveMapFamily p;
  p.is_weights_ = true;
  p.weights_ = std::move(w);
  p.input_dim_ = dim;
  p.output_dim_ = dim;
  return p;
}

PositiveMapFamily PositiveMapFamily::congruences(std::vector<CMat> v) {
  if (v.empty()) throw Error(ErrorCode::BadConfig, "empty map family");
  for (const CMat& m : v) {
    if (m.rows() != v.front().rows() || m.cols() != v.front().cols()) {
      throw Error(ErrorCode::DimensionMismatch, "congruence factors must share a shape");
    }
    require_finite(m, "congruence factor");
  }
  PositiveMapFamily p;
  p.is_weights_ = false;
  p.input_dim_ = v.front().rows();
  p.output_dim_ = v.front().cols();
  p.congruences_ = std::move(v);
  return p;
}

CMat PositiveMapFamily::apply(std::size_t i, const CMat& a) const {
  if (a.rows() != input_dim_ || a.cols() != input_dim_) {
    throw Error(ErrorCode::DimensionMismatch, "map input has the wrong size");
  }
  if (is_weights_) return weights_[i] * a;
  const CMat& v = congruences_[i];
  return v.adjoint() * a * v;
}

double PositiveMapFamily::unital_residual() const {
  CMat sum = CMat::Zero(output_dim_, output_dim_);
  const CMat id = CMat::Identity(input_dim_, input_dim_);
  for (std::size_t i = 0; i < size(); ++i) sum += apply(i, id);
  return op_norm(sum - CMat::Identity(output_dim_, output_dim_));
}

namespace {

void require_family(const std::vector<CMat>& as, const PositiveMapFamily& phis, double tol) {
  if (as.size() != phis.size()) {
    throw Error(ErrorCode::DimensionMismatch, "need one operator per map");
  }
  const double r = phis.unital_residual();
  if (r > tol * 2.0) throw Error(ErrorCode::NotUnital, "‖ΣΦ_i(I) − I‖ = " + std::to_string(r));
}

CMat apply_sum(const std::vector<CMat>& as, const PositiveMapFamily& phis) {
  CMat sum = CMat::Zero(phis.output_dim(), phis.output_dim());
  for (std::size_t i = 0; i < as.size(); ++i) sum += phis.apply(i, as[i]);
  return sum;
}

CMat apply_sum_of_images(const std::vector<CMat>& as, const PositiveMapFamily& phis,
                         const ScalarFunction& h, double tol) {
  CMat sum = CMat::Zero(phis.output_dim(), phis.output_dim());
  for (std::size_t i = 0; i < as.size(); ++i) sum += phis.apply(i, matfunc(h, as[i], tol));
  return sum;
}

struct SplitPair {
  std::vector<CMat> parts;
  double k_norm_sq = 0.0;
};

SplitPair parseval_split(const KFrame& frame, const OperatorK& k, const IndexSubset& j,
                         const ScalarFunction& h, double tol) {
  require_parseval(frame, k, tol);
  j.validate(frame.count());
  SplitPair s;
  const double kn = op_norm(k.matrix());
  s.k_norm_sq = kn * kn;
  // ‖K‖² carries roundoff; a domain ending exactly at the norm must still qualify.
  if (!h.domain().covers(Interval{0.0, s.k_norm_sq}, tol * (1.0 + s.k_norm_sq))) {
    throw Error(ErrorCode::DomainViolation, h.name() + " is not defined on [0, ‖K‖²]");
  }
  s.k_norm_sq = std::min(s.k_norm_sq, h.domain().hi);
  s.parts = {partial_frame_operator(frame, j), partial_frame_operator(frame, j.complement(frame.count()))};
  return s;
}

}  // namespace

LoewnerReport check_jensen_3_1(const std::vector<CMat>& as, const PositiveMapFamily& phis,
                               const ScalarFunction& h, double tol) {
  if (!h.operator_convex()) {
    throw Error(ErrorCode::NotOperatorConvex, h.name() + " is not a vetted operator convex function");
  }
  require_family(as, phis, tol);
  const CMat lhs = matfunc(h, apply_sum(as, phis), tol);
  const CMat rhs = apply_sum_of_images(as, phis, h, tol);
  return loewner_le(lhs, rhs, tol);
}

LoewnerReport check_jensen_3_2(const std::vector<CMat>& as, const PositiveMapFamily& phis,
                               const ScalarFunction& h, double m, double big_m, double tol) {
  if (!h.convex()) throw Error(ErrorCode::NotConvex, h.name() + " is not convex");
  if (!(m < big_m)) throw Error(ErrorCode::SpectrumOutOfBracket, "bracket needs m < M");
  if (!h.domain().covers(Interval{m, big_m})) {
    throw Error(ErrorCode::DomainViolation, h.name() + " is not defined on the whole bracket");
  }
  require_family(as, phis, tol);
  const double slack = tol * (1.0 + std::max(std::abs(m), std::abs(big_m)));
  for (const CMat& a : as) {
    const HermEig e = herm_eig(a, tol);
    if (e.values(0) < m - slack || e.values(e.values.size() - 1) > big_m + slack) {
      throw Error(ErrorCode::SpectrumOutOfBracket, "operator spectrum leaves [m, M]");
    }
  }
  const Index dim = phis.output_dim();
  const CMat id = CMat::Identity(dim, dim);
  const CMat lhs = matfunc(h, (m + big_m) * id - apply_sum(as, phis), tol);
  const CMat rhs = (h(m) + h(big_m)) * id - apply_sum_of_images(as, phis, h, tol);
  return loewner_le(lhs, rhs, tol);
}

LoewnerReport check_thm_3_3_i(const KFrame& frame, const OperatorK& k, const IndexSubset& j,
                              const ScalarFunction& h, double tol) {
  if (!h.operator_convex()) {
    throw Error(ErrorCode::NotOperatorConvex, h.name() + " is not a vetted operator convex function");
  }
  const SplitPair s = parseval_split(frame, k, j, h, tol);
  return check_jensen_3_1(s.parts, PositiveMapFamily::weights({0.5, 0.5}, frame.dim()), h, tol);
}

LoewnerReport check_thm_3_3_ii(const KFrame& frame, const OperatorK& k, const IndexSubset& j,
                               const ScalarFunction& h, double tol) {
  if (!h.convex()) throw Error(ErrorCode::NotConvex, h.name() + " is not convex");
  const SplitPair s = parseval_split(frame, k, j, h, tol);
  if (s.k_norm_sq == 0.0) throw Error(ErrorCode::ZeroOperator, "bracket [0, ‖K‖²] is degenerate");
  return check_jensen_3_2(s.parts, PositiveMapFamily::weights({0.5, 0.5}, frame.dim()), h, 0.0,
                          s.k_norm_sq, tol);
}

LoewnerReport thm_3_3_ii_without_h0(const KFrame& frame, const OperatorK& k, const IndexSubset& j,
                                    const ScalarFunction& h, double tol) {
  if (!h.convex()) throw Error(ErrorCode::NotConvex, h.name() + " is not convex");
  const SplitPair s = parseval_split(frame, k, j, h, tol);
  const Index d = frame.dim();
  const CMat id = CMat::Identity(d, d);
  const CMat lhs = matfunc(h, s.k_norm_sq * id - 0.5 * k.gram(), tol);
  const CMat rhs = h(s.k_norm_sq) * id - 0.5 * (matfunc(h, s.parts[0], tol) + matfunc(h, s.parts[1], tol));
  return loewner_le(lhs, rhs, tol);
}

Cor34Report check_cor_3_4(const KFrame& frame, const OperatorK& k, const IndexSubset& j,
                          const CVec& f, double tol) {
  if (f.size() != frame.dim()) throw Error(ErrorCode::DimensionMismatch, "vector length differs from dim");
  require_parseval(frame, k, tol);
  j.validate(frame.count());
  const CMat& t = frame.vectors();
  CVec sj = CVec::Zero(frame.dim());
  CVec sjc = CVec::Zero(frame.dim());
  for (Index i = 0; i < frame.count(); ++i) {
    Complex c{};
    for (Index r = 0; r < frame.dim(); ++r) c += f(r) * std::conj(t(r, i));
    (j.contains(i) ? sj : sjc) += c * t.col(i);
  }
  const double middle = sj.squaredNorm() + sjc.squaredNorm();
  const double kkf = (k.gram() * f).squaredNorm();
  const double kn = op_norm(k.matrix());
  const double kstar_f = (k.adjoint() * f).squaredNorm();

  Cor34Report r;
  r.lower = make_inequality_report(0.5 * kkf, middle, tol);
  r.upper = make_inequality_report(middle, 2.0 * kn * kn * kstar_f - 0.5 * kkf, tol);
  return r;
}

}  // namespace kframes
