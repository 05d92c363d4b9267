#include "kframes/theorems.hpp"

#include <algorithm>
#include <cmath>

#include "kframes/douglas.hpp"

namespace kframes {

namespace {

void require_vector(const CVec& f, Index d) {
  if (f.size() != d) {
    throw Error(ErrorCode::DimensionMismatch,
                "vector length " + std::to_string(f.size()) + " vs dim " + std::to_string(d));
  }
}

// c_i = ⟨x, m_i⟩ for each column m_i, accumulated entry by entry.
std::vector<Complex> inner_with_columns(const CMat& m, const CVec& x) {
  std::vector<Complex> c(static_cast<std::size_t>(m.cols()));
  for (Index i = 0; i < m.cols(); ++i) {
    Complex s{};
    for (Index r = 0; r < m.rows(); ++r) s += x(r) * std::conj(m(r, i));
    c[static_cast<std::size_t>(i)] = s;
  }
  return c;
}

// Σ_{i∈J} c_i m_i.
CVec combine(const CMat& m, const IndexSubset& j, const std::vector<Complex>& c) {
  CVec out = CVec::Zero(m.rows());
  for (Index i : j.indices()) out += c[static_cast<std::size_t>(i)] * m.col(i);
  return out;
}

// Σ_{i∈J} a_i·conj(b_i).
Complex cross_sum(const IndexSubset& j, const std::vector<Complex>& a, const std::vector<Complex>& b) {
  Complex s{};
  for (Index i : j.indices()) {
    const auto k = static_cast<std::size_t>(i);
    s += a[k] * std::conj(b[k]);
  }
  return s;
}

struct SplitOperators {
  IndexSubset complement;
  CMat s_j;
  CMat s_jc;
};

SplitOperators split(const KFrame& frame, const IndexSubset& j) {
  j.validate(frame.count());
  SplitOperators s;
  s.complement = j.complement(frame.count());
  s.s_j = partial_frame_operator(frame, j);
  s.s_jc = partial_frame_operator(frame, s.complement);
  return s;
}

bool approx_one(double v, double tol) { return make_identity_report(v, 1.0, tol).pass; }

}  // namespace

IdentityReport check_thm_2_1(const DualPair& pair, const IndexSubset& j, const CVec& f, double tol) {
  const KFrame& frame = pair.frame;
  require_vector(f, frame.dim());
  j.validate(frame.count());
  const IndexSubset jc = j.complement(frame.count());
  const CVec kf = pair.op.matrix() * f;
  const auto c = inner_with_columns(pair.dual_vectors, f);  // ⟨f, g_i⟩
  const auto k = inner_with_columns(frame.vectors(), kf);    // ⟨Kf, f_i⟩

  const Complex lhs = cross_sum(j, c, k) - combine(frame.vectors(), j, c).squaredNorm();
  const Complex rhs = std::conj(cross_sum(jc, c, k)) - combine(frame.vectors(), jc, c).squaredNorm();

  const CVec mj = mixed_operator(pair, j) * f;
  const CVec mjc = mixed_operator(pair, jc) * f;
  const Complex lhs_op = kf.dot(mj) - mj.squaredNorm();
  const Complex rhs_op = mjc.dot(kf) - mjc.squaredNorm();
  return make_identity_report(lhs, rhs, tol, path_gap(lhs, lhs_op, rhs, rhs_op));
}

IdentityReport check_cor_2_2(const KFrame& frame, const OperatorK& k, const IndexSubset& j,
                             const CVec& f, double tol) {
  require_same_dim(frame, k);
  require_vector(f, frame.dim());
  j.validate(frame.count());
  const IndexSubset jc = j.complement(frame.count());
  const CMat x_f = canonical_xf(frame, k, tol);
  const CVec coeff = x_f * f;
  const std::vector<Complex> c(coeff.data(), coeff.data() + coeff.size());
  const CVec kf = k.matrix() * f;

  const CVec tj = combine(frame.vectors(), j, c);
  const CVec tjc = combine(frame.vectors(), jc, c);
  const Complex lhs = inner(tj, kf) - tj.squaredNorm();
  const Complex rhs = std::conj(inner(tjc, kf)) - tjc.squaredNorm();

  const DualPair pair = make_dual_pair(frame, x_f.adjoint(), k);
  const CVec mj = mixed_operator(pair, j) * f;
  const CVec mjc = mixed_operator(pair, jc) * f;
  const Complex lhs_op = kf.dot(mj) - mj.squaredNorm();
  const Complex rhs_op = mjc.dot(kf) - mjc.squaredNorm();
  return make_identity_report(lhs, rhs, tol, path_gap(lhs, lhs_op, rhs, rhs_op));
}

IdentityReport check_thm_2_3(const DualPair& pair, const CVec& alpha, const CVec& f, double tol) {
  const KFrame& frame = pair.frame;
  require_vector(f, frame.dim());
  if (alpha.size() != frame.count()) {
    throw Error(ErrorCode::DimensionMismatch, "weight sequence length differs from frame count");
  }
  require_finite(alpha, "weights");
  const CVec kf = pair.op.matrix() * f;
  const auto c = inner_with_columns(pair.dual_vectors, f);
  const auto k = inner_with_columns(frame.vectors(), kf);

  Complex lhs_sum{}, rhs_sum{};
  CVec lhs_vec = CVec::Zero(frame.dim());
  CVec rhs_vec = CVec::Zero(frame.dim());
  for (Index i = 0; i < frame.count(); ++i) {
    const auto s = static_cast<std::size_t>(i);
    const Complex a = alpha(i);
    lhs_sum += a * c[s] * std::conj(k[s]);
    rhs_sum += (1.0 - std::conj(a)) * std::conj(c[s]) * k[s];
    lhs_vec += a * c[s] * frame.vectors().col(i);
    rhs_vec += (1.0 - a) * c[s] * frame.vectors().col(i);
  }
  const Complex lhs = lhs_sum - lhs_vec.squaredNorm();
  const Complex rhs = rhs_sum - rhs_vec.squaredNorm();

  const CVec ones = CVec::Ones(frame.count());
  const CMat m_alpha = frame.vectors() * alpha.asDiagonal() * pair.dual_vectors.adjoint();
  const CMat m_rest = frame.vectors() * (ones - alpha).asDiagonal() * pair.dual_vectors.adjoint();
  const CVec ma = m_alpha * f;
  const CVec mr = m_rest * f;
  const Complex lhs_op = kf.dot(ma) - ma.squaredNorm();
  const Complex rhs_op = mr.dot(kf) - mr.squaredNorm();
  return make_identity_report(lhs, rhs, tol, path_gap(lhs, lhs_op, rhs, rhs_op));
}

IdentityReport check_thm_2_4(const KFrame& frame, const OperatorK& k, const IndexSubset& j,
                             const IndexSubset& e, const CVec& f, double tol) {
  require_vector(f, frame.dim());
  require_parseval(frame, k, tol);
  j.validate(frame.count());
  e.validate(frame.count());
  if (!j.disjoint(e)) throw Error(ErrorCode::OverlappingSubsets, "E must lie in the complement of J");

  const IndexSubset jc = j.complement(frame.count());
  const IndexSubset j_e = j.united(e);
  const IndexSubset jc_e = jc.minus(e);
  const CMat kk = k.gram();
  const CVec kkf = kk * f;

  const auto c = inner_with_columns(frame.vectors(), f);
  const auto p = inner_with_columns(frame.vectors(), kkf);
  const double e_term = 2.0 * cross_sum(e, c, p).real();
  const double e_term_op = 2.0 * kkf.dot(partial_frame_operator(frame, e) * f).real();

  auto op_sq = [&](const IndexSubset& s) { return (partial_frame_operator(frame, s) * f).squaredNorm(); };
  auto coef_sq = [&](const IndexSubset& s) { return combine(frame.vectors(), s, c).squaredNorm(); };

  const double lhs = op_sq(j_e) - op_sq(jc_e);
  const double rhs = op_sq(j) - op_sq(jc) + e_term;
  const double lhs_alt = coef_sq(j_e) - coef_sq(jc_e);
  const double rhs_alt = coef_sq(j) - coef_sq(jc) + e_term_op;
  return make_identity_report(lhs, rhs, tol, path_gap(lhs, lhs_alt, rhs, rhs_alt));
}

Thm25Report check_thm_2_5(const KFrame& frame, const OperatorK& k, const IndexSubset& j,
                          const CVec& f, double tol) {
  require_vector(f, frame.dim());
  require_parseval(frame, k, tol);
  const SplitOperators sp = split(frame, j);
  const CVec kkf = k.gram() * f;
  const auto c = inner_with_columns(frame.vectors(), f);
  const auto p = inner_with_columns(frame.vectors(), kkf);

  const double lhs = cross_sum(sp.complement, c, p).real() + combine(frame.vectors(), j, c).squaredNorm();
  const double rhs = cross_sum(j, c, p).real() + combine(frame.vectors(), sp.complement, c).squaredNorm();

  const CVec sjf = sp.s_j * f;
  const CVec sjcf = sp.s_jc * f;
  const double lhs_op = kkf.dot(sjcf).real() + sjf.squaredNorm();
  const double rhs_op = kkf.dot(sjf).real() + sjcf.squaredNorm();

  Thm25Report r;
  r.equality = make_identity_report(lhs, rhs, tol, path_gap(lhs, lhs_op, rhs, rhs_op));
  r.bound = make_inequality_report(0.75 * kkf.squaredNorm(), lhs, tol);
  return r;
}

VConstants v_constants(const KFrame& frame, const OperatorK& k, const IndexSubset& j, double tol) {
  require_same_dim(frame, k);
  const Svd ks = svd(k.matrix());
  if (ks.sigma(0) == 0.0) throw Error(ErrorCode::ZeroOperator, "v± are undefined for K = 0");
  require_parseval(frame, k, tol);
  const SplitOperators sp = split(frame, j);

  Index rank = 0;
  while (rank < ks.sigma.size() && ks.sigma(rank) > kRangeRankTol * ks.sigma(0)) ++rank;
  const CMat w = ks.u.leftCols(rank);
  // Substituting f = (KK*)⁺y turns the pencil (Q, (KK*)²) on R(K) into an
  // ordinary Rayleigh quotient of
  //   N = Herm((KK*)⁺ S_{J^c}) + (S_J (KK*)⁺)ᴴ (S_J (KK*)⁺),
  // which keeps the conditioning at κ(K)² instead of κ(K)⁴.
  const RVec inv_sq = ks.sigma.head(rank).array().square().inverse().matrix();
  const CMat gram_pinv = w * inv_sq.asDiagonal() * w.adjoint();
  const CMat sj_scaled = sp.s_j * gram_pinv;
  const CMat n = hermitian_part(gram_pinv * sp.s_jc) + sj_scaled.adjoint() * sj_scaled;
  const RayleighExtrema ext =
      rayleigh_extrema_on_subspace(n, CMat::Identity(frame.dim(), frame.dim()), w, tol);

  VConstants v;
  v.v_plus = ext.max;
  v.v_minus = ext.min;
  v.subset = j;
  v.restricted_dim = rank;
  return v;
}

Thm27Report check_thm_2_7(const KFrame& frame, const OperatorK& k, const IndexSubset& j, double tol) {
  Thm27Report r;
  r.v = v_constants(frame, k, j, tol);
  r.v_complement = v_constants(frame, k, j.complement(frame.count()), tol);
  r.v_empty = v_constants(frame, k, IndexSubset::empty(), tol);
  r.v_full = v_constants(frame, k, IndexSubset::all(frame.count()), tol);

  r.k_norm = op_norm(k.matrix());
  r.k_pinv_norm = op_norm(pinv(k.matrix(), kRangeRankTol));
  const double cond = r.k_norm * r.k_pinv_norm;
  r.proof_bound = cond * (1.0 + cond);
  r.stated_bound = cond * (1.0 + r.k_norm);

  r.lower = make_inequality_report(0.75, r.v.v_minus, tol);
  r.ordered = make_inequality_report(r.v.v_minus, r.v.v_plus, tol);
  r.upper = make_inequality_report(r.v.v_plus, r.proof_bound, tol);
  r.stated_bound_holds = make_inequality_report(r.v.v_plus, r.stated_bound, tol).pass;
  r.symmetric_plus = make_identity_report(r.v.v_plus, r.v_complement.v_plus, tol);
  r.symmetric_minus = make_identity_report(r.v.v_minus, r.v_complement.v_minus, tol);
  r.trivial_subsets_ok = approx_one(r.v_empty.v_plus, tol) && approx_one(r.v_empty.v_minus, tol) &&
                         approx_one(r.v_full.v_plus, tol) && approx_one(r.v_full.v_minus, tol);
  r.pass = r.lower.pass && r.ordered.pass && r.upper.pass && r.symmetric_plus.pass &&
           r.symmetric_minus.pass && r.trivial_subsets_ok;
  return r;
}

Lemma26Report check_lemma_2_6(const KFrame& frame, const OperatorK& k, const CVec& f, double tol) {
  require_vector(f, frame.dim());
  const CMat x_f = canonical_xf(frame, k, tol);
  const double sf_norm = op_norm(frame_operator(frame));
  const IndexSubset everything = IndexSubset::all(frame.count());

  auto energy = [](const std::vector<Complex>& c) {
    double s = 0.0;
    for (const Complex& v : c) s += std::norm(v);
    return s;
  };

  Lemma26Report r;
  const auto c = inner_with_columns(frame.vectors(), f);
  r.bessel = make_inequality_report(combine(frame.vectors(), everything, c).squaredNorm(),
                                    sf_norm * energy(c), tol);

  const CMat w = range_basis(k.matrix(), kRangeRankTol);
  const CVec fr = w * (w.adjoint() * f);
  const auto cr = inner_with_columns(frame.vectors(), fr);
  const double kp = op_norm(pinv(k.matrix(), kRangeRankTol));
  const double xn = op_norm(x_f);
  r.lower = make_inequality_report(
      energy(cr), kp * kp * xn * xn * combine(frame.vectors(), everything, cr).squaredNorm(), tol);
  return r;
}

Cor28Report check_cor_2_8(const KFrame& frame, const OperatorK& k, const IndexSubset& j,
                          const std::vector<CVec>& batch, double tol) {
  Cor28Report r;
  r.v = v_constants(frame, k, j, tol);
  r.cond_i = approx_one(r.v.v_plus, tol) && approx_one(r.v.v_minus, tol);

  const IndexSubset jc = j.complement(frame.count());
  const CMat kk = k.gram();
  for (const CVec& f : batch) {
    require_vector(f, frame.dim());
    const auto c = inner_with_columns(frame.vectors(), f);
    const auto p = inner_with_columns(frame.vectors(), kk * f);
    const Complex c_j = cross_sum(j, c, p);
    const Complex c_jc = cross_sum(jc, c, p);
    const double n_j = combine(frame.vectors(), j, c).squaredNorm();
    const double n_jc = combine(frame.vectors(), jc, c).squaredNorm();
    const double scale = 1.0 + n_j + n_jc + std::abs(c_j) + std::abs(c_jc);
    r.worst_ii = std::max(r.worst_ii, std::abs(n_j - c_j.real()) / scale);
    r.worst_iii = std::max(r.worst_iii, std::abs(n_jc - c_jc.real()) / scale);
  }
  r.cond_ii = r.worst_ii <= tol;
  r.cond_iii = r.worst_iii <= tol;
  r.agree = r.cond_i == r.cond_ii && r.cond_ii == r.cond_iii;
  return r;
}

Cor29Report check_cor_2_9(const KFrame& frame, const OperatorK& k, const IndexSubset& j,
                          const CVec& f, double tol) {
  require_vector(f, frame.dim());
  require_parseval(frame, k, tol);
  const SplitOperators sp = split(frame, j);
  const auto c = inner_with_columns(frame.vectors(), f);
  const auto p = inner_with_columns(frame.vectors(), k.gram() * f);
  const Complex c_j = cross_sum(j, c, p);
  const Complex c_jc = cross_sum(sp.complement, c, p);
  const CVec sjf = combine(frame.vectors(), j, c);
  const CVec sjcf = combine(frame.vectors(), sp.complement, c);

  Cor29Report r;
  r.defect[0] = sjf.squaredNorm() - c_j;
  r.defect[1] = sjcf.squaredNorm() - c_jc;
  r.defect[2] = inner(sjf, sjcf);
  r.defect[3] = inner(f, CVec(sp.s_jc * (sp.s_j * f)));
  r.scale = 1.0 + sjf.squaredNorm() + sjcf.squaredNorm() + std::abs(c_j) + std::abs(c_jc);
  for (int q = 0; q < 4; ++q) {
    r.holds[q] = std::abs(r.defect[q].real()) <= tol * r.scale &&
                 std::abs(r.defect[q].imag()) <= tol * r.scale;
  }
  r.agree = r.holds[0] == r.holds[1] && r.holds[1] == r.holds[2] && r.holds[2] == r.holds[3];
  return r;
}

}  // namespace kframes
