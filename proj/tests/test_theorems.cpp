#include "doctest.h"
#include "oracles.hpp"

#include <Eigen/Eigenvalues>

#include "kframes/douglas.hpp"
#include "kframes/theorems.hpp"

using namespace kframes;

namespace {

CMat eye(Index n) { return CMat::Identity(n, n); }

struct Parseval {
  OperatorK k;
  KFrame f;
};

Parseval parseval_instance(std::uint64_t seed, Index d, Index n, Index rank) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.dim = d;
  cfg.count = n;
  cfg.k_rank = rank;
  OperatorK k = gen_operator(cfg);
  KFrame f = gen_parseval_kframe(k, n, seed);
  return {k, f};
}

struct KInstance {
  OperatorK k;
  KFrame f;
};

KInstance kframe_instance(std::uint64_t seed, Index d, Index n, Index rank) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.dim = d;
  cfg.count = n;
  cfg.k_rank = rank;
  OperatorK k = gen_operator(cfg);
  KFrame f = gen_kframe(cfg, k);
  return {k, f};
}

IndexSubset random_subset(Index n, Rng& rng) {
  std::vector<Index> idx;
  for (Index i = 0; i < n; ++i) {
    if (rng.below(2)) idx.push_back(i);
  }
  return IndexSubset::from_indices(idx, n);
}

// A unit vector in null(K*).
CVec kernel_of_adjoint(const OperatorK& k) {
  Eigen::JacobiSVD<CMat> s(k.matrix(), Eigen::ComputeFullU);
  return s.matrixU().col(k.dim() - 1);
}

// Both sides of the dual-pair identity by direct summation.
std::pair<Complex, Complex> dual_identity_oracle(const DualPair& p, const IndexSubset& j, const CVec& f) {
  const CMat& t = p.frame.vectors();
  const CVec kf = p.op.matrix() * f;
  Complex ls = 0.0, rs = 0.0;
  CVec lv = CVec::Zero(t.rows()), rv = CVec::Zero(t.rows());
  for (Index i = 0; i < t.cols(); ++i) {
    const Complex c = oracle::ip(f, p.dual_vectors.col(i));
    const Complex k = oracle::ip(kf, t.col(i));
    if (j.contains(i)) {
      ls += c * std::conj(k);
      lv += c * t.col(i);
    } else {
      rs += std::conj(c) * k;
      rv += c * t.col(i);
    }
  }
  return {ls - lv.squaredNorm(), rs - rv.squaredNorm()};
}

// Extremes of the v± quotient under the (Q, D) pencil formulation.
std::pair<double, double> naive_pencil(const KFrame& f, const OperatorK& k, const IndexSubset& j) {
  const CMat kk = k.gram();
  const CMat sj = oracle::rank1_sum(f.vectors(), j.indices());
  const CMat sjc = oracle::rank1_sum(f.vectors(), j.complement(f.count()).indices());
  const CMat q0 = kk * sjc;
  const CMat q = (q0 + q0.adjoint()) / 2.0 + sj * sj;
  const CMat d = kk * kk;
  Eigen::JacobiSVD<CMat> s(k.matrix(), Eigen::ComputeFullU);
  Index r = 0;
  while (r < k.dim() && s.singularValues()(r) > 1e-10 * s.singularValues()(0)) ++r;
  const CMat w = s.matrixU().leftCols(r);
  const CMat qr = w.adjoint() * q * w;
  const CMat dr = w.adjoint() * d * w;
  Eigen::GeneralizedSelfAdjointEigenSolver<CMat> ges(qr, dr, Eigen::EigenvaluesOnly);
  return {ges.eigenvalues()(0), ges.eigenvalues()(r - 1)};
}

// Monte-Carlo search over R(K), sampling both isotropically in R(K) and
// through f = (KK*)⁺y.
std::pair<double, double> monte_carlo_v(const KFrame& f, const OperatorK& k, const IndexSubset& j, int samples,
                                        std::uint64_t seed) {
  Eigen::JacobiSVD<CMat> s(k.matrix(), Eigen::ComputeFullU);
  Index r = 0;
  while (r < k.dim() && s.singularValues()(r) > 1e-10 * s.singularValues()(0)) ++r;
  const CMat w = s.matrixU().leftCols(r);
  CMat gp = CMat::Zero(k.dim(), k.dim());
  for (Index i = 0; i < r; ++i) {
    gp += w.col(i) * w.col(i).adjoint() / std::pow(s.singularValues()(i), 2);
  }
  const std::vector<Index> jj = j.indices();
  const std::vector<Index> jc = j.complement(f.count()).indices();
  Rng rng(seed);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < samples; ++i) {
    const CVec c = rng.gaussian_vector(r);
    const CVec x = (i % 2 == 0) ? CVec(w * c) : CVec(gp * (w * c));
    const double q = oracle::v_quotient(f.vectors(), k.matrix(), jj, jc, x);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  return {lo, hi};
}

}  // namespace

TEST_CASE("dual-pair identity: boundary cases") {
  const DualPair onb = canonical_kdual(KFrame(eye(3)), OperatorK(eye(3)));
  Rng rng(1);
  const CVec f = rng.gaussian_vector(3);
  for (const char* s : {"empty", "all", "0,2"}) {
    const IdentityReport r = check_thm_2_1(onb, IndexSubset::parse(s, 3), f);
    CHECK(r.pass);
    CHECK(std::abs(r.lhs) <= 1e-12);
    CHECK(std::abs(r.rhs) <= 1e-12);
  }
}

TEST_CASE("dual-pair identity against brute-force sums") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const KInstance in = kframe_instance(seed, 4, 7, 1 + seed % 4);
    Rng rng(seed + 1000);
    const DualPair p = parametrized_kdual(in.f, in.k, rng.gaussian(7, 4));
    const IndexSubset j = random_subset(7, rng);
    const CVec f = rng.gaussian_vector(4);
    const IdentityReport r = check_thm_2_1(p, j, f);
    const auto [lhs, rhs] = dual_identity_oracle(p, j, f);
    CHECK(r.pass);
    CHECK(r.rel_err <= 1e-9);
    CHECK(r.path_err <= 1e-10);
    CHECK(std::abs(r.lhs - lhs) <= 1e-10 * (1.0 + std::abs(lhs)));
    CHECK(std::abs(r.rhs - rhs) <= 1e-10 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("corrupted duals break the identity") {
  const KInstance in = kframe_instance(5, 4, 7, 4);
  DualPair p = canonical_kdual(in.f, in.k);
  Rng rng(6);
  CMat g = p.dual_vectors;
  g.col(2) += 1e-3 * (1.0 + op_norm(g)) * rng.gaussian_vector(4).normalized();
  const DualPair bad = make_dual_pair(in.f, g, in.k);
  CHECK_FALSE(bad.valid());
  int failures = 0;
  for (int i = 0; i < 10; ++i) {
    failures += !check_thm_2_1(bad, random_subset(7, rng), rng.gaussian_vector(4)).pass;
  }
  CHECK(failures > 0);
}

TEST_CASE("X_F form agrees with the canonical dual") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const KInstance in = kframe_instance(seed, 3, 5, 2);
    Rng rng(seed);
    const IndexSubset j = random_subset(5, rng);
    const CVec f = rng.gaussian_vector(3);
    const IdentityReport a = check_cor_2_2(in.f, in.k, j, f);
    const IdentityReport b = check_thm_2_1(canonical_kdual(in.f, in.k), j, f);
    CHECK(a.pass);
    CHECK(std::abs(a.lhs - b.lhs) <= 1e-12 * (1.0 + std::abs(b.lhs)));
    CHECK(std::abs(a.rhs - b.rhs) <= 1e-12 * (1.0 + std::abs(b.rhs)));
  }
  const IdentityReport all = check_cor_2_2(KFrame(eye(2)), OperatorK(eye(2)), IndexSubset::all(2), CVec::Ones(2));
  CHECK(std::abs(all.lhs) <= 1e-14);
  CHECK(std::abs(all.rhs) <= 1e-14);
}

TEST_CASE("weighted identity") {
  const KInstance in = kframe_instance(21, 4, 6, 3);
  Rng rng(22);
  const DualPair p = parametrized_kdual(in.f, in.k, rng.gaussian(6, 4));
  for (int trial = 0; trial < 50; ++trial) {
    const CVec f = rng.gaussian_vector(4);
    const IndexSubset j = random_subset(6, rng);
    CVec ind = CVec::Zero(6);
    for (Index i : j.indices()) ind(i) = 1.0;
    const IdentityReport w = check_thm_2_3(p, ind, f);
    const IdentityReport b = check_thm_2_1(p, j, f);
    CHECK(std::abs(w.lhs - b.lhs) <= 1e-12 * (1.0 + std::abs(b.lhs)));
    CHECK(std::abs(w.rhs - b.rhs) <= 1e-12 * (1.0 + std::abs(b.rhs)));

    CVec alpha(6);
    for (Index i = 0; i < 6; ++i) alpha(i) = std::polar(2.0 * std::sqrt(rng.uniform()), 6.283185307179586 * rng.uniform());
    const IdentityReport r = check_thm_2_3(p, alpha, f);
    CHECK(r.pass);
    CHECK(r.path_err <= 1e-10);
  }
  const IdentityReport ones = check_thm_2_3(p, CVec::Ones(6), CVec::Ones(4));
  CHECK(std::abs(ones.lhs) <= 1e-9 * (1.0 + op_norm(in.k.matrix())));
  CHECK(std::abs(ones.rhs) <= 1e-12);
}

TEST_CASE("moving E across a Parseval split") {
  const Parseval in = parseval_instance(30, 4, 7, 3);
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const IndexSubset j = random_subset(7, rng);
    const IndexSubset jc = j.complement(7);
    std::vector<Index> e_idx;
    for (Index i : jc.indices()) {
      if (rng.below(2)) e_idx.push_back(i);
    }
    const IndexSubset e = IndexSubset::from_indices(e_idx, 7);
    const CVec f = rng.gaussian_vector(4);
    for (const IndexSubset& ee : {e, IndexSubset::empty(), jc}) {
      const IdentityReport r = check_thm_2_4(in.f, in.k, j, ee, f);
      CHECK(r.pass);
      CHECK(r.path_err <= 1e-10);
    }
    // Brute force for the random E.
    const CMat& t = in.f.vectors();
    const CVec kkf = in.k.gram() * f;
    Complex e_sum = 0.0;
    for (Index i : e.indices()) e_sum += oracle::ip(f, t.col(i)) * std::conj(oracle::ip(kkf, t.col(i)));
    const double rhs = oracle::partial_apply(t, j.indices(), f).squaredNorm() -
                       oracle::partial_apply(t, jc.indices(), f).squaredNorm() + 2.0 * e_sum.real();
    CHECK(std::abs(check_thm_2_4(in.f, in.k, j, e, f).rhs.real() - rhs) <= 1e-10 * (1.0 + std::abs(rhs)));
  }
  try {
    check_thm_2_4(in.f, in.k, IndexSubset::from_indices({0, 1}, 7), IndexSubset::from_indices({1}, 7),
                  CVec::Ones(4));
    FAIL("expected OverlappingSubsets");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OverlappingSubsets);
  }
}

TEST_CASE("Parseval equality and the 3/4 bound") {
  const Parseval deficient = parseval_instance(40, 4, 6, 2);
  const CVec z = kernel_of_adjoint(deficient.k);
  const Thm25Report zr = check_thm_2_5(deficient.f, deficient.k, IndexSubset::from_indices({1, 3}, 6), z);
  CHECK(std::abs(zr.equality.lhs) <= 1e-12);
  CHECK(zr.bound.pass);

  Rng rng(41);
  CVec unit = rng.gaussian_vector(3);
  unit.normalize();
  const Thm25Report onb = check_thm_2_5(KFrame(eye(3)), OperatorK(eye(3)), IndexSubset::empty(), unit);
  CHECK(onb.equality.lhs.real() == doctest::Approx(1.0));
  CHECK(onb.bound.lesser == doctest::Approx(0.75));

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Parseval in = parseval_instance(seed, 5, 8, 1 + seed % 5);
    Rng r(seed);
    const Thm25Report rep = check_thm_2_5(in.f, in.k, random_subset(8, r), r.gaussian_vector(5));
    CHECK(rep.equality.pass);
    CHECK(rep.equality.path_err <= 1e-10);
    CHECK(rep.bound.pass);
  }
}

TEST_CASE("v constants: trivial subsets and oracles") {
  const Parseval in = parseval_instance(21, 3, 5, 3);
  const VConstants empty = v_constants(in.f, in.k, IndexSubset::empty());
  const VConstants full = v_constants(in.f, in.k, IndexSubset::all(5));
  CHECK(std::abs(empty.v_plus - 1.0) <= 1e-9);
  CHECK(std::abs(empty.v_minus - 1.0) <= 1e-9);
  CHECK(std::abs(full.v_plus - 1.0) <= 1e-9);
  CHECK(std::abs(full.v_minus - 1.0) <= 1e-9);

  const IndexSubset j = IndexSubset::from_indices({0, 2}, 5);
  const VConstants v = v_constants(in.f, in.k, j);
  const VConstants vc = v_constants(in.f, in.k, j.complement(5));
  CHECK(std::abs(v.v_plus - vc.v_plus) <= 1e-9);
  CHECK(std::abs(v.v_minus - vc.v_minus) <= 1e-9);
  CHECK(std::abs(v.v_minus - 0.7511864659197377) <= 1e-9);
  CHECK(std::abs(v.v_plus - 2.793400500104203) <= 1e-9);

  const auto [lo, hi] = monte_carlo_v(in.f, in.k, j, 100000, 99);
  CHECK(lo >= v.v_minus - 1e-9);
  CHECK(hi <= v.v_plus + 1e-9);
  CHECK(lo <= v.v_minus + 1e-2);
  CHECK(hi >= v.v_plus - 5e-2);

  const auto [nlo, nhi] = naive_pencil(in.f, in.k, j);
  CHECK(std::abs(nlo - v.v_minus) <= 1e-9);
  CHECK(std::abs(nhi - v.v_plus) <= 1e-9);
}

TEST_CASE("v constants on random instances") {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    const Parseval in = parseval_instance(seed, 4, 6, 1 + seed % 4);
    Rng rng(seed);
    const IndexSubset j = random_subset(6, rng);
    const VConstants v = v_constants(in.f, in.k, j);
    CHECK(v.v_minus >= 0.75 - 1e-9);
    const auto [nlo, nhi] = naive_pencil(in.f, in.k, j);
    CHECK(std::abs(nlo - v.v_minus) <= 1e-8 * (1.0 + std::abs(nlo)));
    CHECK(std::abs(nhi - v.v_plus) <= 1e-8 * (1.0 + std::abs(nhi)));
    const auto [lo, hi] = monte_carlo_v(in.f, in.k, j, 20000, seed);
    CHECK(lo >= v.v_minus - 1e-9);
    CHECK(hi <= v.v_plus + 1e-9);
  }
  try {
    v_constants(KFrame(CMat::Zero(2, 3)), OperatorK(CMat::Zero(2, 2)), IndexSubset::empty());
    FAIL("expected ZeroOperator");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroOperator);
  }
}

TEST_CASE("v constant bounds") {
  const Thm27Report onb = check_thm_2_7(KFrame(eye(3)), OperatorK(eye(3)), IndexSubset::from_indices({1}, 3));
  CHECK(onb.pass);
  CHECK(onb.v.v_plus == doctest::Approx(1.0));
  CHECK(onb.v.v_minus == doctest::Approx(1.0));
  CHECK(onb.proof_bound == doctest::Approx(2.0));

  int stated_violations = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Parseval in = parseval_instance(seed, 3, 6, 1 + seed % 3);
    Rng rng(seed);
    const Thm27Report r = check_thm_2_7(in.f, in.k, random_subset(6, rng));
    CHECK(r.pass);
    CHECK(r.trivial_subsets_ok);
    stated_violations += !r.stated_bound_holds;
  }
  // ‖K‖‖K†‖(1 + ‖K‖) is smaller than the proven bound when ‖K‖ < ‖K‖‖K†‖
  // and is exceeded on some of these instances.
  MESSAGE("stated-bound violations: " << stated_violations);
}

TEST_CASE("lemma inequalities") {
  const KInstance in = kframe_instance(50, 4, 7, 3);
  const Lemma26Report zero = check_lemma_2_6(in.f, in.k, CVec::Zero(4));
  CHECK(zero.bessel.pass);
  CHECK(zero.lower.pass);
  CHECK(zero.bessel.greater == 0.0);

  Rng rng(51);
  const CVec f = rng.gaussian_vector(2);
  const Lemma26Report onb = check_lemma_2_6(KFrame(eye(2)), OperatorK(eye(2)), f);
  CHECK(std::abs(onb.bessel.margin) <= 1e-12);
  CHECK(std::abs(onb.lower.margin) <= 1e-12);

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const KInstance r = kframe_instance(seed, 4, 6, 1 + seed % 4);
    Rng g(seed);
    const Lemma26Report rep = check_lemma_2_6(r.f, r.k, g.gaussian_vector(4));
    CHECK(rep.bessel.pass);
    CHECK(rep.lower.pass);
  }
}

TEST_CASE("three equivalent conditions") {
  Rng rng(60);
  std::vector<CVec> batch;
  for (int i = 0; i < 200; ++i) batch.push_back(rng.gaussian_vector(3));
  const Cor28Report onb = check_cor_2_8(KFrame(eye(3)), OperatorK(eye(3)), IndexSubset::from_indices({0}, 3), batch);
  CHECK(onb.cond_i);
  CHECK(onb.cond_ii);
  CHECK(onb.cond_iii);
  CHECK(onb.agree);

  const Parseval in = parseval_instance(61, 3, 6, 3);
  const Cor28Report full = check_cor_2_8(in.f, in.k, IndexSubset::all(6), batch);
  CHECK(full.cond_i);
  CHECK(full.cond_ii);
  CHECK(full.cond_iii);

  const IndexSubset j = IndexSubset::from_indices({1, 2, 4}, 6);
  const Cor28Report generic = check_cor_2_8(in.f, in.k, j, batch);
  CHECK(generic.v.v_plus > 1.0);
  CHECK_FALSE(generic.cond_i);
  CHECK_FALSE(generic.cond_ii);
  CHECK_FALSE(generic.cond_iii);
  CHECK(generic.agree);
}

TEST_CASE("four pointwise conditions") {
  const Parseval in = parseval_instance(70, 4, 6, 2);
  const Cor29Report null = check_cor_2_9(in.f, in.k, IndexSubset::from_indices({0, 5}, 6), kernel_of_adjoint(in.k));
  for (bool h : null.holds) CHECK(h);
  Rng rng(71);
  const Cor29Report empty = check_cor_2_9(in.f, in.k, IndexSubset::empty(), rng.gaussian_vector(4));
  for (bool h : empty.holds) CHECK(h);

  int disagreements = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Parseval r = parseval_instance(seed, 3, 5, 1 + seed % 3);
    Rng g(seed);
    disagreements += !check_cor_2_9(r.f, r.k, random_subset(5, g), g.gaussian_vector(3)).agree;
  }
  CHECK(disagreements == 0);
}
