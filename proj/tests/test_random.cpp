#include "doctest.h"

#include <cstring>

#include "kframes/random.hpp"

using namespace kframes;

namespace {

bool same_bytes(const CMat& a, const CMat& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(Complex) * static_cast<std::size_t>(a.size())) == 0;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ParseError;
}

}  // namespace

TEST_CASE("engine matches the standard's reference value") {
  Rng rng(5489);
  std::uint64_t x = 0;
  for (int i = 0; i < 10000; ++i) x = rng.next_u64();
  CHECK(x == 9981545732273789042ULL);
}

TEST_CASE("uniform and normal draws") {
  Rng rng(1);
  double sum = 0.0, sum_sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sum_sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sum_sq / n - 1.0) < 0.02);
  double c = 0.0;
  for (int i = 0; i < n; ++i) c += std::norm(rng.complex_normal());
  CHECK(std::abs(c / n - 1.0) < 0.02);
  for (int i = 0; i < 1000; ++i) CHECK(rng.below(7) < 7);
}

TEST_CASE("trial seeds are distinct and stable") {
  CHECK(trial_seed(0, 0) != trial_seed(0, 1));
  CHECK(trial_seed(1, 0) != trial_seed(0, 0));
  CHECK(trial_seed(42, 7) == trial_seed(42, 7));
  CHECK(mix64(0) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("operator generator") {
  GenConfig cfg;
  cfg.seed = 3;
  cfg.dim = 4;
  cfg.k_rank = 2;
  const OperatorK a = gen_operator(cfg);
  const OperatorK b = gen_operator(cfg);
  CHECK(same_bytes(a.matrix(), b.matrix()));
  const Svd s = svd(a.matrix());
  CHECK(s.sigma(0) <= 10.0 + 1e-12);
  CHECK(s.sigma(1) >= 0.1 - 1e-12);
  CHECK(s.sigma(2) <= 1e-12);

  GenConfig unit = cfg;
  unit.k_rank = 4;
  unit.sv_min = unit.sv_max = 1.0;
  const CMat u = gen_operator(unit).matrix();
  CHECK((u * u.adjoint() - CMat::Identity(4, 4)).norm() <= 1e-12);

  GenConfig bad = cfg;
  bad.k_rank = 0;
  CHECK(code_of([&] { gen_operator(bad); }) == ErrorCode::BadConfig);
  bad.k_rank = 5;
  CHECK(code_of([&] { gen_operator(bad); }) == ErrorCode::BadConfig);
}

TEST_CASE("K-frame generator contract") {
  GenConfig cfg;
  cfg.dim = 1;
  cfg.count = 1;
  cfg.k_rank = 1;
  const OperatorK k1 = gen_operator(cfg);
  CHECK(kframe_bounds(gen_kframe(cfg, k1), k1).is_kframe);

  GenConfig id = cfg;
  id.dim = id.count = id.k_rank = 3;
  const OperatorK eye(CMat::Identity(3, 3));
  const KFrame basis = gen_kframe(id, eye);
  CHECK(std::abs(basis.vectors().determinant()) > 1e-8);

  // rank(K) = 1 with a single vector: the vector spans range(K).
  GenConfig r1;
  r1.dim = 3;
  r1.count = 1;
  r1.k_rank = 1;
  const OperatorK kr1 = gen_operator(r1);
  const KFrame single = gen_kframe(r1, kr1);
  CHECK(kframe_bounds(single, kr1).is_kframe);

  GenConfig short_cfg = r1;
  short_cfg.k_rank = 2;
  CHECK(code_of([&] { gen_kframe(short_cfg, gen_operator(short_cfg)); }) == ErrorCode::BadConfig);

  int ok = 0;
  const int total = 10000;
  for (int i = 0; i < total; ++i) {
    GenConfig g;
    g.seed = static_cast<std::uint64_t>(i);
    Rng pick(mix64(g.seed));
    g.dim = 1 + static_cast<Index>(pick.below(6));
    g.k_rank = 1 + static_cast<Index>(pick.below(static_cast<std::uint64_t>(g.dim)));
    g.count = g.k_rank + static_cast<Index>(pick.below(8));
    const OperatorK k = gen_operator(g);
    ok += kframe_bounds(gen_kframe(g, k), k).is_kframe;
  }
  CHECK(ok == total);

  GenConfig g;
  g.seed = 77;
  const OperatorK k = gen_operator(g);
  CHECK(same_bytes(gen_kframe(g, k).vectors(), gen_kframe(g, k).vectors()));
}

TEST_CASE("Parseval generator contract") {
  const OperatorK eye(CMat::Identity(3, 3));
  const KFrame onb = gen_parseval_kframe(eye, 3, 1);
  CHECK((onb.vectors() * onb.vectors().adjoint() - CMat::Identity(3, 3)).norm() <= 1e-12);

  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    GenConfig g;
    g.seed = seed;
    g.dim = 2 + static_cast<Index>(seed % 5);
    g.k_rank = 1 + static_cast<Index>(seed % static_cast<std::uint64_t>(g.dim));
    g.count = g.dim + static_cast<Index>(seed % 4);
    const OperatorK k = gen_operator(g);
    const KFrame f = gen_parseval_kframe(k, g.count, seed);
    const CMat kk = k.gram();
    CHECK((frame_operator(f) - kk).norm() <= 1e-12 * kk.norm());
    CHECK(is_parseval_kframe(f, k, 1e-10).is_parseval);
  }
  const OperatorK k = gen_operator(GenConfig{});
  CHECK(same_bytes(gen_parseval_kframe(k, 8, 5).vectors(), gen_parseval_kframe(k, 8, 5).vectors()));
  CHECK(code_of([&] { gen_parseval_kframe(k, 3, 5); }) == ErrorCode::BadConfig);
}

TEST_CASE("subset policy names") {
  CHECK(parse_subset_policy("random") == SubsetPolicy::Random);
  CHECK(parse_subset_policy("exhaustive-small") == SubsetPolicy::ExhaustiveSmall);
  CHECK(to_string(SubsetPolicy::ExhaustiveSmall) == "exhaustive-small");
  CHECK(code_of([] { parse_subset_policy("all"); }) == ErrorCode::BadConfig);
}
