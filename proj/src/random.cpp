#include "kframes/random.hpp"

#include <cmath>
#include <numbers>

namespace kframes {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) return 0;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) * std::numbers::sqrt2 * 0.5;
}

CMat Rng::gaussian(Index rows, Index cols) {
  CMat m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = complex_normal();
  }
  return m;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  return mix64(seed ^ mix64(trial + 1));
}

std::string to_string(SubsetPolicy p) {
  return p == SubsetPolicy::Random ? "random" : "exhaustive-small";
}

SubsetPolicy parse_subset_policy(const std::string& text) {
  if (text == "random") return SubsetPolicy::Random;
  if (text == "exhaustive-small") return SubsetPolicy::ExhaustiveSmall;
  throw Error(ErrorCode::BadConfig, "unknown subset policy '" + text + "'");
}

void GenConfig::validate() const {
  if (dim < 1) throw Error(ErrorCode::BadConfig, "dim must be >= 1");
  if (count < 1) throw Error(ErrorCode::BadConfig, "count must be >= 1");
  if (k_rank < 1 || k_rank > dim) throw Error(ErrorCode::BadConfig, "k_rank must lie in [1, dim]");
  if (trials < 1) throw Error(ErrorCode::BadConfig, "trials must be >= 1");
  if (!(tol > 0.0)) throw Error(ErrorCode::BadConfig, "tol must be positive");
  if (!(sv_min > 0.0) || !(sv_max >= sv_min) || !std::isfinite(sv_max)) {
    throw Error(ErrorCode::BadConfig, "need 0 < sv_min <= sv_max < inf");
  }
}

CMat random_unitary(Index n, Rng& rng) {
  const CMat g = rng.gaussian(n, n);
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ() * CMat::Identity(n, n);
  const CMat& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

OperatorK gen_operator(const GenConfig& cfg, Rng& rng) {
  cfg.validate();
  const CMat u = random_unitary(cfg.dim, rng);
  const CMat v = random_unitary(cfg.dim, rng);
  const double lo = std::log(cfg.sv_min);
  const double hi = std::log(cfg.sv_max);
  RVec s(cfg.k_rank);
  for (Index i = 0; i < cfg.k_rank; ++i) s(i) = cfg.sv_min == cfg.sv_max ? cfg.sv_min : std::exp(rng.uniform(lo, hi));
  return OperatorK(u.leftCols(cfg.k_rank) * s.asDiagonal() * v.leftCols(cfg.k_rank).adjoint());
}

OperatorK gen_operator(const GenConfig& cfg) {
  Rng rng(mix64(cfg.seed ^ kOperatorStream));
  return gen_operator(cfg, rng);
}

KFrame gen_kframe(const GenConfig& cfg, const OperatorK& k, Rng& rng) {
  cfg.validate();
  if (k.dim() != cfg.dim) throw Error(ErrorCode::BadConfig, "operator dim differs from cfg.dim");
  const CMat basis = range_basis(k.matrix(), kRangeRankTol);
  const Index r = basis.cols();
  if (cfg.count < r) {
    throw Error(ErrorCode::BadConfig, "count " + std::to_string(cfg.count) + " < rank(K) = " + std::to_string(r));
  }
  CMat cols(cfg.dim, cfg.count);
  cols.leftCols(r) = basis;
  if (cfg.count > r) cols.rightCols(cfg.count - r) = rng.gaussian(cfg.dim, cfg.count - r);
  return KFrame(cols * random_unitary(cfg.count, rng), "kframe");
}

KFrame gen_kframe(const GenConfig& cfg, const OperatorK& k) {
  Rng rng(mix64(cfg.seed ^ kFrameStream));
  return gen_kframe(cfg, k, rng);
}

KFrame gen_parseval_kframe(const OperatorK& k, Index n, Rng& rng) {
  if (n < k.dim()) {
    throw Error(ErrorCode::BadConfig, "a Parseval K-frame built as K·W needs n >= dim");
  }
  const CMat w = random_unitary(n, rng).topRows(k.dim());
  return KFrame(k.matrix() * w, "parseval");
}

KFrame gen_parseval_kframe(const OperatorK& k, Index n, std::uint64_t seed) {
  Rng rng(mix64(seed ^ kFrameStream));
  return gen_parseval_kframe(k, n, rng);
}

}  // namespace kframes
