#pragma once

// Seeded instance generators.
//
// Randomness comes from std::mt19937_64, whose output sequence is fixed by
// the C++ standard. Uniform doubles take the top 53 bits; Gaussians use
// Box–Muller on those uniforms. No std::*_distribution is involved, so a
// seed reproduces the same instance on every platform.

#include <cstdint>
#include <random>
#include <string>

#include "kframes/frame.hpp"

namespace kframes {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  double normal();
  /// Circularly symmetric complex Gaussian with E|z|² = 1.
  Complex complex_normal();
  CMat gaussian(Index rows, Index cols);
  CVec gaussian_vector(Index n) { return gaussian(n, 1).col(0); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

/// Sub-seed of trial `trial`: mix64(seed ⊕ mix64(trial + 1)).
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

enum class SubsetPolicy { Random, ExhaustiveSmall };

std::string to_string(SubsetPolicy p);
SubsetPolicy parse_subset_policy(const std::string& text);

struct GenConfig {
  std::uint64_t seed = 0;
  Index dim = 4;
  Index count = 8;
  Index k_rank = 4;
  int trials = 100;
  double tol = kDefaultTol;
  SubsetPolicy subset_policy = SubsetPolicy::Random;
  /// Nonzero singular values of generated K are log-uniform in [sv_min, sv_max].
  double sv_min = 0.1;
  double sv_max = 10.0;

  /// Throws BadConfig on violated invariants.
  void validate() const;
};

/// Haar-distributed n×n unitary (QR of a complex Gaussian with phase fix).
CMat random_unitary(Index n, Rng& rng);

/// K = U·diag(s_1..s_r, 0..)·Vᴴ with U, V Haar unitaries.
OperatorK gen_operator(const GenConfig& cfg, Rng& rng);
OperatorK gen_operator(const GenConfig& cfg);

/// A K-frame of cfg.count vectors: an orthonormal basis of R(K) padded with
/// Gaussian vectors, mixed by a random n×n unitary.
KFrame gen_kframe(const GenConfig& cfg, const OperatorK& k, Rng& rng);
KFrame gen_kframe(const GenConfig& cfg, const OperatorK& k);

/// T_F = K·W with W the first d rows of an n×n Haar unitary, so S_F = KK*.
KFrame gen_parseval_kframe(const OperatorK& k, Index n, Rng& rng);
KFrame gen_parseval_kframe(const OperatorK& k, Index n, std::uint64_t seed);

/// Independent streams derived from one user seed.
inline constexpr std::uint64_t kOperatorStream = 0x6b6f70657261746fULL;
inline constexpr std::uint64_t kFrameStream = 0x6b6672616d657321ULL;

}  // namespace kframes
