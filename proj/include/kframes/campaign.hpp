#pragma once

// Seeded verification campaigns over the registered checkers.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kframes/random.hpp"
#include "kframes/serialize.hpp"

namespace kframes {

/// What to corrupt before the checkers run.
enum class FaultKind { None, Dual, Parseval };

std::string to_string(FaultKind f);
FaultKind parse_fault_kind(const std::string& text);

struct CampaignConfig {
  GenConfig gen;
  /// Empty means every registered id.
  std::vector<std::string> theorems;
  FaultKind fault = FaultKind::None;
  /// Relative size of the injected perturbation.
  double fault_magnitude = 1e-3;
  /// Subsets drawn per trial under the random policy.
  int subsets_per_trial = 4;
  /// Random vectors f drawn per subset.
  int vectors_per_subset = 2;
  /// Vectors per Corollary-2.8 batch.
  int batch_size = 200;
  /// Worker threads; the report does not depend on it.
  int jobs = 1;

  void validate() const;
};

/// The registered ids, in report order.
const std::vector<std::string>& theorem_ids();

/// Sections above which a residual counts as a failure whatever `tol` is.
inline constexpr double kPathTol = 1e-10;
inline constexpr double kAffineEqualityTol = 1e-10;
inline constexpr double kFactorTol = 1e-10;
inline constexpr double kKernelTol = 1e-9;
inline constexpr double kInfimumDelta = 1e-4;

struct FailureRecord {
  std::uint64_t seed = 0;
  int trial = 0;
  std::uint64_t trial_seed = 0;
  std::string theorem;
  std::string subset;
  std::string detail;
};

struct SectionReport {
  std::string theorem;
  long checks = 0;
  long passed = 0;
  long failed = 0;
  /// Largest normalized residual; negative values are slack.
  double worst_residual = 0.0;
  int worst_trial = -1;
  std::uint64_t worst_trial_seed = 0;
  /// Informational counters that do not affect `pass`.
  std::map<std::string, long> notes;
  std::vector<FailureRecord> failures;

  bool pass() const { return checks > 0 && failed == 0; }
};

struct CampaignReport {
  CampaignConfig config;
  std::vector<SectionReport> sections;
  double wall_clock_seconds = 0.0;

  bool all_pass() const;
  const SectionReport* section(const std::string& id) const;
};

/// Throws UnknownTheoremId, BadConfig. Checker errors become failures.
CampaignReport run_campaign(const CampaignConfig& cfg);

Json campaign_config_to_json(const CampaignConfig& cfg);
/// Accepts the GenConfig keys plus theorems, inject, fault_magnitude,
/// subsets_per_trial, vectors_per_subset, batch_size, jobs.
CampaignConfig campaign_config_from_json(const Json& j, CampaignConfig base = {});

Json to_json(const CampaignReport& r, bool include_wall_clock = true);
std::string to_text(const CampaignReport& r);

}  // namespace kframes
