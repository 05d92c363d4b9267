#include "doctest.h"

#include "kframes/campaign.hpp"

using namespace kframes;

namespace {

CampaignConfig small(std::uint64_t seed, int trials) {
  CampaignConfig c;
  c.gen.seed = seed;
  c.gen.dim = 3;
  c.gen.count = 5;
  c.gen.k_rank = 2;
  c.gen.trials = trials;
  c.batch_size = 50;
  return c;
}

std::string stable_dump(const CampaignReport& r) { return to_json(r, false).dump(); }

}  // namespace

TEST_CASE("smoke run covers every registered section") {
  CampaignConfig c;
  c.gen.dim = 2;
  c.gen.count = 3;
  c.gen.k_rank = 2;
  c.gen.trials = 1;
  const CampaignReport r = run_campaign(c);
  CHECK(r.sections.size() == 15);
  for (const auto& s : r.sections) {
    INFO(s.theorem);
    CHECK(s.checks > 0);
    CHECK(s.pass());
  }
  CHECK(r.all_pass());
}

TEST_CASE("exhaustive policy enumerates all subsets") {
  CampaignConfig c;
  c.gen.dim = 2;
  c.gen.count = 4;
  c.gen.k_rank = 2;
  c.gen.trials = 1;
  c.gen.subset_policy = SubsetPolicy::ExhaustiveSmall;
  c.vectors_per_subset = 1;
  c.theorems = {"cor2.2", "thm2.7", "cor2.9"};
  const CampaignReport r = run_campaign(c);
  CHECK(r.section("cor2.2")->checks == 16);
  CHECK(r.section("thm2.7")->checks == 16);
  // 16 generic subsets plus the split instance.
  CHECK(r.section("cor2.9")->checks == 17);
}

TEST_CASE("reports are deterministic and independent of the thread count") {
  CampaignConfig c = small(7, 12);
  const std::string a = stable_dump(run_campaign(c));
  const std::string b = stable_dump(run_campaign(c));
  CHECK(a == b);
  c.jobs = 4;
  CHECK(stable_dump(run_campaign(c)) == a);
  CHECK(to_json(run_campaign(c)).contains("wall_clock_seconds"));
  CampaignConfig other = small(8, 12);
  CHECK(stable_dump(run_campaign(other)) != a);
}

TEST_CASE("selecting sections does not change what the others see") {
  CampaignConfig all = small(9, 4);
  CampaignConfig one = all;
  one.theorems = {"thm2.5"};
  const CampaignReport a = run_campaign(all);
  const CampaignReport b = run_campaign(one);
  REQUIRE(b.sections.size() == 1);
  CHECK(a.section("thm2.5")->worst_residual == b.sections[0].worst_residual);
}

TEST_CASE("injected faults are detected with reproduction tuples") {
  CampaignConfig c = small(10, 5);
  c.fault = FaultKind::Dual;
  const CampaignReport r = run_campaign(c);
  const SectionReport* s = r.section("thm2.1");
  REQUIRE(s != nullptr);
  CHECK(s->failed > 0);
  CHECK_FALSE(r.all_pass());
  REQUIRE_FALSE(s->failures.empty());
  const FailureRecord& f = s->failures.front();
  CHECK(f.seed == 10);
  CHECK(f.theorem == "thm2.1");
  CHECK(f.trial_seed == trial_seed(10, static_cast<std::uint64_t>(f.trial)));
  CHECK_FALSE(f.detail.empty());

  c.fault = FaultKind::Parseval;
  const CampaignReport p = run_campaign(c);
  CHECK(p.section("thm2.5")->failed > 0);
  CHECK(p.section("thm2.1")->pass());
}

TEST_CASE("configuration errors") {
  CampaignConfig c = small(1, 1);
  c.theorems = {"thm9.9"};
  try {
    run_campaign(c);
    FAIL("expected UnknownTheoremId");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownTheoremId);
  }
  CampaignConfig thin = small(1, 1);
  thin.gen.count = 2;
  thin.theorems = {"thm2.5"};
  CHECK_THROWS_AS(run_campaign(thin), Error);
  thin.theorems = {"thm2.1", "douglas"};
  CHECK(run_campaign(thin).all_pass());
}

TEST_CASE("config JSON round trip and text output") {
  CampaignConfig c = small(3, 2);
  c.theorems = {"thm2.1", "cor3.4"};
  c.fault = FaultKind::Dual;
  c.jobs = 3;
  const CampaignConfig back = campaign_config_from_json(campaign_config_to_json(c));
  CHECK(back.gen.seed == 3);
  CHECK(back.theorems == c.theorems);
  CHECK(back.fault == FaultKind::Dual);
  CHECK(back.batch_size == 50);
  CHECK_THROWS_AS(campaign_config_from_json(Json::parse(R"({"theorems": ["nope"]})")), Error);

  const std::string text = to_text(run_campaign(c));
  CHECK(text.find("thm2.1") != std::string::npos);
  CHECK(text.find("FAIL") != std::string::npos);
  CHECK(text.find("failure thm2.1 seed=3") != std::string::npos);
}
