// kframes: generate instances, run single checks, compute v±, run campaigns.

#include <cstdlib>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "kframes/campaign.hpp"
#include "kframes/douglas.hpp"
#include "kframes/jensen.hpp"
#include "kframes/scalar_function.hpp"
#include "kframes/serialize.hpp"
#include "kframes/theorems.hpp"

using namespace kframes;

namespace {

double default_tol() {
  if (const char* env = std::getenv("KFRAMES_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && v > 0.0 && std::isfinite(v)) return v;
    throw Error(ErrorCode::BadConfig, std::string("KFRAMES_TOL is not a positive number: ") + env);
  }
  return kDefaultTol;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_text_file(out, text);
  }
}

OperatorK load_operator(const std::string& path) { return OperatorK(matrix_from_json(read_json_file(path))); }
KFrame load_frame(const std::string& path) { return frame_from_json(read_json_file(path)); }

// One printed verdict line per check.
struct Tally {
  int checks = 0;
  int failed = 0;

  void line(bool ok, const std::string& what) {
    ++checks;
    if (!ok) ++failed;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << what << '\n';
  }
};

std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::string identity_text(const IdentityReport& r) {
  return "rel_err=" + num(r.rel_err) + " path_err=" + num(r.path_err);
}

std::string loewner_text(const LoewnerReport& r) {
  return "min_eig=" + num(r.min_eig) + " scale=" + num(r.scale);
}

struct CheckArgs {
  std::string theorem;
  std::string frame_file;
  std::string operator_file;
  std::string dual_file;
  std::string subset = "all";
  std::string extra_subset;
  std::optional<double> tol;
  std::uint64_t seed = 0;
  int vectors = 4;
  std::string function;
};

std::vector<ScalarFunction> functions_for(const CheckArgs& a, std::vector<ScalarFunction> fallback) {
  if (a.function.empty()) return fallback;
  return {ScalarFunction::parse(a.function)};
}

int run_check(const CheckArgs& a) {
  const double tol = a.tol.value_or(default_tol());
  const KFrame frame = load_frame(a.frame_file);
  const OperatorK k = load_operator(a.operator_file);
  require_same_dim(frame, k);
  const Index d = frame.dim();
  const Index n = frame.count();
  const IndexSubset j = IndexSubset::parse(a.subset, n);
  Rng rng(a.seed);
  std::vector<CVec> fs;
  for (int i = 0; i < a.vectors; ++i) fs.push_back(rng.gaussian_vector(d));
  const std::string id = a.theorem;
  Tally tally;

  auto dual = [&] {
    if (a.dual_file.empty()) return canonical_kdual(frame, k, tol);
    return make_dual_pair(frame, load_frame(a.dual_file).vectors(), k);
  };

  if (id == "thm2.1") {
    const DualPair p = dual();
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const IdentityReport r = check_thm_2_1(p, j, fs[i], tol);
      tally.line(r.pass && r.path_err <= kPathTol, id + " vector " + std::to_string(i) + ": " + identity_text(r));
    }
  } else if (id == "cor2.2") {
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const IdentityReport r = check_cor_2_2(frame, k, j, fs[i], tol);
      tally.line(r.pass && r.path_err <= kPathTol, id + " vector " + std::to_string(i) + ": " + identity_text(r));
    }
  } else if (id == "thm2.3") {
    const DualPair p = dual();
    for (std::size_t i = 0; i < fs.size(); ++i) {
      CVec alpha(n);
      for (Index c = 0; c < n; ++c) {
        alpha(c) = std::polar(2.0 * std::sqrt(rng.uniform()), 2.0 * std::numbers::pi * rng.uniform());
      }
      const IdentityReport r = check_thm_2_3(p, alpha, fs[i], tol);
      tally.line(r.pass && r.path_err <= kPathTol, id + " vector " + std::to_string(i) + ": " + identity_text(r));
    }
  } else if (id == "thm2.4") {
    IndexSubset e;
    if (!a.extra_subset.empty()) {
      e = IndexSubset::parse(a.extra_subset, n);
    } else {
      std::vector<Index> idx;
      const IndexSubset jc = j.complement(n);
      for (Index i : jc.indices()) {
        if (rng.below(2) == 1) idx.push_back(i);
      }
      e = IndexSubset::from_indices(idx, n);
    }
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const IdentityReport r = check_thm_2_4(frame, k, j, e, fs[i], tol);
      tally.line(r.pass && r.path_err <= kPathTol,
                 id + " E=" + e.to_string() + " vector " + std::to_string(i) + ": " + identity_text(r));
    }
  } else if (id == "thm2.5") {
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const Thm25Report r = check_thm_2_5(frame, k, j, fs[i], tol);
      tally.line(r.equality.pass && r.equality.path_err <= kPathTol && r.bound.pass,
                 id + " vector " + std::to_string(i) + ": " + identity_text(r.equality) +
                     " bound_margin=" + num(r.bound.margin));
    }
  } else if (id == "lem2.6") {
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const Lemma26Report r = check_lemma_2_6(frame, k, fs[i], tol);
      tally.line(r.bessel.pass && r.lower.pass, id + " vector " + std::to_string(i) + ": upper_margin=" +
                                                     num(r.bessel.margin) + " lower_margin=" + num(r.lower.margin));
    }
  } else if (id == "thm2.7") {
    const Thm27Report r = check_thm_2_7(frame, k, j, tol);
    tally.line(r.pass, id + ": v-=" + num(r.v.v_minus) + " v+=" + num(r.v.v_plus) +
                           " bound=" + num(r.proof_bound) + " stated_bound_holds=" +
                           (r.stated_bound_holds ? "yes" : "no"));
  } else if (id == "cor2.8") {
    std::vector<CVec> batch;
    for (int i = 0; i < 200; ++i) batch.push_back(rng.gaussian_vector(d));
    const Cor28Report r = check_cor_2_8(frame, k, j, batch, tol);
    tally.line(r.agree, id + ": (i)=" + std::to_string(r.cond_i) + " (ii)=" + std::to_string(r.cond_ii) +
                            " (iii)=" + std::to_string(r.cond_iii));
  } else if (id == "cor2.9") {
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const Cor29Report r = check_cor_2_9(frame, k, j, fs[i], tol);
      std::string holds;
      for (bool h : r.holds) holds += h ? '1' : '0';
      tally.line(r.agree, id + " vector " + std::to_string(i) + ": holds=" + holds);
    }
  } else if (id == "thm3.3i") {
    for (const auto& h : functions_for(a, operator_convex_catalog())) {
      const LoewnerReport r = check_thm_3_3_i(frame, k, j, h, tol);
      tally.line(r.pass, id + " " + h.name() + ": " + loewner_text(r));
    }
  } else if (id == "thm3.3ii") {
    const double kn = op_norm(k.matrix());
    for (const auto& h : functions_for(a, convex_catalog(0.0, kn * kn))) {
      const LoewnerReport r = check_thm_3_3_ii(frame, k, j, h, tol);
      tally.line(r.pass, id + " " + h.name() + ": " + loewner_text(r));
    }
  } else if (id == "cor3.4") {
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const Cor34Report r = check_cor_3_4(frame, k, j, fs[i], tol);
      tally.line(r.lower.pass && r.upper.pass, id + " vector " + std::to_string(i) + ": lower_margin=" +
                                                   num(r.lower.margin) + " upper_margin=" + num(r.upper.margin));
    }
  } else if (id == "jensen3.1" || id == "jensen3.2") {
    // Operators S_J and S_{J^c} of the given frame under equal weights.
    const std::vector<CMat> as = {partial_frame_operator(frame, j),
                                  partial_frame_operator(frame, j.complement(n))};
    const auto phis = PositiveMapFamily::weights({0.5, 0.5}, d);
    if (id == "jensen3.1") {
      for (const auto& h : functions_for(a, operator_convex_catalog())) {
        const LoewnerReport r = check_jensen_3_1(as, phis, h, tol);
        tally.line(r.pass, id + " " + h.name() + ": " + loewner_text(r));
      }
    } else {
      double big_m = 0.0;
      for (const auto& x : as) big_m = std::max(big_m, herm_eig(x, tol).values.maxCoeff());
      if (big_m == 0.0) big_m = 1.0;
      for (const auto& h : functions_for(a, convex_catalog(0.0, big_m))) {
        const LoewnerReport r = check_jensen_3_2(as, phis, h, 0.0, big_m, tol);
        tally.line(r.pass, id + " " + h.name() + ": " + loewner_text(r));
      }
    }
  } else if (id == "douglas") {
    const DouglasSolution s = douglas_solve(k.matrix(), frame.vectors(), tol);
    const InfimumReport inf = douglas_infimum_check(k.matrix(), frame.vectors(), s.x, tol, kInfimumDelta);
    const double xn = op_norm(s.x);
    tally.line(s.factor_residual <= kFactorTol * (1.0 + op_norm(k.matrix())),
               id + " factorization residual=" + num(s.factor_residual));
    tally.line(inf.pass, id + " norm infimum |X|^2=" + num(inf.norm_sq));
    tally.line(s.kernel_match <= kKernelTol, id + " kernel gap=" + num(s.kernel_match));
    tally.line(s.range_residual <= kFactorTol * xn, id + " range residual=" + num(s.range_residual));
  } else {
    throw Error(ErrorCode::UnknownTheoremId, "unknown theorem id '" + id + "'");
  }
  std::cout << tally.checks - tally.failed << "/" << tally.checks << " passed\n";
  return tally.failed == 0 ? 0 : 1;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-dimensional K-frame toolkit"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an operator, K-frame or Parseval K-frame");
  std::string gen_kind;
  GenConfig gcfg;
  std::string gen_out;
  std::string gen_operator_file;
  gen->add_option("kind", gen_kind, "operator | frame | parseval")
      ->required()
      ->check(CLI::IsMember({"operator", "frame", "parseval"}));
  gen->add_option("--dim", gcfg.dim, "Dimension d");
  gen->add_option("--count", gcfg.count, "Number of frame vectors n");
  gen->add_option("--rank", gcfg.k_rank, "Rank of K");
  gen->add_option("--seed", gcfg.seed, "64-bit seed");
  gen->add_option("--sv-min", gcfg.sv_min, "Smallest nonzero singular value of K");
  gen->add_option("--sv-max", gcfg.sv_max, "Largest singular value of K");
  gen->add_option("--operator", gen_operator_file, "Use K from this file instead of generating it");
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  // check
  auto* check = app.add_subcommand("check", "Run one checker on a frame/operator pair");
  CheckArgs ca;
  double check_tol = 0.0;
  check->add_option("theorem", ca.theorem, "Theorem id")->required();
  check->add_option("--frame", ca.frame_file, "Frame JSON")->required();
  check->add_option("--operator", ca.operator_file, "Operator JSON")->required();
  check->add_option("--dual", ca.dual_file, "Dual frame JSON (default: canonical K-dual)");
  check->add_option("--subset", ca.subset, "Subset J: all, empty or 0,2,5");
  check->add_option("--extra-subset", ca.extra_subset, "Subset E inside J^c for thm2.4");
  auto* tol_opt = check->add_option("--tol", check_tol, "Tolerance");
  check->add_option("--seed", ca.seed, "Seed for the random test vectors");
  check->add_option("--vectors", ca.vectors, "Number of random test vectors");
  check->add_option("--function", ca.function, "square | power:R | xlogx | negative_sqrt | affine:A,B");

  // vconst
  auto* vconst = app.add_subcommand("vconst", "Compute v+ and v- for a Parseval K-frame");
  std::string v_frame, v_operator, v_subset = "all";
  double v_tol = 0.0;
  vconst->add_option("--frame", v_frame, "Frame JSON")->required();
  vconst->add_option("--operator", v_operator, "Operator JSON")->required();
  vconst->add_option("--subset", v_subset, "Subset J");
  auto* vtol_opt = vconst->add_option("--tol", v_tol, "Tolerance");

  // campaign
  auto* camp = app.add_subcommand("campaign", "Run a seeded verification campaign");
  std::string c_config, c_format = "text", c_out, c_theorems, c_inject, c_policy;
  CampaignConfig ccfg;
  camp->add_option("--config", c_config, "Campaign config JSON; flags override it");
  camp->add_option("--format", c_format, "json | text")->check(CLI::IsMember({"json", "text"}));
  camp->add_option("--out", c_out, "Report file (default stdout)");
  auto* o_seed = camp->add_option("--seed", ccfg.gen.seed, "Seed");
  auto* o_dim = camp->add_option("--dim", ccfg.gen.dim, "Dimension");
  auto* o_count = camp->add_option("--count", ccfg.gen.count, "Frame size");
  auto* o_rank = camp->add_option("--rank", ccfg.gen.k_rank, "Rank of K");
  auto* o_trials = camp->add_option("--trials", ccfg.gen.trials, "Trials");
  auto* o_tol = camp->add_option("--tol", ccfg.gen.tol, "Tolerance");
  camp->add_option("--policy", c_policy, "random | exhaustive-small");
  camp->add_option("--theorems", c_theorems, "Comma-separated theorem ids (default all)");
  camp->add_option("--inject", c_inject, "none | dual | parseval");
  auto* o_jobs = camp->add_option("--jobs", ccfg.jobs, "Worker threads");
  auto* o_subsets = camp->add_option("--subsets", ccfg.subsets_per_trial, "Random subsets per trial");
  auto* o_vectors = camp->add_option("--vectors", ccfg.vectors_per_subset, "Vectors per subset");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      if (gen_kind == "operator") {
        emit(matrix_to_json(gen_operator(gcfg).matrix()).dump() + "\n", gen_out);
        return 0;
      }
      const OperatorK k = gen_operator_file.empty() ? gen_operator(gcfg) : load_operator(gen_operator_file);
      if (k.dim() != gcfg.dim) gcfg.dim = k.dim();
      if (gcfg.k_rank > gcfg.dim) gcfg.k_rank = gcfg.dim;
      const KFrame f = gen_kind == "frame" ? gen_kframe(gcfg, k) : gen_parseval_kframe(k, gcfg.count, gcfg.seed);
      emit(frame_to_json(f).dump() + "\n", gen_out);
      return 0;
    }
    if (*check) {
      if (tol_opt->count() > 0) ca.tol = check_tol;
      return run_check(ca);
    }
    if (*vconst) {
      const double tol = vtol_opt->count() > 0 ? v_tol : default_tol();
      const KFrame f = load_frame(v_frame);
      const VConstants v = v_constants(f, load_operator(v_operator), IndexSubset::parse(v_subset, f.count()), tol);
      const Json j = {{"v_plus", v.v_plus},
                      {"v_minus", v.v_minus},
                      {"subset", v.subset.to_string()},
                      {"restricted_dim", v.restricted_dim}};
      std::cout << j.dump(2) << '\n';
      return 0;
    }
    if (*camp) {
      CampaignConfig cfg;
      cfg.gen.tol = default_tol();
      if (!c_config.empty()) cfg = campaign_config_from_json(read_json_file(c_config), cfg);
      if (o_seed->count()) cfg.gen.seed = ccfg.gen.seed;
      if (o_dim->count()) cfg.gen.dim = ccfg.gen.dim;
      if (o_count->count()) cfg.gen.count = ccfg.gen.count;
      if (o_rank->count()) cfg.gen.k_rank = ccfg.gen.k_rank;
      if (o_trials->count()) cfg.gen.trials = ccfg.gen.trials;
      if (o_tol->count()) cfg.gen.tol = ccfg.gen.tol;
      if (o_jobs->count()) cfg.jobs = ccfg.jobs;
      if (o_subsets->count()) cfg.subsets_per_trial = ccfg.subsets_per_trial;
      if (o_vectors->count()) cfg.vectors_per_subset = ccfg.vectors_per_subset;
      if (!c_policy.empty()) cfg.gen.subset_policy = parse_subset_policy(c_policy);
      if (!c_theorems.empty()) cfg.theorems = split_list(c_theorems);
      if (!c_inject.empty()) cfg.fault = parse_fault_kind(c_inject);
      const CampaignReport r = run_campaign(cfg);
      emit(c_format == "json" ? to_json(r).dump(2) + "\n" : to_text(r), c_out);
      return r.all_pass() ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
