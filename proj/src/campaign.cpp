#include "kframes/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include "kframes/douglas.hpp"
#include "kframes/jensen.hpp"
#include "kframes/scalar_function.hpp"
#include "kframes/theorems.hpp"

namespace kframes {

std::string to_string(FaultKind f) {
  switch (f) {
    case FaultKind::None: return "none";
    case FaultKind::Dual: return "dual";
    case FaultKind::Parseval: return "parseval";
  }
  return "none";
}

FaultKind parse_fault_kind(const std::string& text) {
  if (text == "none") return FaultKind::None;
  if (text == "dual") return FaultKind::Dual;
  if (text == "parseval") return FaultKind::Parseval;
  throw Error(ErrorCode::BadConfig, "unknown fault kind '" + text + "'");
}

const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids = {
      "thm2.1", "cor2.2",    "thm2.3",    "thm2.4",  "thm2.5",   "lem2.6", "thm2.7",  "cor2.8",
      "cor2.9", "jensen3.1", "jensen3.2", "thm3.3i", "thm3.3ii", "cor3.4", "douglas"};
  return ids;
}

namespace {

bool needs_parseval(const std::string& id) {
  return id == "thm2.4" || id == "thm2.5" || id == "thm2.7" || id == "cor2.8" || id == "cor2.9" ||
         id == "thm3.3i" || id == "thm3.3ii" || id == "cor3.4";
}

std::size_t registry_index(const std::string& id) {
  const auto& ids = theorem_ids();
  const auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) throw Error(ErrorCode::UnknownTheoremId, "unknown theorem id '" + id + "'");
  return static_cast<std::size_t>(it - ids.begin());
}

std::vector<std::string> selected_ids(const CampaignConfig& cfg) {
  if (cfg.theorems.empty()) return theorem_ids();
  std::vector<bool> on(theorem_ids().size(), false);
  for (const auto& id : cfg.theorems) on[registry_index(id)] = true;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < on.size(); ++i) {
    if (on[i]) out.push_back(theorem_ids()[i]);
  }
  return out;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

double deficit(const InequalityReport& r) { return -r.margin / r.scale; }
double deficit(const LoewnerReport& r) { return -r.min_eig / r.scale; }

// Accumulator for one section within one trial.
struct Acc {
  std::string theorem;
  std::uint64_t seed = 0;
  int trial = 0;
  std::uint64_t trial_seed = 0;
  long checks = 0;
  long passed = 0;
  double worst = -std::numeric_limits<double>::infinity();
  std::map<std::string, long> notes;
  std::vector<FailureRecord> failures;

  void add(bool ok, double residual, const std::string& subset, const std::string& detail) {
    ++checks;
    if (ok) ++passed;
    if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
    worst = std::max(worst, residual);
    if (!ok) failures.push_back({seed, trial, trial_seed, theorem, subset, detail});
  }

  void note(const std::string& key, bool hit) {
    long& n = notes[key];
    if (hit) ++n;
  }

  // Runs one check, turning a thrown error into a recorded failure.
  void guarded(const std::string& subset, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      add(false, std::numeric_limits<double>::infinity(), subset, e.what());
    }
  }
};

struct SplitInstance {
  OperatorK k;
  KFrame frame;
  IndexSubset j;
};

// A Parseval K-frame whose two halves live on orthogonal subspaces, so that
// S_J·S_{J^c} = 0. Needs dim ≥ 2 and count ≥ dim.
SplitInstance make_split(Index d, Index n, Rng& rng) {
  const Index d1 = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(d - 1)));
  const Index d2 = d - d1;
  const Index extra = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - d + 1)));
  const Index n1 = d1 + extra;
  const Index n2 = n - n1;
  CMat k = CMat::Zero(d, d);
  k.topLeftCorner(d1, d1) = rng.gaussian(d1, d1);
  k.bottomRightCorner(d2, d2) = rng.gaussian(d2, d2);
  CMat t = CMat::Zero(d, n);
  t.topLeftCorner(d1, n1) = k.topLeftCorner(d1, d1) * random_unitary(n1, rng).topRows(d1);
  t.bottomRightCorner(d2, n2) = k.bottomRightCorner(d2, d2) * random_unitary(n2, rng).topRows(d2);
  const CMat u = random_unitary(d, rng);

  std::vector<Index> perm(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) perm[i] = i;
  for (Index i = n - 1; i > 0; --i) {
    const auto r = static_cast<Index>(rng.below(static_cast<std::uint64_t>(i + 1)));
    std::swap(perm[i], perm[r]);
  }
  CMat mixed(d, n);
  std::vector<Index> first;
  for (Index c = 0; c < n; ++c) {
    mixed.col(c) = u * t.col(perm[c]);
    if (perm[c] < n1) first.push_back(c);
  }
  return {OperatorK(u * k * u.adjoint()), KFrame(mixed, "split"), IndexSubset::from_indices(first, n)};
}

// Moves column `col` by magnitude·(1 + ‖m‖) along a random unit direction.
void perturb_column(CMat& m, Index col, double magnitude, Rng& rng) {
  CVec dir = rng.gaussian_vector(m.rows());
  dir /= dir.norm();
  m.col(col) += magnitude * (1.0 + op_norm(m)) * dir;
}

IndexSubset random_subset(Index n, Rng& rng) {
  std::vector<Index> idx;
  for (Index i = 0; i < n; ++i) {
    if (rng.below(2) == 1) idx.push_back(i);
  }
  return IndexSubset::from_indices(idx, n);
}

struct Instance {
  std::optional<OperatorK> k;
  std::optional<KFrame> frame;
  std::optional<DualPair> canonical;
  std::optional<DualPair> parametrized;
  std::optional<KFrame> parseval;
  std::optional<SplitInstance> split;
  std::optional<KFrame> spanning;  // ordinary frame, for the K = I reduction
  std::vector<IndexSubset> subsets;
  std::string setup_error;
};

Instance make_instance(const CampaignConfig& cfg, Rng& rng) {
  const GenConfig& g = cfg.gen;
  Instance in;
  try {
    in.k = gen_operator(g, rng);
    in.frame = gen_kframe(g, *in.k, rng);
    in.canonical = canonical_kdual(*in.frame, *in.k, g.tol);
    in.parametrized = parametrized_kdual(*in.frame, *in.k, rng.gaussian(g.count, g.dim), g.tol);
    if (cfg.fault == FaultKind::Dual) {
      for (DualPair* p : {&*in.canonical, &*in.parametrized}) {
        CMat gv = p->dual_vectors;
        perturb_column(gv, static_cast<Index>(rng.below(static_cast<std::uint64_t>(g.count))),
                       cfg.fault_magnitude, rng);
        *p = make_dual_pair(p->frame, gv, p->op);
      }
    }
    if (g.count >= g.dim) {
      in.parseval = gen_parseval_kframe(*in.k, g.count, rng);
      if (cfg.fault == FaultKind::Parseval) {
        CMat t = in.parseval->vectors();
        perturb_column(t, static_cast<Index>(rng.below(static_cast<std::uint64_t>(g.count))),
                       cfg.fault_magnitude, rng);
        in.parseval = KFrame(t, "parseval");
      }
      if (g.dim >= 2) in.split = make_split(g.dim, g.count, rng);
      GenConfig id_cfg = g;
      id_cfg.k_rank = g.dim;
      in.spanning = gen_kframe(id_cfg, OperatorK(CMat::Identity(g.dim, g.dim)), rng);
    }
  } catch (const std::exception& e) {
    in.setup_error = e.what();
  }

  const Index n = g.count;
  if (g.subset_policy == SubsetPolicy::ExhaustiveSmall && n <= 10) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      in.subsets.push_back(IndexSubset::from_mask(mask, n));
    }
  } else {
    for (int s = 0; s < cfg.subsets_per_trial; ++s) in.subsets.push_back(random_subset(n, rng));
  }
  return in;
}

// Positive semidefinite test operators with spectra in [lo, hi].
std::vector<CMat> spectral_operators(int count, Index dim, double lo, double hi, Rng& rng) {
  std::vector<CMat> out;
  for (int i = 0; i < count; ++i) {
    const CMat u = random_unitary(dim, rng);
    RVec s(dim);
    for (Index k = 0; k < dim; ++k) s(k) = rng.uniform(lo, hi);
    out.push_back(u * s.asDiagonal() * u.adjoint());
  }
  return out;
}

std::vector<PositiveMapFamily> map_families(int maps, Index dim, Rng& rng) {
  std::vector<double> w(static_cast<std::size_t>(maps));
  double total = 0.0;
  for (double& x : w) total += (x = rng.uniform(0.1, 1.0));
  for (double& x : w) x /= total;
  const Index out_dim = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(dim)));
  const CMat iso = random_unitary(maps * dim, rng).leftCols(out_dim);
  std::vector<CMat> v;
  for (int i = 0; i < maps; ++i) v.push_back(iso.middleRows(i * dim, dim));
  return {PositiveMapFamily::weights(w, dim), PositiveMapFamily::congruences(v)};
}

// Affine h must give equality, not merely an inequality.
bool loewner_ok(const LoewnerReport& r, const ScalarFunction& h) {
  if (!r.pass) return false;
  if (h.id() != FunctionId::Affine) return true;
  return std::max(std::abs(r.min_eig), std::abs(r.max_eig)) <= kAffineEqualityTol * r.scale;
}

std::string loewner_detail(const LoewnerReport& r, const ScalarFunction& h) {
  return fmt("%s: min_eig=%.3e max_eig=%.3e scale=%.3e", h.name().c_str(), r.min_eig, r.max_eig, r.scale);
}

bool identity_ok(const IdentityReport& r) { return r.pass && r.path_err <= kPathTol; }

std::string identity_detail(const std::string& prefix, const IdentityReport& r) {
  return fmt("%s rel_err=%.3e path_err=%.3e", prefix.c_str(), r.rel_err, r.path_err);
}

const KFrame& need(const std::optional<KFrame>& f, const std::string& what) {
  if (!f) throw Error(ErrorCode::BadConfig, what + " unavailable for this configuration");
  return *f;
}

using SectionFn = std::function<void(const CampaignConfig&, const Instance&, Rng&, Acc&)>;

void run_section(const std::string& id, const CampaignConfig& cfg, const Instance& in, Rng& rng,
                 Acc& acc) {
  const double tol = cfg.gen.tol;
  const Index d = cfg.gen.dim;
  const Index n = cfg.gen.count;
  const int vps = cfg.vectors_per_subset;
  const OperatorK& k = *in.k;

  if (id == "thm2.1") {
    for (const auto& j : in.subsets) {
      for (int v = 0; v < vps; ++v) {
        const CVec f = rng.gaussian_vector(d);
        acc.guarded(j.to_string(), [&] {
          for (const DualPair* p : {&*in.canonical, &*in.parametrized}) {
            const bool canon = p == &*in.canonical;
            const IdentityReport r = check_thm_2_1(*p, j, f, tol);
            acc.add(identity_ok(r), r.rel_err, j.to_string(),
                    identity_detail(fmt("%s dual, vector %d:", canon ? "canonical" : "parametrized", v), r));
          }
        });
      }
    }
  } else if (id == "cor2.2") {
    for (const auto& j : in.subsets) {
      for (int v = 0; v < vps; ++v) {
        const CVec f = rng.gaussian_vector(d);
        acc.guarded(j.to_string(), [&] {
          const IdentityReport r = check_cor_2_2(*in.frame, k, j, f, tol);
          acc.add(identity_ok(r), r.rel_err, j.to_string(), identity_detail(fmt("vector %d:", v), r));
        });
      }
    }
  } else if (id == "thm2.3") {
    for (const auto& j : in.subsets) {
      for (int v = 0; v < vps; ++v) {
        const CVec f = rng.gaussian_vector(d);
        CVec alpha(n);
        for (Index i = 0; i < n; ++i) {
          alpha(i) = std::polar(2.0 * std::sqrt(rng.uniform()), 2.0 * std::numbers::pi * rng.uniform());
        }
        CVec indicator = CVec::Zero(n);
        for (Index i : j.indices()) indicator(i) = 1.0;
        acc.guarded(j.to_string(), [&] {
          for (const DualPair* p : {&*in.canonical, &*in.parametrized}) {
            const char* which = p == &*in.canonical ? "canonical" : "parametrized";
            const IdentityReport r = check_thm_2_3(*p, alpha, f, tol);
            acc.add(identity_ok(r), r.rel_err, j.to_string(),
                    identity_detail(fmt("%s dual, random weights, vector %d:", which, v), r));
            const IdentityReport s = check_thm_2_3(*p, indicator, f, tol);
            acc.add(identity_ok(s), s.rel_err, j.to_string(),
                    identity_detail(fmt("%s dual, indicator weights, vector %d:", which, v), s));
          }
        });
      }
    }
  } else if (id == "thm2.4") {
    const KFrame& p = need(in.parseval, "Parseval K-frame");
    for (const auto& j : in.subsets) {
      for (int v = 0; v < vps; ++v) {
        const CVec f = rng.gaussian_vector(d);
        std::vector<Index> e_idx;
        const IndexSubset jc = j.complement(n);
        for (Index i : jc.indices()) {
          if (rng.below(2) == 1) e_idx.push_back(i);
        }
        const IndexSubset e = IndexSubset::from_indices(e_idx, n);
        const std::string label = "J=" + j.to_string() + " E=" + e.to_string();
        acc.guarded(label, [&] {
          const IdentityReport r = check_thm_2_4(p, k, j, e, f, tol);
          acc.add(identity_ok(r), r.rel_err, label, identity_detail(fmt("vector %d:", v), r));
        });
      }
    }
  } else if (id == "thm2.5") {
    const KFrame& p = need(in.parseval, "Parseval K-frame");
    for (const auto& j : in.subsets) {
      for (int v = 0; v < vps; ++v) {
        const CVec f = rng.gaussian_vector(d);
        acc.guarded(j.to_string(), [&] {
          const Thm25Report r = check_thm_2_5(p, k, j, f, tol);
          acc.add(identity_ok(r.equality) && r.bound.pass, std::max(r.equality.rel_err, deficit(r.bound)),
                  j.to_string(),
                  identity_detail(fmt("vector %d:", v), r.equality) +
                      fmt(" bound margin=%.3e scale=%.3e", r.bound.margin, r.bound.scale));
        });
      }
    }
  } else if (id == "lem2.6") {
    for (int v = 0; v < 2 * vps; ++v) {
      const CVec f = rng.gaussian_vector(d);
      acc.guarded("-", [&] {
        const Lemma26Report r = check_lemma_2_6(*in.frame, k, f, tol);
        acc.add(r.bessel.pass && r.lower.pass, std::max(deficit(r.bessel), deficit(r.lower)), "-",
                fmt("vector %d: upper margin=%.3e lower margin=%.3e", v, r.bessel.margin, r.lower.margin));
      });
    }
  } else if (id == "thm2.7") {
    const KFrame& p = need(in.parseval, "Parseval K-frame");
    for (const auto& j : in.subsets) {
      acc.guarded(j.to_string(), [&] {
        const Thm27Report r = check_thm_2_7(p, k, j, tol);
        const double residual = std::max({deficit(r.lower), deficit(r.ordered), deficit(r.upper),
                                          r.symmetric_plus.rel_err, r.symmetric_minus.rel_err});
        acc.add(r.pass, residual, j.to_string(),
                fmt("v-=%.12g v+=%.12g bound=%.6g v(J^c)=(%.12g, %.12g) trivial_ok=%d", r.v.v_minus,
                    r.v.v_plus, r.proof_bound, r.v_complement.v_minus, r.v_complement.v_plus,
                    int(r.trivial_subsets_ok)));
        acc.note("stated_bound_violations", !r.stated_bound_holds);
      });
    }
  } else if (id == "cor2.8") {
    const KFrame& p = need(in.parseval, "Parseval K-frame");
    auto batch = [&] {
      std::vector<CVec> b;
      for (int i = 0; i < cfg.batch_size; ++i) b.push_back(rng.gaussian_vector(d));
      return b;
    };
    auto one = [&](const KFrame& frame, const OperatorK& op, const IndexSubset& j, const char* tag) {
      const std::vector<CVec> fs = batch();
      acc.guarded(j.to_string(), [&] {
        const Cor28Report r = check_cor_2_8(frame, op, j, fs, tol);
        acc.add(r.agree, r.agree ? 0.0 : 1.0, j.to_string(),
                fmt("%s: (i)=%d (ii)=%d (iii)=%d worst_ii=%.3e worst_iii=%.3e", tag, int(r.cond_i),
                    int(r.cond_ii), int(r.cond_iii), r.worst_ii, r.worst_iii));
        acc.note("verdicts_true", r.cond_i);
      });
    };
    for (const auto& j : in.subsets) one(p, k, j, "generic");
    if (in.split) one(in.split->frame, in.split->k, in.split->j, "split");
  } else if (id == "cor2.9") {
    const KFrame& p = need(in.parseval, "Parseval K-frame");
    auto one = [&](const KFrame& frame, const OperatorK& op, const IndexSubset& j, const char* tag, int v) {
      const CVec f = rng.gaussian_vector(d);
      acc.guarded(j.to_string(), [&] {
        const Cor29Report r = check_cor_2_9(frame, op, j, f, tol);
        acc.add(r.agree, r.agree ? 0.0 : 1.0, j.to_string(),
                fmt("%s vector %d: holds=%d%d%d%d |defect|=%.3e scale=%.3e", tag, v, int(r.holds[0]),
                    int(r.holds[1]), int(r.holds[2]), int(r.holds[3]), std::abs(r.defect[0]), r.scale));
        acc.note("verdicts_true", r.holds[0]);
      });
    };
    for (const auto& j : in.subsets) {
      for (int v = 0; v < vps; ++v) one(p, k, j, "generic", v);
    }
    if (in.split) {
      for (int v = 0; v < vps; ++v) one(in.split->frame, in.split->k, in.split->j, "split", v);
    }
  } else if (id == "jensen3.1") {
    const auto as = spectral_operators(3, d, 0.0, 3.0, rng);
    const auto fams = map_families(3, d, rng);
    for (const auto& h : operator_convex_catalog()) {
      for (const auto& phis : fams) {
        acc.guarded("-", [&] {
          const LoewnerReport r = check_jensen_3_1(as, phis, h, tol);
          acc.add(loewner_ok(r, h), deficit(r), "-", loewner_detail(r, h));
        });
      }
    }
  } else if (id == "jensen3.2") {
    const double m = rng.uniform(0.0, 1.0);
    const double big_m = m + rng.uniform(0.5, 3.0);
    const auto as = spectral_operators(3, d, m, big_m, rng);
    const auto fams = map_families(3, d, rng);
    for (const auto& h : convex_catalog(m, big_m)) {
      for (const auto& phis : fams) {
        acc.guarded(fmt("[%.6g, %.6g]", m, big_m), [&] {
          const LoewnerReport r = check_jensen_3_2(as, phis, h, m, big_m, tol);
          acc.add(loewner_ok(r, h), deficit(r), fmt("[%.6g, %.6g]", m, big_m), loewner_detail(r, h));
        });
      }
    }
  } else if (id == "thm3.3i") {
    const KFrame& p = need(in.parseval, "Parseval K-frame");
    const auto catalog = operator_convex_catalog();
    for (const auto& j : in.subsets) {
      for (const auto& h : catalog) {
        acc.guarded(j.to_string(), [&] {
          const LoewnerReport r = check_thm_3_3_i(p, k, j, h, tol);
          acc.add(loewner_ok(r, h), deficit(r), j.to_string(), loewner_detail(r, h));
        });
      }
    }
  } else if (id == "thm3.3ii") {
    const KFrame& p = need(in.parseval, "Parseval K-frame");
    const double kn = op_norm(k.matrix());
    const auto catalog = convex_catalog(0.0, kn * kn);
    for (const auto& j : in.subsets) {
      for (const auto& h : catalog) {
        acc.guarded(j.to_string(), [&] {
          const LoewnerReport r = check_thm_3_3_ii(p, k, j, h, tol);
          acc.add(loewner_ok(r, h), deficit(r), j.to_string(), loewner_detail(r, h));
          acc.note("without_h0_failures", !thm_3_3_ii_without_h0(p, k, j, h, tol).pass);
        });
      }
    }
  } else if (id == "cor3.4") {
    const KFrame& p = need(in.parseval, "Parseval K-frame");
    for (const auto& j : in.subsets) {
      for (int v = 0; v < vps; ++v) {
        const CVec f = rng.gaussian_vector(d);
        acc.guarded(j.to_string(), [&] {
          const Cor34Report r = check_cor_3_4(p, k, j, f, tol);
          acc.add(r.lower.pass && r.upper.pass, std::max(deficit(r.lower), deficit(r.upper)), j.to_string(),
                  fmt("vector %d: lower margin=%.3e upper margin=%.3e", v, r.lower.margin, r.upper.margin));
        });
      }
    }
  } else if (id == "douglas") {
    auto factor = [&](const CMat& l1, const CMat& l2, const char* tag) {
      acc.guarded(tag, [&] {
        const DouglasSolution s = douglas_solve(l1, l2, tol);
        const InfimumReport inf = douglas_infimum_check(l1, l2, s.x, tol, kInfimumDelta);
        const double scale = 1.0 + op_norm(l1);
        const double xn = op_norm(s.x);
        const bool factor_ok = s.factor_residual <= kFactorTol * scale;
        const bool kernel_ok = s.kernel_match <= kKernelTol;
        const bool range_ok = s.range_residual <= kFactorTol * xn;
        const double residual =
            std::max({s.factor_residual / scale, s.kernel_match, xn > 0.0 ? s.range_residual / xn : 0.0});
        acc.add(factor_ok && kernel_ok && range_ok && inf.pass, residual, tag,
                fmt("factor=%.3e kernel=%.3e range=%.3e |X|^2=%.6g at=%.3e below=%.3e", s.factor_residual,
                    s.kernel_match, s.range_residual, s.norm_sq, inf.at_norm.min_eig,
                    inf.below_norm.min_eig));
      });
    };
    factor(k.matrix(), in.frame->vectors(), "L1=K,L2=T_F");
    // Constructed solvable pair with a rank-deficient L1 = L2·R.
    const Index m = d + 2 + static_cast<Index>(rng.below(3));
    const Index q = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(d)));
    const Index r = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(q)));
    const CMat l2 = rng.gaussian(d, m);
    const CMat l1 = l2 * (rng.gaussian(m, r) * rng.gaussian(r, q));
    factor(l1, l2, "L1=L2*R");
    if (in.spanning) {
      acc.guarded("K=I", [&] {
        const IdentityReductionReport red = check_identity_reduction(*in.spanning, tol);
        acc.add(red.pass, std::max(red.lower_rel_err, red.xf_rel_err), "K=I",
                fmt("lower_rel_err=%.3e xf_rel_err=%.3e", red.lower_rel_err, red.xf_rel_err));
        acc.note("printed_form_matches", red.printed_form_matches);
      });
    }
  }
}

std::vector<Acc> run_trial(const CampaignConfig& cfg, const std::vector<std::string>& ids, int trial) {
  const std::uint64_t ts = trial_seed(cfg.gen.seed, static_cast<std::uint64_t>(trial));
  Rng rng(ts);
  const Instance in = make_instance(cfg, rng);
  std::vector<Acc> out;
  for (const auto& id : ids) {
    Acc acc;
    acc.theorem = id;
    acc.seed = cfg.gen.seed;
    acc.trial = trial;
    acc.trial_seed = ts;
    if (!in.setup_error.empty()) {
      acc.add(false, std::numeric_limits<double>::infinity(), "-", "instance setup: " + in.setup_error);
    } else {
      // Each section draws from its own stream so that selecting a subset of
      // ids does not change what the others see.
      Rng section_rng(mix64(ts ^ mix64(0x5ec7000 + registry_index(id))));
      try {
        run_section(id, cfg, in, section_rng, acc);
      } catch (const std::exception& e) {
        acc.add(false, std::numeric_limits<double>::infinity(), "-", e.what());
      }
    }
    out.push_back(std::move(acc));
  }
  return out;
}

}  // namespace

void CampaignConfig::validate() const {
  gen.validate();
  if (gen.count < gen.k_rank) throw Error(ErrorCode::BadConfig, "count must be >= k_rank");
  if (subsets_per_trial < 1) throw Error(ErrorCode::BadConfig, "subsets_per_trial must be >= 1");
  if (vectors_per_subset < 1) throw Error(ErrorCode::BadConfig, "vectors_per_subset must be >= 1");
  if (batch_size < 1) throw Error(ErrorCode::BadConfig, "batch_size must be >= 1");
  if (jobs < 1) throw Error(ErrorCode::BadConfig, "jobs must be >= 1");
  if (!(fault_magnitude > 0.0) || !std::isfinite(fault_magnitude)) {
    throw Error(ErrorCode::BadConfig, "fault_magnitude must be positive");
  }
}

bool CampaignReport::all_pass() const {
  if (sections.empty()) return false;
  return std::all_of(sections.begin(), sections.end(), [](const SectionReport& s) { return s.pass(); });
}

const SectionReport* CampaignReport::section(const std::string& id) const {
  for (const auto& s : sections) {
    if (s.theorem == id) return &s;
  }
  return nullptr;
}

CampaignReport run_campaign(const CampaignConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::string> ids = selected_ids(cfg);
  cfg.validate();
  for (const auto& id : ids) {
    if (needs_parseval(id) && cfg.gen.count < cfg.gen.dim) {
      throw Error(ErrorCode::BadConfig, id + " needs a Parseval K-frame, which requires count >= dim");
    }
  }

  const int trials = cfg.gen.trials;
  std::vector<std::vector<Acc>> results(static_cast<std::size_t>(trials));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int t = next++; t < trials; t = next++) results[t] = run_trial(cfg, ids, t);
  };
  const int jobs = std::min(cfg.jobs, trials);
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  CampaignReport report;
  report.config = cfg;
  for (std::size_t s = 0; s < ids.size(); ++s) {
    SectionReport sec;
    sec.theorem = ids[s];
    bool have_worst = false;
    for (int t = 0; t < trials; ++t) {
      Acc& a = results[t][s];
      sec.checks += a.checks;
      sec.passed += a.passed;
      if (a.checks > 0 && (!have_worst || a.worst > sec.worst_residual)) {
        have_worst = true;
        sec.worst_residual = a.worst;
        sec.worst_trial = t;
        sec.worst_trial_seed = a.trial_seed;
      }
      for (const auto& [key, n] : a.notes) sec.notes[key] += n;
      for (auto& f : a.failures) sec.failures.push_back(std::move(f));
    }
    sec.failed = sec.checks - sec.passed;
    report.sections.push_back(std::move(sec));
  }
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

Json campaign_config_to_json(const CampaignConfig& cfg) {
  Json j = gen_config_to_json(cfg.gen);
  j["theorems"] = cfg.theorems.empty() ? theorem_ids() : cfg.theorems;
  j["inject"] = to_string(cfg.fault);
  j["fault_magnitude"] = cfg.fault_magnitude;
  j["subsets_per_trial"] = cfg.subsets_per_trial;
  j["vectors_per_subset"] = cfg.vectors_per_subset;
  j["batch_size"] = cfg.batch_size;
  return j;
}

CampaignConfig campaign_config_from_json(const Json& j, CampaignConfig base) {
  base.gen = gen_config_from_json(j, base.gen);
  try {
    if (j.contains("theorems")) base.theorems = j.at("theorems").get<std::vector<std::string>>();
    if (j.contains("inject")) base.fault = parse_fault_kind(j.at("inject").get<std::string>());
    if (j.contains("fault_magnitude")) base.fault_magnitude = j.at("fault_magnitude").get<double>();
    if (j.contains("subsets_per_trial")) base.subsets_per_trial = j.at("subsets_per_trial").get<int>();
    if (j.contains("vectors_per_subset")) base.vectors_per_subset = j.at("vectors_per_subset").get<int>();
    if (j.contains("batch_size")) base.batch_size = j.at("batch_size").get<int>();
    if (j.contains("jobs")) base.jobs = j.at("jobs").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("campaign config: ") + e.what());
  }
  for (const auto& id : base.theorems) registry_index(id);
  return base;
}

Json to_json(const CampaignReport& r, bool include_wall_clock) {
  Json sections = Json::array();
  for (const auto& s : r.sections) {
    Json failures = Json::array();
    for (const auto& f : s.failures) {
      failures.push_back({{"seed", f.seed},
                          {"trial", f.trial},
                          {"trial_seed", f.trial_seed},
                          {"theorem", f.theorem},
                          {"subset", f.subset},
                          {"detail", f.detail}});
    }
    Json sec = {{"theorem", s.theorem},
                {"pass", s.pass()},
                {"checks", s.checks},
                {"passed", s.passed},
                {"failed", s.failed},
                {"worst_trial", s.worst_trial},
                {"worst_trial_seed", s.worst_trial_seed},
                {"notes", s.notes},
                {"failures", std::move(failures)}};
    // JSON has no infinity; a checker error shows up as a null residual.
    sec["worst_residual"] = std::isfinite(s.worst_residual) ? Json(s.worst_residual) : Json(nullptr);
    sections.push_back(std::move(sec));
  }
  Json j = {{"config", campaign_config_to_json(r.config)},
            {"all_pass", r.all_pass()},
            {"sections", std::move(sections)}};
  if (include_wall_clock) j["wall_clock_seconds"] = r.wall_clock_seconds;
  return j;
}

std::string to_text(const CampaignReport& r) {
  const GenConfig& g = r.config.gen;
  std::ostringstream out;
  out << fmt("campaign seed=%llu dim=%lld count=%lld k_rank=%lld trials=%d tol=%.3g policy=%s inject=%s\n",
             static_cast<unsigned long long>(g.seed), static_cast<long long>(g.dim),
             static_cast<long long>(g.count), static_cast<long long>(g.k_rank), g.trials, g.tol,
             to_string(g.subset_policy).c_str(), to_string(r.config.fault).c_str());
  out << fmt("%-10s %10s %10s %8s %14s %7s %20s  %s\n", "theorem", "checks", "passed", "failed", "worst", "trial",
             "trial_seed", "status");
  for (const auto& s : r.sections) {
    out << fmt("%-10s %10ld %10ld %8ld %14.6g %7d %20llu  %s\n", s.theorem.c_str(), s.checks, s.passed, s.failed,
               s.worst_residual, s.worst_trial, static_cast<unsigned long long>(s.worst_trial_seed),
               s.pass() ? "PASS" : "FAIL");
  }
  for (const auto& s : r.sections) {
    for (const auto& [key, n] : s.notes) out << fmt("note %s %s=%ld\n", s.theorem.c_str(), key.c_str(), n);
  }
  for (const auto& s : r.sections) {
    const std::size_t shown = std::min<std::size_t>(s.failures.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) {
      const auto& f = s.failures[i];
      out << fmt("failure %s seed=%llu trial=%d trial_seed=%llu subset=%s: ", f.theorem.c_str(),
                 static_cast<unsigned long long>(f.seed), f.trial, static_cast<unsigned long long>(f.trial_seed),
                 f.subset.c_str())
          << f.detail << '\n';
    }
    if (s.failures.size() > shown) {
      out << fmt("failure %s ... %zu more\n", s.theorem.c_str(), s.failures.size() - shown);
    }
  }
  out << fmt("wall_clock %.3f s\n", r.wall_clock_seconds);
  out << (r.all_pass() ? "ALL PASS\n" : "FAILURES\n");
  return out.str();
}

}  // namespace kframes
