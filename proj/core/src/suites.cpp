#include "ratesim/suites.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ratesim {

NegSchemeConfig two_bit_config(const RateTuple& rates, int n, double eps,
                               std::uint64_t seed, const Caps& caps) {
  NegSchemeConfig cfg;
  cfg.n = n;
  cfg.eps = eps;
  cfg.rates = rates;
  cfg.seed = seed;
  cfg.caps = caps;
  // (U, V2, V3, X): X = 2*U + W with W a fresh uniform bit.
  cfg.source = JointPmf({2, 1, 1, 4}, {0.25, 0.25, 0.0, 0.0, 0.0, 0.0, 0.25, 0.25});
  // X -> (Y1, Y2, Y3) = (X, high bit, high bit), deterministic.
  std::vector<double> rows(4 * 16, 0.0);
  for (int x = 0; x < 4; ++x) {
    int hi = x >> 1;
    rows[static_cast<std::size_t>(x) * 16 + (static_cast<std::size_t>(x) * 2 + hi) * 2 + hi] = 1.0;
  }
  cfg.channel = make_cond_pmf({4}, {4, 2, 2}, std::move(rows));
  return cfg;
}

NegSchemeConfig bin_stats_config(double t2, double t3, int n, double eps,
                                 std::uint64_t seed) {
  NegSchemeConfig cfg;
  cfg.n = n;
  cfg.eps = eps;
  cfg.rates.t2 = t2;
  cfg.rates.t3 = t3;
  cfg.seed = seed;
  // (U, V2, V3, X): U degenerate, V2/V3 independent uniform bits, X = (V2,V3).
  std::vector<double> src(16, 0.0);
  for (int v2 = 0; v2 < 2; ++v2) {
    for (int v3 = 0; v3 < 2; ++v3) {
      src[static_cast<std::size_t>((v2 * 2 + v3) * 4 + v2 * 2 + v3)] = 0.25;
    }
  }
  cfg.source = JointPmf({1, 2, 2, 4}, std::move(src));
  std::vector<double> rows(4 * 16, 0.0);
  for (int x = 0; x < 4; ++x) {
    int v2 = x >> 1, v3 = x & 1;
    rows[static_cast<std::size_t>(x) * 16 + (static_cast<std::size_t>(x) * 2 + v2) * 2 + v3] = 1.0;
  }
  cfg.channel = make_cond_pmf({4}, {4, 2, 2}, std::move(rows));
  return cfg;
}

ICConfig xor_ic_config(double r1, double r2, int n, double eps, std::uint64_t seed,
                       const Caps& caps) {
  ICConfig cfg;
  cfg.n = n;
  cfg.eps = eps;
  cfg.rates = {r1, r2, 0.0};
  cfg.seed = seed;
  cfg.caps = caps;

  DetICSpec& s = cfg.spec;
  s.q_dim = 1;
  s.x_dim = {2, 2, 1};
  s.s_dim = {2, 2, 2};
  s.y_dim = {2, 2, 2};
  for (int l = 0; l < 3; ++l) {
    for (int k = 0; k < 3; ++k) {
      s.comp_dim[l][k] = s.x_dim[l];
      s.g[l][k].resize(static_cast<std::size_t>(s.x_dim[l]));
      for (int v = 0; v < s.x_dim[l]; ++v) s.g[l][k][static_cast<std::size_t>(v)] = v;
    }
  }
  // Receiver 1 interferers (2,3): dims 2x1; receiver 2 interferers (1,3):
  // dims 2x1; receiver 3 interferers (2,1): dims 2x2. All XOR.
  s.h[0] = {0, 1};
  s.h[1] = {0, 1};
  s.h[2] = {0, 1, 1, 0};
  s.f[0] = {0, 1, 1, 0};
  s.f[1] = {0, 1, 1, 0};
  s.f[2] = {0, 1};  // X33 degenerate, Y3 = S3
  cfg.q = JointPmf({1}, {1.0});
  cfg.x_given_q[0] = make_cond_pmf({1}, {2}, {0.5, 0.5});
  cfg.x_given_q[1] = make_cond_pmf({1}, {2}, {0.5, 0.5});
  cfg.x_given_q[2] = make_cond_pmf({1}, {1}, {1.0});
  return cfg;
}

JointPmf random_joint(Rng& rng, std::vector<int> dims) {
  std::size_t total = 1;
  for (int d : dims) total *= static_cast<std::size_t>(d);
  std::vector<double> p(total);
  double sum = 0;
  for (double& v : p) {
    v = -std::log(1.0 - rng.next_unit());
    sum += v;
  }
  for (double& v : p) v /= sum;
  return JointPmf(std::move(dims), std::move(p));
}

CondPmf random_channel(Rng& rng, std::vector<int> in_dims, std::vector<int> out_dims) {
  std::size_t in_n = 1, out_n = 1;
  for (int d : in_dims) in_n *= static_cast<std::size_t>(d);
  for (int d : out_dims) out_n *= static_cast<std::size_t>(d);
  std::vector<double> rows(in_n * out_n);
  for (std::size_t r = 0; r < in_n; ++r) {
    double sum = 0;
    for (std::size_t c = 0; c < out_n; ++c) {
      double v = -std::log(1.0 - rng.next_unit());
      rows[r * out_n + c] = v;
      sum += v;
    }
    for (std::size_t c = 0; c < out_n; ++c) rows[r * out_n + c] /= sum;
  }
  return make_cond_pmf(std::move(in_dims), std::move(out_dims), std::move(rows));
}

std::pair<JointPmf, CondPmf> random_model(Rng& rng) {
  auto pick = [&rng] { return static_cast<int>(2 + rng.uniform_index(2)); };
  std::vector<int> src_dims = {pick(), pick(), pick(), pick()};
  std::vector<int> out_dims = {pick(), pick(), pick()};
  JointPmf source = random_joint(rng, src_dims);
  CondPmf channel = random_channel(rng, {src_dims[3]}, std::move(out_dims));
  return {std::move(source), std::move(channel)};
}

MIProfile model_profile(const JointPmf& source, const CondPmf& channel) {
  return mi_profile(chain_compose(source, channel));
}

std::vector<RateTuple> sample_feasible_tuples(const ConstraintSystem& sys,
                                              const MIProfile& mi, int count,
                                              Rng& rng) {
  // Start with all message rates at zero and the pair-selection budget split
  // over (T2,T3) inside the per-receiver allowances.
  double c = mi.iV2_V3_gU, a2 = mi.iUV2_Y2, a3 = mi.iUV3_Y3;
  if (a2 + a3 < c - 1e-12) return {};
  std::array<double, kNumRateVars> x{};
  x[kT3] = std::min(a3, c);
  x[kT2] = c - x[kT3];
  if (!sys.satisfied(x, 1e-9)) return {};

  std::vector<LinearConstraint> rows;
  rows.reserve(sys.constraints.size());
  for (const LinearConstraint& r : sys.constraints) rows.push_back(r.as_le());

  std::array<double, kNumRateVars> d{};
  auto step = [&] {
    for (double& v : d) v = rng.next_gaussian();
    double lo = -1e18, hi = 1e18;
    for (const LinearConstraint& r : rows) {
      double ad = 0, ax = 0;
      for (int v = 0; v < kNumRateVars; ++v) {
        ad += r.coeffs[static_cast<std::size_t>(v)] * d[static_cast<std::size_t>(v)];
        ax += r.coeffs[static_cast<std::size_t>(v)] * x[static_cast<std::size_t>(v)];
      }
      if (std::abs(ad) < 1e-14) continue;
      double lim = (r.rhs - ax) / ad;
      if (ad > 0) {
        hi = std::min(hi, lim);
      } else {
        lo = std::max(lo, lim);
      }
    }
    double u = rng.next_unit();
    // Degenerate or unbounded chords keep the current point.
    if (hi < lo || hi > 1e17 || lo < -1e17) return;
    double lam = lo + u * (hi - lo);
    for (int v = 0; v < kNumRateVars; ++v) x[static_cast<std::size_t>(v)] += lam * d[static_cast<std::size_t>(v)];
  };

  for (int i = 0; i < 64; ++i) step();
  std::vector<RateTuple> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < 4; ++j) step();
    RateTuple t;
    for (int v = 0; v < kNumRateVars; ++v) t.set(v, x[static_cast<std::size_t>(v)]);
    out.push_back(t);
  }
  return out;
}

SuiteResult run_pointwise_suite(std::uint64_t seed, int num_models, int samples_per_model) {
  Rng rng(derive_stream_seed(seed, stream_index(StreamTag::kAux, 1)));
  long checked = 0, skipped_band = 0, violations = 0;
  std::ostringstream detail;

  for (int m = 0; m < num_models; ++m) {
    MIProfile mi;
    std::vector<RateTuple> tuples;
    // Resample until the hit-and-run start is feasible for this model.
    for (int attempt = 0; attempt < 100 && tuples.empty(); ++attempt) {
      auto [source, channel] = random_model(rng);
      mi = model_profile(source, channel);
      tuples = sample_feasible_tuples(build_nonunique_system(mi), mi, samples_per_model, rng);
    }
    if (tuples.empty()) {
      return {"pointwise", false, "could not find a feasible random model"};
    }
    auto systems = build_jointunique_systems(mi);
    for (const RateTuple& t : tuples) {
      RegimeVerdict rv = regime_predicate(mi, t);
      if (rv.y2 == Regime::kBoundary || rv.y3 == Regime::kBoundary) {
        ++skipped_band;
        continue;
      }
      std::array<double, kNumRateVars> x{};
      for (int v = 0; v < kNumRateVars; ++v) x[static_cast<std::size_t>(v)] = t.get(v);
      bool ok = false;
      for (const ConstraintSystem& s : systems) ok = ok || s.satisfied(x, 1e-9);
      ++checked;
      if (!ok) {
        ++violations;
        if (violations == 1) {
          detail << "first violation at model " << m << " r0=" << t.r0 << " r1=" << t.r1();
        }
      }
    }
  }
  std::ostringstream os;
  os << "models=" << num_models << " checked=" << checked << " band-skipped=" << skipped_band
     << " violations=" << violations;
  if (violations) os << "; " << detail.str();
  return {"pointwise", violations == 0 && checked > 0, os.str()};
}

SuiteResult run_projection_suite(std::uint64_t seed, int num_models, double tol, int grid) {
  Rng rng(derive_stream_seed(seed, stream_index(StreamTag::kAux, 2)));
  int equal = 0;
  std::ostringstream detail;
  for (int m = 0; m < num_models; ++m) {
    auto [source, channel] = random_model(rng);
    MIProfile mi = model_profile(source, channel);
    RegionUnion nonunique{{project_region(build_nonunique_system(mi))}};
    RegionUnion jointunique;
    for (const ConstraintSystem& s : build_jointunique_systems(mi)) {
      jointunique.parts.push_back(project_region(s));
    }
    CompareResult cr = compare_regions(nonunique, jointunique, tol, grid);
    if (cr.verdict == CompareResult::Verdict::kEqual) {
      ++equal;
    } else if (detail.tellp() == 0) {
      detail << "; model " << m << " verdict "
             << (cr.verdict == CompareResult::Verdict::kANotSubsetB ? "a_not_subset_b"
                                                                    : "b_not_subset_a");
      auto w = cr.witness_a_only ? cr.witness_a_only : cr.witness_b_only;
      if (w) detail << " witness (" << w->first << ", " << w->second << ")";
    }
  }
  std::ostringstream os;
  os << "models=" << num_models << " equal=" << equal << detail.str();
  return {"projection", equal == num_models, os.str()};
}

SuiteResult run_implication_suite(std::uint64_t seed, long min_trials) {
  long total = 0, viol = 0;
  std::ostringstream os;

  // Broadcast scenarios: a mid-rate point (mostly decodable) and a high-rate
  // point (frequent ambiguity) to exercise all verdict kinds.
  RateTuple inside;
  inside.r0 = 0.5;
  inside.t2 = inside.t3 = 0.25;
  RateTuple crowded;
  crowded.r0 = 0.9;
  crowded.t2 = crowded.t3 = 0.25;
  long bc_trials = std::max(min_trials * 2 / 5, 1L);
  for (auto&& [rates, tag] : {std::pair{inside, "inside"}, {crowded, "crowded"}}) {
    NegSchemeConfig cfg = two_bit_config(rates, 8, 0.3, seed);
    TrialStats st = run_trials(cfg, bc_trials, 500);
    total += st.trials;
    long v = st.viol_comp2_implies_nonunique + st.viol_comp1_implies_nonunique + st.viol_aux_rule;
    viol += v;
    os << "bc-" << tag << ": trials=" << st.trials << " violations=" << v << "; ";
  }

  long ic_trials = std::max(min_trials - total, min_trials / 5);
  ICConfig ic = xor_ic_config(0.6, 0.25, 8, 0.75, seed ^ 0x9E3779B97F4A7C15ULL);
  ICTrialStats ist = ic_run_trials(ic, ic_trials, 500);
  total += ist.trials;
  long icv = ist.viol_compboth_implies_nonunique + ist.viol_aux_rule;
  viol += icv;
  os << "ic: trials=" << ist.trials << " violations=" << icv
     << " interference-disagreements=" << ist.aux_interference_disagree << "; total=" << total;
  return {"implications", viol == 0 && total >= min_trials, os.str()};
}

SuiteResult run_concentration_suite(std::uint64_t seed, long draws) {
  // M(T2)=8, M(T3)=64 at n=16; delta = 0.1 puts N*p_l = 64 * 2^-1.6 ~ 21.
  NegSchemeConfig cfg = bin_stats_config(0.1875, 0.375, 16, 0.75, seed);
  BinStats bs = bin_statistics(cfg, draws, 0.1);
  ConcentrationReport rep = concentration_check(bs);
  std::ostringstream os;
  os << "draws=" << draws << " N*p_l=" << bs.N * bs.p_l << " n2_tail=" << rep.emp_n2_tail
     << " bound=" << rep.bound_n2 << " n3_tail=" << rep.emp_n3_tail << " bound=" << rep.bound_n3;
  return {"concentration", rep.pass, os.str()};
}

std::vector<SuiteResult> run_all_suites(std::uint64_t seed) {
  return {run_pointwise_suite(seed, 20, 1000), run_projection_suite(seed, 10, 1e-6, 200),
          run_implication_suite(seed, 10000), run_concentration_suite(seed, 500)};
}

}  // namespace ratesim
