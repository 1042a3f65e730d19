#include "ratesim/detic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ratesim {

const std::array<const char*, kICNumDecoders> kICDecoderNames = {
    "ic_nonunique", "ic_comp_none", "ic_comp_2", "ic_comp_3", "ic_comp_both", "ic_aux"};

namespace {

ICValidation fail(std::string msg) { return {false, std::move(msg)}; }

ICValidation check_table(const std::vector<int>& t, std::size_t want,
                         int range, const std::string& name) {
  if (t.size() != want) {
    std::ostringstream os;
    os << name << ": expected " << want << " entries, got " << t.size();
    return fail(os.str());
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < 0 || t[i] >= range) {
      std::ostringstream os;
      os << name << "[" << i << "] = " << t[i] << " outside [0, " << range << ")";
      return fail(os.str());
    }
  }
  return {};
}

// Injectivity of a two-argument table in each argument with the other fixed.
ICValidation check_injective(const std::vector<int>& t, int da, int db,
                             const std::string& name) {
  for (int b = 0; b < db; ++b) {
    for (int a1 = 0; a1 < da; ++a1) {
      for (int a2 = a1 + 1; a2 < da; ++a2) {
        if (t[static_cast<std::size_t>(a1) * db + b] == t[static_cast<std::size_t>(a2) * db + b]) {
          std::ostringstream os;
          os << name << " not injective in first argument: (" << a1 << "," << b
             << ") and (" << a2 << "," << b << ") both map to "
             << t[static_cast<std::size_t>(a1) * db + b];
          return fail(os.str());
        }
      }
    }
  }
  for (int a = 0; a < da; ++a) {
    for (int b1 = 0; b1 < db; ++b1) {
      for (int b2 = b1 + 1; b2 < db; ++b2) {
        if (t[static_cast<std::size_t>(a) * db + b1] == t[static_cast<std::size_t>(a) * db + b2]) {
          std::ostringstream os;
          os << name << " not injective in second argument: (" << a << "," << b1
             << ") and (" << a << "," << b2 << ") both map to "
             << t[static_cast<std::size_t>(a) * db + b1];
          return fail(os.str());
        }
      }
    }
  }
  return {};
}

}  // namespace

ICValidation validate_spec(const DetICSpec& spec) {
  if (spec.q_dim < 1) return fail("q_dim must be >= 1");
  for (int l = 0; l < 3; ++l) {
    if (spec.x_dim[l] < 1) return fail("x_dim[" + std::to_string(l) + "] must be >= 1");
    if (spec.s_dim[l] < 1) return fail("s_dim[" + std::to_string(l) + "] must be >= 1");
    if (spec.y_dim[l] < 1) return fail("y_dim[" + std::to_string(l) + "] must be >= 1");
    for (int k = 0; k < 3; ++k) {
      if (spec.comp_dim[l][k] < 1) {
        return fail("comp_dim[" + std::to_string(l) + "][" + std::to_string(k) + "] must be >= 1");
      }
      auto name = "g[" + std::to_string(l) + "][" + std::to_string(k) + "]";
      if (auto v = check_table(spec.g[l][k], static_cast<std::size_t>(spec.x_dim[l]),
                               spec.comp_dim[l][k], name);
          !v.ok) {
        return v;
      }
    }
  }
  for (int k = 0; k < 3; ++k) {
    int da = spec.comp_dim[kICInterferers[k][0]][k];
    int db = spec.comp_dim[kICInterferers[k][1]][k];
    auto hname = "h[" + std::to_string(k) + "]";
    if (auto v = check_table(spec.h[k], static_cast<std::size_t>(da) * db, spec.s_dim[k], hname);
        !v.ok) {
      return v;
    }
    if (auto v = check_injective(spec.h[k], da, db, hname); !v.ok) return v;

    int dx = spec.comp_dim[k][k];
    auto fname = "f[" + std::to_string(k) + "]";
    if (auto v = check_table(spec.f[k], static_cast<std::size_t>(dx) * spec.s_dim[k],
                             spec.y_dim[k], fname);
        !v.ok) {
      return v;
    }
    if (auto v = check_injective(spec.f[k], dx, spec.s_dim[k], fname); !v.ok) return v;
  }
  return {};
}

ICCodebook ic_generate_codebook(const ICConfig& cfg, Rng& rng) {
  if (auto v = validate_spec(cfg.spec); !v.ok) {
    throw std::invalid_argument("ic_generate_codebook: invalid spec: " + v.message);
  }
  if (cfg.q.rank() != 1 || cfg.q.dims()[0] != cfg.spec.q_dim) {
    throw std::invalid_argument("ic_generate_codebook: p(Q) dims mismatch spec");
  }
  for (int l = 0; l < 3; ++l) {
    const CondPmf& c = cfg.x_given_q[l];
    if (c.in_dims != std::vector<int>{cfg.spec.q_dim} ||
        c.out_dims != std::vector<int>{cfg.spec.x_dim[l]}) {
      throw std::invalid_argument("ic_generate_codebook: p(X|Q) dims mismatch spec");
    }
  }

  ICCodebook cb;
  cb.n = cfg.n;
  for (int l = 0; l < 3; ++l) cb.m[l] = codebook_size(cfg.n, cfg.rates[l]);
  for (auto m : cb.m) {
    if (m > cfg.caps.max_codebook) throw std::runtime_error("ic_generate_codebook: extent exceeds max_codebook cap");
  }
  if (cb.m[0] * cb.m[1] * cb.m[2] > cfg.caps.max_search) {
    throw std::runtime_error("ic_generate_codebook: decoder scan exceeds max_search cap");
  }

  auto n = static_cast<std::size_t>(cfg.n);
  cb.q.resize(n);
  std::span<const double> pq(cfg.q.probs());
  for (std::size_t i = 0; i < n; ++i) cb.q[i] = static_cast<Symbol>(rng.sample(pq));

  for (int l = 0; l < 3; ++l) {
    cb.x[l].resize(cb.m[l] * n);
    for (std::size_t mi = 0; mi < cb.m[l]; ++mi) {
      Symbol* row = cb.x[l].data() + mi * n;
      for (std::size_t i = 0; i < n; ++i) {
        row[i] = static_cast<Symbol>(rng.sample(cfg.x_given_q[l].row(cb.q[i])));
      }
    }
  }

  cb.c21.resize(cb.m[1] * n);
  for (std::size_t i = 0; i < cb.x[1].size(); ++i) {
    cb.c21[i] = static_cast<Symbol>(cfg.spec.g[1][0][cb.x[1][i]]);
  }
  cb.c31.resize(cb.m[2] * n);
  for (std::size_t i = 0; i < cb.x[2].size(); ++i) {
    cb.c31[i] = static_cast<Symbol>(cfg.spec.g[2][0][cb.x[2][i]]);
  }
  return cb;
}

void ic_transmit(const DetICSpec& spec, const Symbol* x1, const Symbol* x2,
                 const Symbol* x3, int n, std::vector<Symbol>& y1,
                 std::vector<Symbol>& y2, std::vector<Symbol>& y3) {
  const Symbol* xs[3] = {x1, x2, x3};
  std::vector<Symbol>* ys[3] = {&y1, &y2, &y3};
  for (int k = 0; k < 3; ++k) ys[k]->resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < 3; ++k) {
      int ia = kICInterferers[k][0], ib = kICInterferers[k][1];
      int a = spec.g[ia][k][xs[ia][i]];
      int b = spec.g[ib][k][xs[ib][i]];
      int s = spec.h[k][static_cast<std::size_t>(a) * spec.comp_dim[ib][k] + b];
      int own = spec.g[k][k][xs[k][i]];
      (*ys[k])[static_cast<std::size_t>(i)] =
          static_cast<Symbol>(spec.f[k][static_cast<std::size_t>(own) * spec.s_dim[k] + s]);
    }
  }
}

JointPmf ic_extended_joint(const DetICSpec& spec, const JointPmf& q,
                           const std::array<CondPmf, 3>& x_given_q) {
  std::vector<int> dims = {spec.q_dim,         spec.x_dim[0], spec.comp_dim[1][0],
                           spec.comp_dim[2][0], spec.s_dim[0], spec.y_dim[0]};
  std::size_t total = 1;
  for (int d : dims) total *= static_cast<std::size_t>(d);
  std::vector<double> probs(total, 0.0);

  for (int qv = 0; qv < spec.q_dim; ++qv) {
    double pq = q[static_cast<std::size_t>(qv)];
    if (pq <= 0.0) continue;
    auto r1 = x_given_q[0].row(static_cast<std::size_t>(qv));
    auto r2 = x_given_q[1].row(static_cast<std::size_t>(qv));
    auto r3 = x_given_q[2].row(static_cast<std::size_t>(qv));
    for (int x1 = 0; x1 < spec.x_dim[0]; ++x1) {
      for (int x2 = 0; x2 < spec.x_dim[1]; ++x2) {
        for (int x3 = 0; x3 < spec.x_dim[2]; ++x3) {
          double p = pq * r1[static_cast<std::size_t>(x1)] * r2[static_cast<std::size_t>(x2)] *
                     r3[static_cast<std::size_t>(x3)];
          if (p <= 0.0) continue;
          int c21 = spec.g[1][0][static_cast<std::size_t>(x2)];
          int c31 = spec.g[2][0][static_cast<std::size_t>(x3)];
          int s1 = spec.h[0][static_cast<std::size_t>(c21) * spec.comp_dim[2][0] + c31];
          int own = spec.g[0][0][static_cast<std::size_t>(x1)];
          int y1 = spec.f[0][static_cast<std::size_t>(own) * spec.s_dim[0] + s1];
          std::size_t flat = static_cast<std::size_t>(qv);
          flat = flat * static_cast<std::size_t>(spec.x_dim[0]) + static_cast<std::size_t>(x1);
          flat = flat * static_cast<std::size_t>(spec.comp_dim[1][0]) + static_cast<std::size_t>(c21);
          flat = flat * static_cast<std::size_t>(spec.comp_dim[2][0]) + static_cast<std::size_t>(c31);
          flat = flat * static_cast<std::size_t>(spec.s_dim[0]) + static_cast<std::size_t>(s1);
          flat = flat * static_cast<std::size_t>(spec.y_dim[0]) + static_cast<std::size_t>(y1);
          probs[flat] += p;
        }
      }
    }
  }
  return JointPmf(std::move(dims), std::move(probs));
}

namespace {

std::vector<int> iv(std::initializer_list<int> l) { return {l.begin(), l.end()}; }

}  // namespace

ICDecoderRefs ic_make_decoder_refs(const ICConfig& cfg) {
  if (auto v = validate_spec(cfg.spec); !v.ok) {
    throw std::invalid_argument("ic_make_decoder_refs: invalid spec: " + v.message);
  }
  ICDecoderRefs r;
  r.ext = ic_extended_joint(cfg.spec, cfg.q, cfg.x_given_q);
  auto keep = [&](std::initializer_list<int> k) { return marginalize(r.ext, iv(k)); };
  r.t_own = TypTest(keep({0, 5, 1}), cfg.n, cfg.eps);
  r.t_i2 = TypTest(keep({0, 5, 2, 1}), cfg.n, cfg.eps);
  r.t_i3 = TypTest(keep({0, 5, 3, 1}), cfg.n, cfg.eps);
  r.t_full = TypTest(keep({0, 5, 2, 3, 4, 1}), cfg.n, cfg.eps);
  return r;
}

namespace {

// Combined interference sequence for a candidate (m2, m3).
void make_s1(const ICCodebook& cb, const DetICSpec& spec, std::size_t m2,
             std::size_t m3, Symbol* out) {
  const Symbol* a = cb.c21_row(m2);
  const Symbol* b = cb.c31_row(m3);
  int db = spec.comp_dim[2][0];
  for (int i = 0; i < cb.n; ++i) {
    out[i] = static_cast<Symbol>(spec.h[0][static_cast<std::size_t>(a[i]) * db + b[i]]);
  }
}

Verdict verdict_from(std::size_t count, std::span<const std::size_t> first,
                     std::span<const std::size_t> want) {
  Verdict v;
  if (count == 0) {
    v.kind = Verdict::Kind::kNoCandidate;
  } else if (count > 1) {
    v.kind = Verdict::Kind::kAmbiguous;
  } else {
    v.decoded.assign(first.begin(), first.end());
    bool match = true;
    for (std::size_t i = 0; i < first.size(); ++i) match = match && first[i] == want[i];
    v.kind = match ? Verdict::Kind::kCorrect : Verdict::Kind::kWrong;
  }
  return v;
}

}  // namespace

Verdict ic_decode_nonunique(const ICCodebook& cb, const DetICSpec& spec,
                            const ICDecoderRefs& refs,
                            const std::vector<Symbol>& y1, const ICMsg& truth) {
  auto n = static_cast<std::size_t>(cb.n);
  std::vector<std::int32_t> ctx(n);
  std::vector<std::int32_t> scratch(refs.t_full.cells());
  std::vector<Symbol> s1(n);
  std::vector<char> seen(cb.m[0], 0);
  std::size_t distinct = 0, first_m1 = 0;

  for (std::size_t m2 = 0; m2 < cb.m[1]; ++m2) {
    for (std::size_t m3 = 0; m3 < cb.m[2]; ++m3) {
      make_s1(cb, spec, m2, m3, s1.data());
      const Symbol* prefix[] = {cb.q.data(), y1.data(), cb.c21_row(m2), cb.c31_row(m3), s1.data()};
      refs.t_full.bind(prefix, ctx.data());
      for (std::size_t m1 = 0; m1 < cb.m[0]; ++m1) {
        if (seen[m1]) continue;
        if (refs.t_full.test_bound(ctx.data(), cb.x_row(0, m1), scratch.data())) {
          seen[m1] = 1;
          if (++distinct >= 2) return {Verdict::Kind::kAmbiguous, {}};
          first_m1 = m1;
        }
      }
    }
  }
  std::array<std::size_t, 1> first = {first_m1}, want = {truth.m1};
  return verdict_from(distinct, first, want);
}

Verdict ic_decode_component(const ICCodebook& cb, const DetICSpec& spec,
                            const ICDecoderRefs& refs,
                            const std::vector<Symbol>& y1, ICSubset subset,
                            const ICMsg& truth) {
  auto n = static_cast<std::size_t>(cb.n);
  std::vector<std::int32_t> ctx(n);
  std::vector<Symbol> s1;

  if (subset == ICSubset::kNone) {
    std::vector<std::int32_t> scratch(refs.t_own.cells());
    const Symbol* prefix[] = {cb.q.data(), y1.data()};
    refs.t_own.bind(prefix, ctx.data());
    std::size_t count = 0, first_m1 = 0;
    for (std::size_t m1 = 0; m1 < cb.m[0]; ++m1) {
      if (refs.t_own.test_bound(ctx.data(), cb.x_row(0, m1), scratch.data())) {
        if (++count >= 2) return {Verdict::Kind::kAmbiguous, {}};
        first_m1 = m1;
      }
    }
    std::array<std::size_t, 1> first = {first_m1}, want = {truth.m1};
    return verdict_from(count, first, want);
  }

  if (subset == ICSubset::k2 || subset == ICSubset::k3) {
    bool two = subset == ICSubset::k2;
    const TypTest& t = two ? refs.t_i2 : refs.t_i3;
    std::vector<std::int32_t> scratch(t.cells());
    std::size_t mi_count = two ? cb.m[1] : cb.m[2];
    std::size_t count = 0;
    std::array<std::size_t, 2> first{};
    for (std::size_t mi = 0; mi < mi_count; ++mi) {
      const Symbol* comp = two ? cb.c21_row(mi) : cb.c31_row(mi);
      const Symbol* prefix[] = {cb.q.data(), y1.data(), comp};
      t.bind(prefix, ctx.data());
      for (std::size_t m1 = 0; m1 < cb.m[0]; ++m1) {
        if (t.test_bound(ctx.data(), cb.x_row(0, m1), scratch.data())) {
          if (++count >= 2) return {Verdict::Kind::kAmbiguous, {}};
          first = {m1, mi};
        }
      }
    }
    std::array<std::size_t, 2> want = {truth.m1, two ? truth.m2 : truth.m3};
    return verdict_from(count, first, want);
  }

  std::vector<std::int32_t> scratch(refs.t_full.cells());
  s1.resize(n);
  std::size_t count = 0;
  std::array<std::size_t, 3> first{};
  for (std::size_t m2 = 0; m2 < cb.m[1]; ++m2) {
    for (std::size_t m3 = 0; m3 < cb.m[2]; ++m3) {
      make_s1(cb, spec, m2, m3, s1.data());
      const Symbol* prefix[] = {cb.q.data(), y1.data(), cb.c21_row(m2), cb.c31_row(m3), s1.data()};
      refs.t_full.bind(prefix, ctx.data());
      for (std::size_t m1 = 0; m1 < cb.m[0]; ++m1) {
        if (refs.t_full.test_bound(ctx.data(), cb.x_row(0, m1), scratch.data())) {
          if (++count >= 2) return {Verdict::Kind::kAmbiguous, {}};
          first = {m1, m2, m3};
        }
      }
    }
  }
  std::array<std::size_t, 3> want = {truth.m1, truth.m2, truth.m3};
  return verdict_from(count, first, want);
}

Verdict ic_auxiliary_from_components(const std::array<Verdict, 4>& comps,
                                     std::size_t true_m1,
                                     bool* interference_disagree) {
  if (interference_disagree) *interference_disagree = false;
  bool any = false, agree = true;
  std::size_t m1 = 0;
  for (const Verdict& c : comps) {
    if (!c.decided()) continue;
    if (!any) {
      m1 = c.decoded[0];
      any = true;
    } else if (c.decoded[0] != m1) {
      agree = false;
    }
  }
  if (!any) return {Verdict::Kind::kNoCandidate, {}};
  if (!agree) return {Verdict::Kind::kAmbiguous, {}};

  if (interference_disagree) {
    // comps order: kNone, k2, k3, kBoth; decoded layouts {m1}, {m1,m2},
    // {m1,m3}, {m1,m2,m3}.
    bool has2a = comps[1].decided(), has2b = comps[3].decided();
    bool has3a = comps[2].decided(), has3b = comps[3].decided();
    if (has2a && has2b && comps[1].decoded[1] != comps[3].decoded[1]) *interference_disagree = true;
    if (has3a && has3b && comps[2].decoded[1] != comps[3].decoded[2]) *interference_disagree = true;
  }
  Verdict v;
  v.decoded = {m1};
  v.kind = (m1 == true_m1) ? Verdict::Kind::kCorrect : Verdict::Kind::kWrong;
  return v;
}

Verdict ic_decode_auxiliary(const ICCodebook& cb, const DetICSpec& spec,
                            const ICDecoderRefs& refs,
                            const std::vector<Symbol>& y1, const ICMsg& truth,
                            bool* interference_disagree) {
  std::array<Verdict, 4> comps = {
      ic_decode_component(cb, spec, refs, y1, ICSubset::kNone, truth),
      ic_decode_component(cb, spec, refs, y1, ICSubset::k2, truth),
      ic_decode_component(cb, spec, refs, y1, ICSubset::k3, truth),
      ic_decode_component(cb, spec, refs, y1, ICSubset::kBoth, truth)};
  return ic_auxiliary_from_components(comps, truth.m1, interference_disagree);
}

double ICBoundReport::max_exponent() const {
  return std::max({single2, pair, pair_capped, combined});
}

ICBoundReport ic_bound_exponents(const DetICSpec& spec, const JointPmf& q,
                                 const std::array<CondPmf, 3>& x_given_q,
                                 const std::array<double, 3>& rates) {
  if (auto v = validate_spec(spec); !v.ok) {
    throw std::invalid_argument("ic_bound_exponents: invalid spec: " + v.message);
  }
  JointPmf ext = ic_extended_joint(spec, q, x_given_q);
  auto h_of = [&](std::initializer_list<int> vars) { return entropy_of(ext, iv(vars)); };
  auto cmi = [&](std::initializer_list<int> a, std::initializer_list<int> b,
                 std::initializer_list<int> c) {
    return conditional_mutual_information(ext, iv(a), iv(b), iv(c));
  };
  // dims: Q=0, X1=1, X21=2, X31=3, S1=4, Y1=5
  double h_x21_q = h_of({2, 0}) - h_of({0});
  double h_x31_q = h_of({3, 0}) - h_of({0});
  double h_s1_x31q = h_of({4, 3, 0}) - h_of({3, 0});
  double h_s1_q = h_of({4, 0}) - h_of({0});
  double r1 = rates[0], r2 = rates[1], r3 = rates[2];

  ICBoundReport rep;
  rep.single2 = r1 + std::min(r2, h_x21_q) - cmi({1, 2}, {5}, {0, 3});
  rep.pair = r1 + std::min(r3, h_x31_q) + std::min(r2, h_x21_q) - cmi({1, 2, 3}, {5}, {0});
  rep.pair_capped = r1 + std::min(r3, h_x31_q) + std::min({r2, h_x21_q, h_s1_x31q}) -
                    cmi({1, 2, 3}, {5}, {0});
  rep.combined = r1 + std::min({r2 + r3, r2 + h_x31_q, h_x21_q + r3, h_s1_q}) -
                 cmi({1, 4}, {5}, {0});
  return rep;
}

namespace {

bool ic_aux_rule_consistent(const std::array<Verdict, 4>& comps, const Verdict& aux) {
  bool any = false, agree = true;
  std::size_t m1 = 0;
  for (const Verdict& c : comps) {
    if (!c.decided()) continue;
    if (!any) {
      m1 = c.decoded[0];
      any = true;
    } else if (c.decoded[0] != m1) {
      agree = false;
    }
  }
  if (!any || !agree) return !aux.decided();
  return aux.decided() && aux.decoded.size() == 1 && aux.decoded[0] == m1;
}

}  // namespace

ICTrialStats ic_run_trials(const ICConfig& cfg, long trials, long fresh_codebook_every) {
  if (trials < 1) throw std::invalid_argument("ic_run_trials: trials must be >= 1");
  if (fresh_codebook_every < 1) fresh_codebook_every = trials;

  ICDecoderRefs refs = ic_make_decoder_refs(cfg);
  ICTrialStats st;
  st.trials = trials;

  ICCodebook cb;
  std::vector<Symbol> y1, y2, y3;
  std::uint64_t cb_counter = 0;
  for (long trial = 0; trial < trials; ++trial) {
    if (trial % fresh_codebook_every == 0) {
      Rng cb_rng(derive_stream_seed(cfg.seed, stream_index(StreamTag::kCodebook, cb_counter++)));
      cb = ic_generate_codebook(cfg, cb_rng);
    }
    Rng rng(derive_stream_seed(cfg.seed, stream_index(StreamTag::kTrial, static_cast<std::uint64_t>(trial))));
    ICMsg msg;
    msg.m1 = rng.uniform_index(cb.m[0]);
    msg.m2 = rng.uniform_index(cb.m[1]);
    msg.m3 = rng.uniform_index(cb.m[2]);

    ic_transmit(cfg.spec, cb.x_row(0, msg.m1), cb.x_row(1, msg.m2), cb.x_row(2, msg.m3),
                cfg.n, y1, y2, y3);

    Verdict nu = ic_decode_nonunique(cb, cfg.spec, refs, y1, msg);
    std::array<Verdict, 4> comps = {
        ic_decode_component(cb, cfg.spec, refs, y1, ICSubset::kNone, msg),
        ic_decode_component(cb, cfg.spec, refs, y1, ICSubset::k2, msg),
        ic_decode_component(cb, cfg.spec, refs, y1, ICSubset::k3, msg),
        ic_decode_component(cb, cfg.spec, refs, y1, ICSubset::kBoth, msg)};
    bool disagree = false;
    Verdict aux = ic_auxiliary_from_components(comps, msg.m1, &disagree);

    st.decoders[kICNonunique].add(nu.kind);
    st.decoders[kICCompNone].add(comps[0].kind);
    st.decoders[kICComp2].add(comps[1].kind);
    st.decoders[kICComp3].add(comps[2].kind);
    st.decoders[kICCompBoth].add(comps[3].kind);
    st.decoders[kICAux].add(aux.kind);

    if (comps[3].kind == Verdict::Kind::kCorrect && nu.kind != Verdict::Kind::kCorrect) {
      ++st.viol_compboth_implies_nonunique;
    }
    if (!ic_aux_rule_consistent(comps, aux)) ++st.viol_aux_rule;
    if (disagree) ++st.aux_interference_disagree;
  }
  return st;
}

}  // namespace ratesim
