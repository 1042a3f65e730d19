#include "ratesim/bc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ratesim {

const std::array<const char*, kNumDecoders> kDecoderNames = {
    "y1",      "y2_nonunique", "y2_comp1", "y2_comp2", "y2_aux",
    "y3_nonunique", "y3_comp1", "y3_comp2", "y3_aux"};

void VerdictCounts::add(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::kCorrect: ++correct; break;
    case Verdict::Kind::kWrong: ++wrong; break;
    case Verdict::Kind::kNoCandidate: ++no_candidate; break;
    case Verdict::Kind::kAmbiguous: ++ambiguous; break;
  }
}

std::size_t codebook_size(int n, double rate) {
  double m = std::round(std::exp2(n * rate));
  if (m < 1.0) return 1;
  return static_cast<std::size_t>(m);
}

namespace {

std::vector<int> iv(std::initializer_list<int> l) { return {l.begin(), l.end()}; }

JointPmf marg(const JointPmf& p, std::initializer_list<int> keep) {
  auto k = iv(keep);
  return marginalize(p, k);
}

}  // namespace

DecoderRefs make_decoder_refs(const NegSchemeConfig& cfg) {
  if (cfg.source.rank() != 4) throw std::invalid_argument("NegSchemeConfig: source must be over (U,V2,V3,X)");
  if (cfg.channel.out_dims.size() != 3) throw std::invalid_argument("NegSchemeConfig: channel must output (Y1,Y2,Y3)");
  DecoderRefs r;
  r.joint7 = chain_compose(cfg.source, cfg.channel);
  int n = cfg.n;
  double eps = cfg.eps;
  r.enc = TypTest(marg(r.joint7, {0, 1, 2}), n, eps);
  r.y1 = TypTest(marg(r.joint7, {0, 1, 2, 4, 3}), n, eps);
  r.y2_scan = TypTest(marg(r.joint7, {0, 5, 1}), n, eps);
  r.y2_cloud = TypTest(marg(r.joint7, {5, 0}), n, eps);
  r.y3_scan = TypTest(marg(r.joint7, {0, 6, 2}), n, eps);
  r.y3_cloud = TypTest(marg(r.joint7, {6, 0}), n, eps);
  r.y1_marg = TypTest(marg(r.joint7, {4}), n, eps);
  r.y2_marg = TypTest(marg(r.joint7, {5}), n, eps);
  r.y3_marg = TypTest(marg(r.joint7, {6}), n, eps);
  return r;
}

namespace {

// Samples a length-n row i.i.d. from `pmf` (used for the cloud codebook).
void sample_row(const JointPmf& pmf, int n, Rng& rng, Symbol* out) {
  std::span<const double> p(pmf.probs());
  for (int i = 0; i < n; ++i) out[i] = static_cast<Symbol>(rng.sample(p));
}

// Samples conditionally i.i.d. given parent rows: in_flat is computed per
// position from the parent symbols with the channel's input strides.
void sample_cond_row(const CondPmf& c, std::span<const Symbol* const> parents,
                     int n, Rng& rng, Symbol* out) {
  for (int i = 0; i < n; ++i) {
    std::size_t in_flat = 0;
    for (std::size_t k = 0; k < parents.size(); ++k) {
      in_flat = in_flat * static_cast<std::size_t>(c.in_dims[k]) + parents[k][i];
    }
    out[i] = static_cast<Symbol>(rng.sample(c.row(in_flat)));
  }
}

// Shuffled round-robin partition of {0..count-1} into `bins` classes with
// sizes differing by at most 1.
std::vector<int> make_bins(std::size_t count, std::size_t bins, Rng& rng) {
  std::vector<std::size_t> perm(count);
  for (std::size_t i = 0; i < count; ++i) perm[i] = i;
  for (std::size_t i = count; i > 1; --i) {
    std::size_t k = rng.uniform_index(i);
    std::swap(perm[i - 1], perm[k]);
  }
  std::vector<int> out(count);
  for (std::size_t i = 0; i < count; ++i) out[perm[i]] = static_cast<int>(i % bins);
  return out;
}

}  // namespace

NegCodebook generate_codebook(const NegSchemeConfig& cfg, const DecoderRefs& refs, Rng& rng) {
  NegCodebook cb;
  cb.n = cfg.n;
  cb.m0 = codebook_size(cfg.n, cfg.rates.r0);
  cb.ms0 = codebook_size(cfg.n, cfg.rates.s0);
  cb.ms1 = codebook_size(cfg.n, cfg.rates.s1);
  cb.ms2 = codebook_size(cfg.n, cfg.rates.s2);
  cb.ms3 = codebook_size(cfg.n, cfg.rates.s3);
  cb.mt2 = codebook_size(cfg.n, cfg.rates.t2);
  cb.mt3 = codebook_size(cfg.n, cfg.rates.t3);
  if (cb.mt2 < cb.ms2 || cb.mt3 < cb.ms3) throw std::invalid_argument("generate_codebook: bin count exceeds satellite extent (T >= S violated)");

  for (std::size_t ext : {cb.m0, cb.ms0, cb.ms1, cb.ms2, cb.ms3, cb.mt2, cb.mt3}) {
    if (ext > cfg.caps.max_codebook) throw std::runtime_error("generate_codebook: extent exceeds max_codebook cap");
  }
  std::size_t j_n = cb.j_count();
  std::size_t scan = std::max({j_n * cb.mt2, j_n * cb.mt3, j_n * cb.ms2 * cb.ms3 * cb.ms1});
  if (scan > cfg.caps.max_search) throw std::runtime_error("generate_codebook: decoder scan exceeds max_search cap");

  const JointPmf p_u = marg(cfg.source, {0});
  const CondPmf v2_given_u = condition(marg(cfg.source, {0, 1}), iv({0}));
  const CondPmf v3_given_u = condition(marg(cfg.source, {0, 2}), iv({0}));
  const CondPmf x_given_uvv = condition(cfg.source, iv({0, 1, 2}));

  auto n = static_cast<std::size_t>(cfg.n);
  cb.u.resize(j_n * n);
  for (std::size_t j = 0; j < j_n; ++j) sample_row(p_u, cfg.n, rng, cb.u.data() + j * n);

  cb.v2.resize(j_n * cb.mt2 * n);
  for (std::size_t j = 0; j < j_n; ++j) {
    const Symbol* parent[] = {cb.u_row(j)};
    for (std::size_t t = 0; t < cb.mt2; ++t) {
      sample_cond_row(v2_given_u, parent, cfg.n, rng, cb.v2.data() + (j * cb.mt2 + t) * n);
    }
  }
  cb.v3.resize(j_n * cb.mt3 * n);
  for (std::size_t j = 0; j < j_n; ++j) {
    const Symbol* parent[] = {cb.u_row(j)};
    for (std::size_t t = 0; t < cb.mt3; ++t) {
      sample_cond_row(v3_given_u, parent, cfg.n, rng, cb.v3.data() + (j * cb.mt3 + t) * n);
    }
  }

  cb.bin2 = make_bins(cb.mt2, cb.ms2, rng);
  cb.bin3 = make_bins(cb.mt3, cb.ms3, rng);
  std::vector<std::vector<std::int32_t>> bin2_members(cb.ms2), bin3_members(cb.ms3);
  for (std::size_t t = 0; t < cb.mt2; ++t) bin2_members[static_cast<std::size_t>(cb.bin2[t])].push_back(static_cast<std::int32_t>(t));
  for (std::size_t t = 0; t < cb.mt3; ++t) bin3_members[static_cast<std::size_t>(cb.bin3[t])].push_back(static_cast<std::int32_t>(t));

  // Marton selection: uniform pick among the jointly typical satellite pairs
  // of each product bin; uniform fallback pair + failure flag when none.
  cb.chosen.resize(j_n * cb.ms2 * cb.ms3);
  std::vector<std::int32_t> ctx(n);
  std::vector<std::int32_t> scratch(refs.enc.cells());
  std::vector<std::pair<std::int32_t, std::int32_t>> typical;
  for (std::size_t j = 0; j < j_n; ++j) {
    for (std::size_t s2 = 0; s2 < cb.ms2; ++s2) {
      for (std::size_t s3 = 0; s3 < cb.ms3; ++s3) {
        typical.clear();
        for (std::int32_t t2 : bin2_members[s2]) {
          const Symbol* prefix[] = {cb.u_row(j), cb.v2_row(j, static_cast<std::size_t>(t2))};
          refs.enc.bind(prefix, ctx.data());
          for (std::int32_t t3 : bin3_members[s3]) {
            if (refs.enc.test_bound(ctx.data(), cb.v3_row(j, static_cast<std::size_t>(t3)), scratch.data())) {
              typical.emplace_back(t2, t3);
            }
          }
        }
        NegCodebook::Chosen ch;
        if (!typical.empty()) {
          auto pick = rng.uniform_index(typical.size());
          ch.t2 = typical[pick].first;
          ch.t3 = typical[pick].second;
        } else {
          auto total = bin2_members[s2].size() * bin3_members[s3].size();
          auto pick = rng.uniform_index(total);
          ch.t2 = bin2_members[s2][pick / bin3_members[s3].size()];
          ch.t3 = bin3_members[s3][pick % bin3_members[s3].size()];
          ch.fail = true;
        }
        cb.chosen[cb.bin_index(j, s2, s3)] = ch;
      }
    }
  }

  cb.x.resize(j_n * cb.ms2 * cb.ms3 * cb.ms1 * n);
  for (std::size_t j = 0; j < j_n; ++j) {
    for (std::size_t s2 = 0; s2 < cb.ms2; ++s2) {
      for (std::size_t s3 = 0; s3 < cb.ms3; ++s3) {
        const auto& ch = cb.chosen[cb.bin_index(j, s2, s3)];
        const Symbol* parents[] = {cb.u_row(j),
                                   cb.v2_row(j, static_cast<std::size_t>(ch.t2)),
                                   cb.v3_row(j, static_cast<std::size_t>(ch.t3))};
        for (std::size_t s1 = 0; s1 < cb.ms1; ++s1) {
          sample_cond_row(x_given_uvv, parents, cfg.n, rng,
                          cb.x.data() + (cb.bin_index(j, s2, s3) * cb.ms1 + s1) * n);
        }
      }
    }
  }
  return cb;
}

std::pair<const Symbol*, bool> encode(const NegCodebook& cb, const Msg& msg) {
  if (msg.m0 >= cb.m0 || msg.s0 >= cb.ms0 || msg.s2 >= cb.ms2 || msg.s3 >= cb.ms3 || msg.s1 >= cb.ms1) {
    throw std::out_of_range("encode: message index out of range");
  }
  std::size_t j = msg.m0 * cb.ms0 + msg.s0;
  return {cb.x_row(j, msg.s2, msg.s3, msg.s1), cb.chosen[cb.bin_index(j, msg.s2, msg.s3)].fail};
}

void transmit(const CondPmf& channel, const Symbol* x, int n, Rng& rng,
              std::vector<Symbol>& y1, std::vector<Symbol>& y2, std::vector<Symbol>& y3) {
  auto d1 = static_cast<std::size_t>(channel.out_dims[0]);
  auto d2 = static_cast<std::size_t>(channel.out_dims[1]);
  auto d3 = static_cast<std::size_t>(channel.out_dims[2]);
  y1.resize(static_cast<std::size_t>(n));
  y2.resize(static_cast<std::size_t>(n));
  y3.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto out = static_cast<std::size_t>(rng.sample(channel.row(x[i])));
    y3[i] = static_cast<Symbol>(out % d3);
    y2[i] = static_cast<Symbol>((out / d3) % d2);
    y1[i] = static_cast<Symbol>(out / (d3 * d2));
    (void)d1;
  }
}

namespace {

Verdict classify(std::size_t count, std::span<const std::size_t> first,
                 std::span<const std::size_t> truth) {
  Verdict v;
  if (count == 0) {
    v.kind = Verdict::Kind::kNoCandidate;
  } else if (count > 1) {
    v.kind = Verdict::Kind::kAmbiguous;
  } else {
    v.decoded.assign(first.begin(), first.end());
    bool match = first.size() == truth.size();
    for (std::size_t i = 0; match && i < first.size(); ++i) match = first[i] == truth[i];
    v.kind = match ? Verdict::Kind::kCorrect : Verdict::Kind::kWrong;
  }
  return v;
}

// Splits the cloud index into the reported (m0, s0) pair.
std::array<std::size_t, 2> split_j(const NegCodebook& cb, std::size_t j) {
  return {j / cb.ms0, j % cb.ms0};
}

}  // namespace

Verdict decode_y1(const NegCodebook& cb, const DecoderRefs& refs,
                  const std::vector<Symbol>& y1, const Msg& truth) {
  std::vector<std::int32_t> mscr(refs.y1_marg.cells());
  const Symbol* yp = y1.data();
  if (!refs.y1_marg.test(&yp, mscr.data())) return {Verdict::Kind::kNoCandidate, {}};

  std::vector<std::int32_t> ctx(static_cast<std::size_t>(cb.n));
  std::vector<std::int32_t> scratch(refs.y1.cells());
  std::size_t count = 0;
  std::array<std::size_t, 5> first{};
  for (std::size_t j = 0; j < cb.j_count(); ++j) {
    for (std::size_t s2 = 0; s2 < cb.ms2; ++s2) {
      for (std::size_t s3 = 0; s3 < cb.ms3; ++s3) {
        const auto& ch = cb.chosen[cb.bin_index(j, s2, s3)];
        const Symbol* prefix[] = {cb.u_row(j),
                                  cb.v2_row(j, static_cast<std::size_t>(ch.t2)),
                                  cb.v3_row(j, static_cast<std::size_t>(ch.t3)),
                                  y1.data()};
        refs.y1.bind(prefix, ctx.data());
        for (std::size_t s1 = 0; s1 < cb.ms1; ++s1) {
          if (refs.y1.test_bound(ctx.data(), cb.x_row(j, s2, s3, s1), scratch.data())) {
            if (++count >= 2) return {Verdict::Kind::kAmbiguous, {}};
            auto [m0, s0] = split_j(cb, j);
            first = {m0, s0, s2, s3, s1};
          }
        }
      }
    }
  }
  std::array<std::size_t, 5> want = {truth.m0, truth.s0, truth.s2, truth.s3, truth.s1};
  return classify(count, first, want);
}

namespace {

struct SatView {
  const TypTest* scan;   // (U,Yk,Vk)
  const TypTest* cloud;  // (Yk,U)
  const TypTest* marg;   // (Yk)
  std::size_t mt;
  const Symbol* (NegCodebook::*row)(std::size_t, std::size_t) const;
};

SatView sat_view(const NegCodebook& cb, const DecoderRefs& refs, int sat) {
  if (sat == 2) return {&refs.y2_scan, &refs.y2_cloud, &refs.y2_marg, cb.mt2, &NegCodebook::v2_row};
  if (sat == 3) return {&refs.y3_scan, &refs.y3_cloud, &refs.y3_marg, cb.mt3, &NegCodebook::v3_row};
  throw std::invalid_argument("satellite receiver must be 2 or 3");
}

std::size_t true_t(const NegCodebook& cb, int sat, const Msg& truth) {
  const auto& ch = cb.chosen[cb.bin_index(truth.m0 * cb.ms0 + truth.s0, truth.s2, truth.s3)];
  return static_cast<std::size_t>(sat == 2 ? ch.t2 : ch.t3);
}

}  // namespace

Verdict decode_yk_nonunique(const NegCodebook& cb, const DecoderRefs& refs,
                            const std::vector<Symbol>& yk, int sat, const Msg& truth) {
  SatView v = sat_view(cb, refs, sat);
  std::vector<std::int32_t> mscr(v.marg->cells());
  const Symbol* yp = yk.data();
  if (!v.marg->test(&yp, mscr.data())) return {Verdict::Kind::kNoCandidate, {}};

  std::vector<std::int32_t> ctx(static_cast<std::size_t>(cb.n));
  std::vector<std::int32_t> scratch(v.scan->cells());
  std::size_t count = 0, first_j = 0;
  for (std::size_t j = 0; j < cb.j_count(); ++j) {
    const Symbol* prefix[] = {cb.u_row(j), yk.data()};
    v.scan->bind(prefix, ctx.data());
    for (std::size_t t = 0; t < v.mt; ++t) {
      if (v.scan->test_bound(ctx.data(), (cb.*v.row)(j, t), scratch.data())) {
        if (++count >= 2) return {Verdict::Kind::kAmbiguous, {}};
        first_j = j;
        break;  // one typical satellite row suffices for candidacy
      }
    }
  }
  auto first = split_j(cb, first_j);
  std::array<std::size_t, 2> want = {truth.m0, truth.s0};
  return classify(count, first, want);
}

Verdict decode_yk_component(const NegCodebook& cb, const DecoderRefs& refs,
                            const std::vector<Symbol>& yk, int sat, int k,
                            const Msg& truth) {
  SatView v = sat_view(cb, refs, sat);
  std::vector<std::int32_t> mscr(v.marg->cells());
  const Symbol* yp = yk.data();
  if (!v.marg->test(&yp, mscr.data())) return {Verdict::Kind::kNoCandidate, {}};

  std::vector<std::int32_t> ctx(static_cast<std::size_t>(cb.n));
  if (k == 1) {
    // Unique (m0,s0) via the cloud row alone.
    std::vector<std::int32_t> scratch(v.cloud->cells());
    const Symbol* prefix[] = {yk.data()};
    v.cloud->bind(prefix, ctx.data());
    std::size_t count = 0, first_j = 0;
    for (std::size_t j = 0; j < cb.j_count(); ++j) {
      if (v.cloud->test_bound(ctx.data(), cb.u_row(j), scratch.data())) {
        if (++count >= 2) return {Verdict::Kind::kAmbiguous, {}};
        first_j = j;
      }
    }
    auto first = split_j(cb, first_j);
    std::array<std::size_t, 2> want = {truth.m0, truth.s0};
    return classify(count, first, want);
  }
  if (k != 2) throw std::invalid_argument("component decoder k must be 1 or 2");

  // Unique (m0,s0,t) via cloud + satellite rows.
  std::vector<std::int32_t> scratch(v.scan->cells());
  std::size_t count = 0;
  std::array<std::size_t, 3> first{};
  for (std::size_t j = 0; j < cb.j_count(); ++j) {
    const Symbol* prefix[] = {cb.u_row(j), yk.data()};
    v.scan->bind(prefix, ctx.data());
    for (std::size_t t = 0; t < v.mt; ++t) {
      if (v.scan->test_bound(ctx.data(), (cb.*v.row)(j, t), scratch.data())) {
        if (++count >= 2) return {Verdict::Kind::kAmbiguous, {}};
        auto [m0, s0] = split_j(cb, j);
        first = {m0, s0, t};
      }
    }
  }
  std::array<std::size_t, 3> want = {truth.m0, truth.s0, true_t(cb, sat, truth)};
  return classify(count, first, want);
}

Verdict auxiliary_from_components(const Verdict& comp1, const Verdict& comp2,
                                  std::size_t true_j, const NegCodebook& cb) {
  bool d1 = comp1.decided(), d2 = comp2.decided();
  if (!d1 && !d2) return {Verdict::Kind::kNoCandidate, {}};
  std::size_t j1 = 0, j2 = 0;
  if (d1) j1 = comp1.decoded[0] * cb.ms0 + comp1.decoded[1];
  if (d2) j2 = comp2.decoded[0] * cb.ms0 + comp2.decoded[1];
  if (d1 && d2 && j1 != j2) return {Verdict::Kind::kAmbiguous, {}};
  std::size_t j = d1 ? j1 : j2;
  Verdict v;
  v.decoded = {j / cb.ms0, j % cb.ms0};
  v.kind = (j == true_j) ? Verdict::Kind::kCorrect : Verdict::Kind::kWrong;
  return v;
}

Verdict decode_yk_auxiliary(const NegCodebook& cb, const DecoderRefs& refs,
                            const std::vector<Symbol>& yk, int sat, const Msg& truth) {
  Verdict c1 = decode_yk_component(cb, refs, yk, sat, 1, truth);
  Verdict c2 = decode_yk_component(cb, refs, yk, sat, 2, truth);
  return auxiliary_from_components(c1, c2, truth.m0 * cb.ms0 + truth.s0, cb);
}

namespace {

// Independent restatement of the auxiliary rule used to cross-check the
// combined verdict every trial.
bool aux_rule_consistent(const Verdict& c1, const Verdict& c2, const Verdict& aux) {
  bool d1 = c1.decided(), d2 = c2.decided();
  bool mismatch = false;
  if (d1 && d2) {
    mismatch = c1.decoded[0] != c2.decoded[0] || c1.decoded[1] != c2.decoded[1];
  }
  bool should_err_without_output = (!d1 && !d2) || mismatch;
  if (should_err_without_output) return !aux.decided();
  // Otherwise the auxiliary must output the (m0,s0) of a non-erring component.
  if (!aux.decided()) return false;
  const Verdict& src = d1 ? c1 : c2;
  return aux.decoded == src.decoded;
}

}  // namespace

TrialStats run_trials(const NegSchemeConfig& cfg, long trials, long fresh_codebook_every) {
  if (trials < 1) throw std::invalid_argument("run_trials: trials must be >= 1");
  if (fresh_codebook_every < 1) fresh_codebook_every = trials;

  DecoderRefs refs = make_decoder_refs(cfg);
  TrialStats st;
  st.trials = trials;

  NegCodebook cb;
  std::vector<Symbol> y1, y2, y3;
  std::uint64_t cb_counter = 0;
  for (long trial = 0; trial < trials; ++trial) {
    if (trial % fresh_codebook_every == 0) {
      Rng cb_rng(derive_stream_seed(cfg.seed, stream_index(StreamTag::kCodebook, cb_counter++)));
      cb = generate_codebook(cfg, refs, cb_rng);
    }
    Rng rng(derive_stream_seed(cfg.seed, stream_index(StreamTag::kTrial, static_cast<std::uint64_t>(trial))));
    Msg msg;
    msg.m0 = rng.uniform_index(cb.m0);
    msg.s0 = rng.uniform_index(cb.ms0);
    msg.s2 = rng.uniform_index(cb.ms2);
    msg.s3 = rng.uniform_index(cb.ms3);
    msg.s1 = rng.uniform_index(cb.ms1);

    auto [xrow, fail] = encode(cb, msg);
    if (fail) ++st.enc_fail;
    transmit(cfg.channel, xrow, cfg.n, rng, y1, y2, y3);

    st.decoders[kDY1].add(decode_y1(cb, refs, y1, msg).kind);

    for (int sat : {2, 3}) {
      const auto& yk = sat == 2 ? y2 : y3;
      Verdict nu = decode_yk_nonunique(cb, refs, yk, sat, msg);
      Verdict c1 = decode_yk_component(cb, refs, yk, sat, 1, msg);
      Verdict c2 = decode_yk_component(cb, refs, yk, sat, 2, msg);
      Verdict aux = auxiliary_from_components(c1, c2, msg.m0 * cb.ms0 + msg.s0, cb);

      int base = sat == 2 ? kDY2Nonunique : kDY3Nonunique;
      st.decoders[base].add(nu.kind);
      st.decoders[base + 1].add(c1.kind);
      st.decoders[base + 2].add(c2.kind);
      st.decoders[base + 3].add(aux.kind);

      if (c2.kind == Verdict::Kind::kCorrect && nu.kind != Verdict::Kind::kCorrect) {
        ++st.viol_comp2_implies_nonunique;
      }
      if (c1.kind == Verdict::Kind::kCorrect &&
          (nu.kind == Verdict::Kind::kWrong || nu.kind == Verdict::Kind::kAmbiguous)) {
        ++st.viol_comp1_implies_nonunique;
      }
      if (!aux_rule_consistent(c1, c2, aux)) ++st.viol_aux_rule;
    }
  }
  return st;
}

BinStats bin_statistics(const NegSchemeConfig& cfg, long draws, double delta) {
  NegSchemeConfig c = cfg;
  std::size_t ms2 = codebook_size(c.n, c.rates.s2);
  std::size_t ms3 = codebook_size(c.n, c.rates.s3);
  std::size_t mt2 = codebook_size(c.n, c.rates.t2);
  std::size_t mt3 = codebook_size(c.n, c.rates.t3);
  if (ms2 != 1 || ms3 != 1) throw std::invalid_argument("bin_statistics: requires M(S2) = M(S3) = 1 (single product bin)");
  if (mt2 < 3) throw std::invalid_argument("bin_statistics: requires M(T2) >= 3");
  if (draws < 1) throw std::invalid_argument("bin_statistics: draws must be >= 1");

  const JointPmf p_u = marg(c.source, {0});
  const CondPmf v2_given_u = condition(marg(c.source, {0, 1}), iv({0}));
  const CondPmf v3_given_u = condition(marg(c.source, {0, 2}), iv({0}));
  TypTest enc(marg(c.source, {0, 1, 2}), c.n, c.eps);

  double i_v2v3_gu = conditional_mutual_information(c.source, iv({1}), iv({2}), iv({0}));

  BinStats bs;
  bs.N = static_cast<long>(mt3);
  bs.n = c.n;
  bs.delta = delta;
  bs.draws = draws;
  bs.p_l = std::exp2(-c.n * (i_v2v3_gu + delta));
  bs.p_u = std::exp2(-c.n * (i_v2v3_gu - delta));

  auto n = static_cast<std::size_t>(c.n);
  std::vector<Symbol> u(n), v2(mt2 * n), v3(mt3 * n);
  std::vector<std::int32_t> ctx(n), scratch(enc.cells());
  for (long d = 0; d < draws; ++d) {
    Rng rng(derive_stream_seed(c.seed, stream_index(StreamTag::kAux, static_cast<std::uint64_t>(d))));
    sample_row(p_u, c.n, rng, u.data());
    const Symbol* parent[] = {u.data()};
    for (std::size_t t = 0; t < mt2; ++t) sample_cond_row(v2_given_u, parent, c.n, rng, v2.data() + t * n);
    for (std::size_t t = 0; t < mt3; ++t) sample_cond_row(v3_given_u, parent, c.n, rng, v3.data() + t * n);

    long n1 = 0, n2 = 0, n3 = 0;
    for (std::size_t t2 = 0; t2 < mt2; ++t2) {
      const Symbol* prefix[] = {u.data(), v2.data() + t2 * n};
      enc.bind(prefix, ctx.data());
      long row_count = 0;
      for (std::size_t t3 = 0; t3 < mt3; ++t3) {
        if (enc.test_bound(ctx.data(), v3.data() + t3 * n, scratch.data())) ++row_count;
      }
      if (t2 != 1) n1 += row_count;  // all rows except the second (1-based t2 = 2)
      if (t2 == 1) n2 = row_count;
      if (t2 == 2) n3 = row_count;
    }
    bs.n1.push_back(n1);
    bs.n2.push_back(n2);
    bs.n3.push_back(n3);
  }
  return bs;
}

ConcentrationReport concentration_check(const BinStats& stats) {
  if (stats.draws < 100) throw std::invalid_argument("concentration_check: needs >= 100 codebook draws");
  ConcentrationReport r;
  r.alpha1 = 2.0 - std::exp(0.5);
  r.beta1 = std::exp(0.5);
  r.alpha2 = 0.5 - std::exp(-1.0);
  r.beta2 = 1.0;

  double npl = stats.N * stats.p_l;
  long tail2 = 0, tail3 = 0;
  for (std::size_t i = 0; i < stats.n2.size(); ++i) {
    if (stats.n2[i] > 2.0 * stats.N * stats.p_u) ++tail2;
    if (stats.n3[i] < npl / 2.0) ++tail3;
  }
  auto draws = static_cast<double>(stats.draws);
  r.emp_n2_tail = tail2 / draws;
  r.emp_n3_tail = tail3 / draws;
  r.bound_n2 = r.beta1 * std::exp(-r.alpha1 * npl);
  r.bound_n3 = r.beta2 * std::exp(-r.alpha2 * npl);
  r.slack_n2 = 3.0 * std::sqrt(r.emp_n2_tail * (1.0 - r.emp_n2_tail) / draws);
  r.slack_n3 = 3.0 * std::sqrt(r.emp_n3_tail * (1.0 - r.emp_n3_tail) / draws);
  r.pass_n2 = r.emp_n2_tail <= r.bound_n2 + r.slack_n2;
  r.pass_n3 = r.emp_n3_tail <= r.bound_n3 + r.slack_n3;
  r.pass = r.pass_n2 && r.pass_n3;
  return r;
}

}  // namespace ratesim
