#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ratesim/bc.hpp"
#include "ratesim/suites.hpp"

using namespace ratesim;

namespace {

// U degenerate, V2/V3 definitional bits, X = (V2,V3), Y1 = X noiselessly,
// Y2 = V2, Y3 = V3.
NegSchemeConfig split_bits_config(const RateTuple& rates, int n, double eps,
                                  std::uint64_t seed) {
  NegSchemeConfig cfg;
  cfg.n = n;
  cfg.eps = eps;
  cfg.rates = rates;
  cfg.seed = seed;
  std::vector<double> src(16, 0.0);
  for (int v2 = 0; v2 < 2; ++v2)
    for (int v3 = 0; v3 < 2; ++v3) src[static_cast<std::size_t>((v2 * 2 + v3) * 4 + v2 * 2 + v3)] = 0.25;
  cfg.source = JointPmf({1, 2, 2, 4}, src);
  std::vector<double> ch(4 * 16, 0.0);
  for (int x = 0; x < 4; ++x) ch[static_cast<std::size_t>(x * 16 + (x * 2 + (x >> 1)) * 2 + (x & 1))] = 1.0;
  cfg.channel = make_cond_pmf({4}, {4, 2, 2}, ch);
  return cfg;
}

}  // namespace

TEST_CASE("codebook extent formula") {
  CHECK(codebook_size(16, 0.0) == 1);
  CHECK(codebook_size(16, 0.25) == 16);
  CHECK(codebook_size(16, 0.75) == 4096);
  CHECK(codebook_size(8, -1.0) == 1);  // clamped at 1
  CHECK(codebook_size(10, 0.05) == 1); // 2^0.5 rounds to 1
  CHECK(codebook_size(10, 0.1) == 2);
}

TEST_CASE("codebook generation is deterministic in the seed") {
  RateTuple r;
  r.r0 = 0.25;
  r.s2 = r.s3 = 0.125;
  r.t2 = r.t3 = 0.25;
  NegSchemeConfig cfg = split_bits_config(r, 8, 0.5, 42);
  DecoderRefs refs = make_decoder_refs(cfg);
  Rng a(1), b(1), c(2);
  NegCodebook cb1 = generate_codebook(cfg, refs, a);
  NegCodebook cb2 = generate_codebook(cfg, refs, b);
  NegCodebook cb3 = generate_codebook(cfg, refs, c);
  CHECK(cb1.u == cb2.u);
  CHECK(cb1.v2 == cb2.v2);
  CHECK(cb1.v3 == cb2.v3);
  CHECK(cb1.x == cb2.x);
  CHECK(cb1.bin2 == cb2.bin2);
  bool differs = cb1.v2 != cb3.v2 || cb1.v3 != cb3.v3 || cb1.x != cb3.x;
  CHECK(differs);
}

TEST_CASE("bin maps are balanced surjections") {
  RateTuple r;
  r.s2 = 0.125;
  r.t2 = 0.375;  // 2 messages in 8 bins-slots: each s2 gets mt2/ms2 = 4 slots
  NegSchemeConfig cfg = split_bits_config(r, 8, 0.75, 3);
  DecoderRefs refs = make_decoder_refs(cfg);
  Rng rng(9);
  NegCodebook cb = generate_codebook(cfg, refs, rng);
  REQUIRE(cb.bin2.size() == 8);
  std::vector<int> count(cb.ms2, 0);
  for (int s : cb.bin2) {
    REQUIRE(s >= 0);
    REQUIRE(static_cast<std::size_t>(s) < cb.ms2);
    ++count[static_cast<std::size_t>(s)];
  }
  for (int c : count) CHECK(c == 4);
}

TEST_CASE("singleton bins force chosen = (t2,t3) = (0,0)") {
  RateTuple r;  // all rates zero: every extent 1
  NegSchemeConfig cfg = split_bits_config(r, 8, 0.75, 3);
  DecoderRefs refs = make_decoder_refs(cfg);
  Rng rng(4);
  NegCodebook cb = generate_codebook(cfg, refs, rng);
  REQUIRE(cb.chosen.size() == 1);
  CHECK(cb.chosen[0].t2 == 0);
  CHECK(cb.chosen[0].t3 == 0);
}

TEST_CASE("encode looks up the row for the message split") {
  RateTuple r;
  r.r0 = 0.125;
  r.s0 = 0.125;
  NegSchemeConfig cfg = split_bits_config(r, 8, 0.75, 3);
  DecoderRefs refs = make_decoder_refs(cfg);
  Rng rng(4);
  NegCodebook cb = generate_codebook(cfg, refs, rng);
  REQUIRE(cb.m0 == 2);
  REQUIRE(cb.ms0 == 2);
  Msg msg{1, 1, 0, 0, 0};
  auto [row, fail] = encode(cb, msg);
  CHECK(row == cb.x_row(3, 0, 0, 0));
  CHECK_FALSE(fail);
  CHECK_THROWS_AS(encode(cb, Msg{2, 0, 0, 0, 0}), std::out_of_range);
}

TEST_CASE("noiseless transmission reproduces the deterministic channel") {
  NegSchemeConfig cfg = split_bits_config({}, 8, 0.75, 3);
  std::vector<Symbol> x = {0, 1, 2, 3, 3, 2, 1, 0};
  std::vector<Symbol> y1, y2, y3;
  Rng rng(7);
  transmit(cfg.channel, x.data(), 8, rng, y1, y2, y3);
  for (int i = 0; i < 8; ++i) {
    int xi = x[static_cast<std::size_t>(i)];
    CHECK(y1[static_cast<std::size_t>(i)] == xi);
    CHECK(y2[static_cast<std::size_t>(i)] == (xi >> 1));
    CHECK(y3[static_cast<std::size_t>(i)] == (xi & 1));
  }
}

TEST_CASE("single-message noiseless decode is Correct everywhere") {
  NegSchemeConfig cfg = split_bits_config({}, 16, 0.5, 21);
  DecoderRefs refs = make_decoder_refs(cfg);
  Rng rng(21);
  NegCodebook cb = generate_codebook(cfg, refs, rng);
  Msg msg{};
  auto [xrow, fail] = encode(cb, msg);
  CHECK_FALSE(fail);
  std::vector<Symbol> y1, y2, y3;
  // retry transmissions until the private output is marginally typical
  Verdict v1;
  for (int attempt = 0; attempt < 50; ++attempt) {
    transmit(cfg.channel, xrow, cfg.n, rng, y1, y2, y3);
    v1 = decode_y1(cb, refs, y1, msg);
    if (v1.kind == Verdict::Kind::kCorrect) break;
  }
  CHECK(v1.kind == Verdict::Kind::kCorrect);
  REQUIRE(v1.decoded.size() == 5);
  CHECK(v1.decoded[0] == 0);
  CHECK(decode_yk_nonunique(cb, refs, y2, 2, msg).kind == Verdict::Kind::kCorrect);
  CHECK(decode_yk_component(cb, refs, y2, 2, 2, msg).kind == Verdict::Kind::kCorrect);
  CHECK(decode_yk_auxiliary(cb, refs, y2, 2, msg).kind == Verdict::Kind::kCorrect);
}

TEST_CASE("auxiliary combination rule") {
  NegSchemeConfig cfg = split_bits_config({}, 8, 0.75, 3);
  DecoderRefs refs = make_decoder_refs(cfg);
  Rng rng(4);
  NegCodebook cb = generate_codebook(cfg, refs, rng);
  auto correct = [] {
    Verdict v;
    v.kind = Verdict::Kind::kCorrect;
    v.decoded = {0};
    return v;
  };
  auto wrong = [&](std::size_t j) {
    Verdict v;
    v.kind = Verdict::Kind::kWrong;
    v.decoded = {j};
    return v;
  };
  Verdict none;  // kNoCandidate

  CHECK(auxiliary_from_components(none, none, 0, cb).kind == Verdict::Kind::kNoCandidate);
  CHECK(auxiliary_from_components(correct(), none, 0, cb).kind == Verdict::Kind::kCorrect);
  CHECK(auxiliary_from_components(none, wrong(1), 0, cb).kind == Verdict::Kind::kWrong);
  CHECK(auxiliary_from_components(correct(), correct(), 0, cb).kind == Verdict::Kind::kCorrect);
  CHECK(auxiliary_from_components(wrong(1), wrong(1), 0, cb).kind == Verdict::Kind::kWrong);
  CHECK(auxiliary_from_components(wrong(1), wrong(2), 0, cb).kind == Verdict::Kind::kAmbiguous);
  CHECK(auxiliary_from_components(correct(), wrong(1), 0, cb).kind == Verdict::Kind::kAmbiguous);
}

TEST_CASE("trial driver counts and determinism") {
  RateTuple r;
  r.s2 = r.t2 = 0.125;
  r.s3 = r.t3 = 0.125;
  NegSchemeConfig cfg = split_bits_config(r, 8, 0.75, 77);
  CHECK_THROWS_AS(run_trials(cfg, 0, 1), std::invalid_argument);

  TrialStats one = run_trials(cfg, 1, 1);
  CHECK(one.trials == 1);
  for (int d = 0; d < kNumDecoders; ++d) CHECK(one.decoders[static_cast<std::size_t>(d)].total() == 1);

  TrialStats a = run_trials(cfg, 50, 10);
  TrialStats b = run_trials(cfg, 50, 10);
  for (int d = 0; d < kNumDecoders; ++d) {
    const auto& ca = a.decoders[static_cast<std::size_t>(d)];
    const auto& cb2 = b.decoders[static_cast<std::size_t>(d)];
    CHECK(ca.correct == cb2.correct);
    CHECK(ca.wrong == cb2.wrong);
    CHECK(ca.no_candidate == cb2.no_candidate);
    CHECK(ca.ambiguous == cb2.ambiguous);
    CHECK(ca.total() == 50);
  }
  CHECK(a.viol_comp1_implies_nonunique == 0);
  CHECK(a.viol_comp2_implies_nonunique == 0);
  CHECK(a.viol_aux_rule == 0);
}

TEST_CASE("bin statistics preconditions and bracket") {
  NegSchemeConfig cfg = bin_stats_config(0.375, 0.375, 8, 0.75, 5);
  BinStats st = bin_statistics(cfg, 10, 0.1);
  CHECK(st.draws == 10);
  CHECK(st.N == 8);
  CHECK(st.n1.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(st.n2[i] >= 0);
    CHECK(st.n2[i] <= st.N);
    CHECK(st.n1[i] <= (8 - 1) * st.N);  // mt2 = 2^{8*0.375} = 8 rows, minus the focal one
  }
  // V2 and V3 independent here, so the pair information term is zero and the
  // bracket is 2^{-n*delta} both sides around 1.
  CHECK(st.p_l == doctest::Approx(std::exp2(-8 * 0.1)).epsilon(1e-12));
  CHECK(st.p_u == doctest::Approx(std::exp2(8 * 0.1)).epsilon(1e-12));

  NegSchemeConfig bad = bin_stats_config(0.0, 0.375, 8, 0.75, 5);  // mt2 = 1 < 3
  CHECK_THROWS_AS(bin_statistics(bad, 5, 0.1), std::invalid_argument);
}

TEST_CASE("concentration constants and draw floor") {
  NegSchemeConfig cfg = bin_stats_config(0.375, 0.375, 8, 0.75, 5);
  BinStats small = bin_statistics(cfg, 50, 0.1);
  CHECK_THROWS_AS(concentration_check(small), std::invalid_argument);

  BinStats st = bin_statistics(cfg, 120, 0.1);
  ConcentrationReport rep = concentration_check(st);
  CHECK(rep.alpha1 == doctest::Approx(2.0 - std::exp(0.5)).epsilon(1e-15));
  CHECK(rep.beta1 == doctest::Approx(std::exp(0.5)).epsilon(1e-15));
  CHECK(rep.alpha2 == doctest::Approx(0.5 - std::exp(-1.0)).epsilon(1e-15));
  CHECK(rep.beta2 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rep.pass == (rep.pass_n2 && rep.pass_n3));
}
