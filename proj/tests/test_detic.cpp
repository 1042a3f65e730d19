#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "ratesim/detic.hpp"
#include "ratesim/suites.hpp"

using namespace ratesim;

namespace {

// Entropy of a subset of dimensions of a joint, in bits.
double subset_entropy(const JointPmf& j, std::vector<int> keep) {
  return entropy_of(j, keep);
}

}  // namespace

TEST_CASE("xor interference spec validates") {
  ICConfig cfg = xor_ic_config(0.5, 0.25, 8, 0.75, 1);
  ICValidation v = validate_spec(cfg.spec);
  CAPTURE(v.message);
  CHECK(v.ok);
}

TEST_CASE("constant combiner is rejected with witnesses") {
  ICConfig cfg = xor_ic_config(0.5, 0.25, 8, 0.75, 1);
  DetICSpec spec = cfg.spec;
  // h[2] over (X21, X11) both binary: make it constant in the first argument.
  spec.h[2] = {0, 1, 0, 1};
  ICValidation v = validate_spec(spec);
  CHECK_FALSE(v.ok);
  CHECK(v.message.find("h[2]") != std::string::npos);
  CHECK(v.message.find("injective") != std::string::npos);
}

TEST_CASE("modular-sum spec over a ternary alphabet validates") {
  DetICSpec spec;
  spec.q_dim = 1;
  for (int l = 0; l < 3; ++l) {
    spec.x_dim[static_cast<std::size_t>(l)] = 3;
    for (int k = 0; k < 3; ++k) {
      spec.comp_dim[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)] = 3;
      spec.g[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)] = {0, 1, 2};
    }
  }
  for (int k = 0; k < 3; ++k) {
    spec.s_dim[static_cast<std::size_t>(k)] = 3;
    spec.y_dim[static_cast<std::size_t>(k)] = 3;
    std::vector<int> add(9);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) add[static_cast<std::size_t>(a * 3 + b)] = (a + b) % 3;
    spec.h[static_cast<std::size_t>(k)] = add;
    spec.f[static_cast<std::size_t>(k)] = add;
  }
  ICValidation v = validate_spec(spec);
  CAPTURE(v.message);
  CHECK(v.ok);
}

TEST_CASE("transmission applies the xor relations positionwise") {
  ICConfig cfg = xor_ic_config(0.5, 0.25, 8, 0.75, 1);
  std::vector<Symbol> x1 = {0, 1, 0, 1}, x2 = {0, 0, 1, 1}, x3 = {0, 0, 0, 0};
  std::vector<Symbol> y1, y2, y3;
  ic_transmit(cfg.spec, x1.data(), x2.data(), x3.data(), 4, y1, y2, y3);
  for (int i = 0; i < 4; ++i) {
    std::size_t ui = static_cast<std::size_t>(i);
    CHECK(y1[ui] == (x1[ui] ^ x2[ui]));
  }
}

TEST_CASE("extended joint carries one bit of interference given Q") {
  ICConfig cfg = xor_ic_config(0.5, 0.25, 8, 0.75, 1);
  JointPmf ext = ic_extended_joint(cfg.spec, cfg.q, cfg.x_given_q);
  REQUIRE(ext.rank() == 6);
  double h_s1_q = subset_entropy(ext, {4, 0}) - subset_entropy(ext, {0});
  CHECK(h_s1_q == doctest::Approx(1.0).epsilon(1e-12));
  // S1 = X2 here (X3 degenerate), so Y1 = X1 xor S1 is a uniform bit too.
  double h_y1 = subset_entropy(ext, {5});
  CHECK(h_y1 == doctest::Approx(1.0).epsilon(1e-12));
  // Direct enumeration cross-check of the S1 marginal.
  std::vector<int> keep = {4};
  JointPmf s1 = marginalize(ext, keep);
  CHECK(s1[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s1[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("bound exponents for the xor configuration") {
  // With R2 = 0.25, R3 = 0: every min-term resolves to 0.25 + (0 or cap) and
  // every information term is 1 bit, so each exponent equals R1 - 0.75.
  for (double r1 : {0.5, 0.7, 0.75, 0.9}) {
    ICConfig cfg = xor_ic_config(r1, 0.25, 8, 0.75, 1);
    ICBoundReport rep = ic_bound_exponents(cfg.spec, cfg.q, cfg.x_given_q, cfg.rates);
    CHECK(rep.single2 == doctest::Approx(r1 - 0.75).epsilon(1e-12));
    CHECK(rep.pair == doctest::Approx(r1 - 0.75).epsilon(1e-12));
    CHECK(rep.pair_capped == doctest::Approx(r1 - 0.75).epsilon(1e-12));
    CHECK(rep.combined == doctest::Approx(r1 - 0.75).epsilon(1e-12));
    CHECK(rep.max_exponent() == doctest::Approx(r1 - 0.75).epsilon(1e-12));
  }
}

TEST_CASE("codebook generation is deterministic and respects extents") {
  ICConfig cfg = xor_ic_config(0.5, 0.25, 8, 0.75, 33);
  Rng a(5), b(5);
  ICCodebook cb1 = ic_generate_codebook(cfg, a);
  ICCodebook cb2 = ic_generate_codebook(cfg, b);
  CHECK(cb1.m[0] == 16);   // 2^{8*0.5}
  CHECK(cb1.m[1] == 4);    // 2^{8*0.25}
  CHECK(cb1.m[2] == 1);
  CHECK(cb1.x[0] == cb2.x[0]);
  CHECK(cb1.x[1] == cb2.x[1]);
  CHECK(cb1.c21 == cb2.c21);
  // identity component maps: c21 equals the X2 pool
  CHECK(cb1.c21 == cb1.x[1]);
}

TEST_CASE("auxiliary rule on interference decoders") {
  auto mk = [](Verdict::Kind k, std::vector<std::size_t> dec) {
    Verdict v;
    v.kind = k;
    v.decoded = std::move(dec);
    return v;
  };
  Verdict none = mk(Verdict::Kind::kNoCandidate, {});
  bool flag = false;

  // all erred
  std::array<Verdict, 4> comps = {none, none, none, none};
  CHECK(ic_auxiliary_from_components(comps, 0, &flag).kind == Verdict::Kind::kNoCandidate);
  CHECK_FALSE(flag);

  // agreement on m1 across subsets
  comps = {mk(Verdict::Kind::kCorrect, {3}), none,
           mk(Verdict::Kind::kCorrect, {3, 1}), none};
  Verdict v = ic_auxiliary_from_components(comps, 3, &flag);
  CHECK(v.kind == Verdict::Kind::kCorrect);
  CHECK_FALSE(flag);

  // disagreement on m1
  comps = {mk(Verdict::Kind::kWrong, {1}), mk(Verdict::Kind::kWrong, {2, 0}), none, none};
  CHECK(ic_auxiliary_from_components(comps, 0, &flag).kind == Verdict::Kind::kAmbiguous);

  // agree on m1, disagree on the m2 interference index: m1 stands, flag set
  flag = false;
  comps = {none, mk(Verdict::Kind::kWrong, {1, 0}), none,
           mk(Verdict::Kind::kWrong, {1, 1, 0})};
  v = ic_auxiliary_from_components(comps, 0, &flag);
  CHECK(v.kind == Verdict::Kind::kWrong);
  REQUIRE(!v.decoded.empty());
  CHECK(v.decoded[0] == 1);
  CHECK(flag);
}

TEST_CASE("trial driver totals, determinism, and laws") {
  ICConfig cfg = xor_ic_config(0.5, 0.25, 8, 0.75, 17);
  ICTrialStats one = ic_run_trials(cfg, 1, 1);
  CHECK(one.trials == 1);
  for (int d = 0; d < kICNumDecoders; ++d)
    CHECK(one.decoders[static_cast<std::size_t>(d)].total() == 1);

  ICTrialStats a = ic_run_trials(cfg, 60, 20);
  ICTrialStats b = ic_run_trials(cfg, 60, 20);
  for (int d = 0; d < kICNumDecoders; ++d) {
    CHECK(a.decoders[static_cast<std::size_t>(d)].correct ==
          b.decoders[static_cast<std::size_t>(d)].correct);
    CHECK(a.decoders[static_cast<std::size_t>(d)].total() == 60);
  }
  CHECK(a.viol_compboth_implies_nonunique == 0);
  CHECK(a.viol_aux_rule == 0);
}
