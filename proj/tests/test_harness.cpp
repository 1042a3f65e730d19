#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "ratesim/config.hpp"
#include "ratesim/csv.hpp"
#include "ratesim/rng.hpp"
#include "ratesim/suites.hpp"

using namespace ratesim;

namespace {

const char* kMinimalBc = R"({
  "kind": "neg-bc",
  "n": 8,
  "seed": 7,
  "rates": {"r0": 0.25},
  "source": {"dims": [2, 1, 1, 2], "probs": [0.5, 0, 0, 0.5]},
  "channel": {"in_dims": [2], "out_dims": [2, 1, 1],
              "rows": [1, 0, 0, 1]}
})";

}  // namespace

TEST_CASE("minimal scenario parses with defaults") {
  ScenarioConfig sc = parse_config(kMinimalBc);
  CHECK(sc.kind == "neg-bc");
  REQUIRE(sc.n_list.size() == 1);
  CHECK(sc.n_list[0] == 8);
  CHECK(sc.trials == 1000);
  CHECK(sc.neg.eps == doctest::Approx(0.12));
  CHECK(sc.neg.rates.r0 == doctest::Approx(0.25));
  CHECK(sc.neg.rates.t2 == doctest::Approx(0.0));
  CHECK(sc.neg.seed == 7);
  CHECK(sc.neg.source.rank() == 4);
}

TEST_CASE("blocklength list form") {
  std::string text = kMinimalBc;
  text.replace(text.find("\"n\": 8"), 6, "\"n\": [8, 16, 24]");
  ScenarioConfig sc = parse_config(text);
  CHECK(sc.n_list == std::vector<int>{8, 16, 24});
}

TEST_CASE("pmf and rate violations report the JSON path") {
  std::string bad = kMinimalBc;
  bad.replace(bad.find("[0.5, 0, 0, 0.5]"), 16, "[0.5, 0, 0, 0.4]");
  try {
    parse_config(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("$.source") != std::string::npos);
  }

  std::string neg_rate = kMinimalBc;
  neg_rate.replace(neg_rate.find("\"r0\": 0.25"), 10, "\"r0\": -0.1");
  CHECK_THROWS_AS(parse_config(neg_rate), ConfigError);

  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"kind": "bogus"})"), ConfigError);
}

TEST_CASE("interference spec violations carry the spec path and witnesses") {
  // degenerate f at receiver 1: constant in its input component
  const char* text = R"({
    "kind": "det-ic",
    "n": 8,
    "rates": [0.5, 0.25, 0],
    "spec": {
      "q_dim": 1,
      "x_dim": [2, 2, 1],
      "comp_dim": [[2, 2, 2], [2, 2, 2], [1, 1, 1]],
      "s_dim": [2, 2, 2],
      "y_dim": [2, 2, 2],
      "g": [[[0,1],[0,1],[0,1]], [[0,1],[0,1],[0,1]], [[0],[0],[0]]],
      "h": [[0,1], [0,1], [0,1,1,0]],
      "f": [[0,0,1,1], [0,1,1,0], [0,1]]
    },
    "q": {"dims": [1], "probs": [1.0]},
    "x_given_q": [
      {"in_dims": [1], "out_dims": [2], "rows": [0.5, 0.5]},
      {"in_dims": [1], "out_dims": [2], "rows": [0.5, 0.5]},
      {"in_dims": [1], "out_dims": [1], "rows": [1.0]}
    ]
  })";
  try {
    parse_config(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    CHECK(msg.find("$.spec") != std::string::npos);
    CHECK(msg.find("f[0]") != std::string::npos);
  }
}

TEST_CASE("stream seed derivation separates streams") {
  CHECK(derive_stream_seed(1, 2) == derive_stream_seed(1, 2));
  CHECK(derive_stream_seed(1, 2) != derive_stream_seed(1, 3));
  CHECK(derive_stream_seed(1, 2) != derive_stream_seed(2, 2));
  CHECK(stream_index(StreamTag::kCodebook, 5) != stream_index(StreamTag::kTrial, 5));

  std::set<std::uint64_t> seen;
  for (std::uint64_t c = 0; c < 50000; ++c) {
    seen.insert(derive_stream_seed(99, stream_index(StreamTag::kTrial, c)));
    seen.insert(derive_stream_seed(99, stream_index(StreamTag::kCodebook, c)));
  }
  CHECK(seen.size() == 100000);
}

TEST_CASE("uniform_index draws once even for singleton ranges") {
  Rng a(3), b(3);
  (void)a.uniform_index(1);
  (void)b.uniform_index(7);
  // both consumed exactly one engine step, so streams are aligned
  CHECK(a.next_unit() == b.next_unit());
}

TEST_CASE("csv formatting") {
  CHECK(fmt_g12(0.5) == "0.5");
  CHECK(fmt_g12(1.0 / 3.0) == "0.333333333333");
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_escape("line\nbreak") == "\"line\nbreak\"");

  std::string empty = csv_text({"a", "b"}, {});
  CHECK(empty == "a,b\r\n");
  std::string two = csv_text({"a", "b"}, {{"1", "x,y"}});
  CHECK(two == "a,b\r\n1,\"x,y\"\r\n");
}

TEST_CASE("stats rows follow the schema and are reproducible") {
  REQUIRE(kStatsHeader.size() == 11);
  CHECK(kStatsHeader[0] == "decoder");
  CHECK(kStatsHeader[9] == "error_rate");
  CHECK(kStatsHeader[10] == "ci95_halfwidth");

  ScenarioConfig sc = parse_config(kMinimalBc);
  TrialStats st = run_trials(sc.neg, 40, 0);
  auto rows = trial_stats_rows(st, sc.neg.n, sc.neg.eps);
  REQUIRE(rows.size() == kNumDecoders);
  for (std::size_t d = 0; d < rows.size(); ++d) {
    REQUIRE(rows[d].size() == 11);
    CHECK(rows[d][0] == kDecoderNames[d]);
    CHECK(rows[d][3] == "40");
  }
  // byte-identical re-render from an identical rerun
  TrialStats st2 = run_trials(sc.neg, 40, 0);
  auto rows2 = trial_stats_rows(st2, sc.neg.n, sc.neg.eps);
  CHECK(csv_text(kStatsHeader, rows) == csv_text(kStatsHeader, rows2));
}
