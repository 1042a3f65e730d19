#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "ratesim/region.hpp"
#include "ratesim/rng.hpp"
#include "ratesim/suites.hpp"

using namespace ratesim;

namespace {

MIProfile toy_profile() {
  NegSchemeConfig cfg = two_bit_config({}, 16, 0.12, 0);
  return mi_profile(chain_compose(cfg.source, cfg.channel));
}

// Does any value of sys's variable `var` satisfy all constraints at `x`
// (x's entry for `var` is ignored)? Direct 1-D interval check.
bool exists_extension(const ConstraintSystem& sys, std::vector<double> x, int var,
                      double tol) {
  double lo = -1e30, hi = 1e30;
  for (const LinearConstraint& raw : sys.constraints) {
    LinearConstraint r = raw.as_le();
    double c = r.coeffs[static_cast<std::size_t>(var)];
    double rest = 0;
    for (int v = 0; v < sys.num_vars; ++v) {
      if (v != var) rest += r.coeffs[static_cast<std::size_t>(v)] * x[static_cast<std::size_t>(v)];
    }
    if (c == 0) {
      if (rest > r.rhs + tol) return false;
    } else if (c > 0) {
      hi = std::min(hi, (r.rhs - rest) / c);
    } else {
      lo = std::max(lo, (r.rhs - rest) / c);
    }
  }
  return lo <= hi + tol;
}

}  // namespace

TEST_CASE("rate tuple accessors") {
  RateTuple t;
  for (int v = 0; v < kNumRateVars; ++v) t.set(v, v + 0.5);
  for (int v = 0; v < kNumRateVars; ++v) CHECK(t.get(v) == doctest::Approx(v + 0.5));
  CHECK(t.r1() == doctest::Approx(t.s0 + t.s1 + t.s2 + t.s3));
}

TEST_CASE("information profile of the two-bit scenario") {
  MIProfile mi = toy_profile();
  CHECK(mi.iX_Y1 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(mi.iX_Y1_gU == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mi.iX_Y1_gUV2V3 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mi.iX_Y1_gUV2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mi.iX_Y1_gUV3 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mi.iU_Y2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mi.iUV2_Y2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mi.iV2_Y2_gU == doctest::Approx(0.0));
  CHECK(mi.iU_Y3 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mi.iV2_V3_gU == doctest::Approx(0.0));
}

TEST_CASE("constraint system labels cover the source inequalities") {
  ConstraintSystem sys = build_nonunique_system(toy_profile());
  std::set<std::string> labels;
  for (const auto& c : sys.constraints) labels.insert(c.label);
  for (const char* want :
       {"split.t2", "split.t3", "nonneg.s0", "nonneg.s1", "nonneg.s2", "nonneg.s3",
        "nonneg.r0", "encoding", "y1.s1", "y1.s1s2", "y1.s1s3", "y1.s1s2s3", "y1.all",
        "y2.nonunique", "y3.nonunique"}) {
    CAPTURE(want);
    CHECK(labels.count(want) == 1);
  }
  CHECK(sys.num_vars == kNumRateVars);
}

TEST_CASE("four regime systems with the expected receiver rows") {
  auto systems = build_jointunique_systems(toy_profile());
  REQUIRE(systems.size() == 4);
  std::set<std::string> sys_labels;
  for (const auto& s : systems) sys_labels.insert(s.label);
  CHECK(sys_labels == std::set<std::string>{"regime-aa", "regime-ab", "regime-ba", "regime-bb"});
  for (const auto& s : systems) {
    bool b2 = s.label[7] == 'b';
    bool found_sat = false;
    for (const auto& c : s.constraints) found_sat = found_sat || c.label == "y2.regime-b.satellite";
    CHECK(found_sat == b2);
  }
}

TEST_CASE("eliminating a variable preserves extendable membership") {
  // x0 + x1 <= 1, x0 - x1 <= 0, x1 <= 0.6, -x1 <= 0; eliminate x1.
  ConstraintSystem sys;
  sys.num_vars = 2;
  sys.var_names = {"x0", "x1"};
  sys.constraints = {{{1, 1}, Rel::kLe, 1.0, "a"},
                     {{1, -1}, Rel::kLe, 0.0, "b"},
                     {{0, 1}, Rel::kLe, 0.6, "c"},
                     {{0, -1}, Rel::kLe, 0.0, "d"}};
  ConstraintSystem red = fourier_motzkin_eliminate(sys, 1);
  for (const auto& c : red.constraints) CHECK(c.coeffs[1] == 0);
  // Feasible iff exists x1 in [max(x0,0), min(1-x0, 0.6)] : x0 <= 0.5 and x0 <= 0.6.
  for (double x0 : {-0.2, 0.0, 0.3, 0.5, 0.50001, 0.7}) {
    std::vector<double> pt = {x0, 0.0};
    bool direct = exists_extension(sys, pt, 1, 1e-9);
    CHECK(red.satisfied(pt, 1e-9) == direct);
  }
}

TEST_CASE("random elimination matches the interval oracle") {
  Rng rng(2024);
  for (int s = 0; s < 20; ++s) {
    ConstraintSystem sys;
    sys.num_vars = 3;
    sys.var_names = {"x0", "x1", "x2"};
    int rows = 4 + static_cast<int>(rng.uniform_index(5));
    for (int r = 0; r < rows; ++r) {
      LinearConstraint c;
      for (int v = 0; v < 3; ++v) {
        c.coeffs.push_back(static_cast<int>(rng.uniform_index(7)) - 3);
      }
      c.rhs = rng.next_unit() * 6.0 - 2.0;
      c.label = "r" + std::to_string(r);
      sys.constraints.push_back(std::move(c));
    }
    // keep the slab bounded in x2 so the oracle interval is meaningful
    sys.constraints.push_back({{0, 0, 1}, Rel::kLe, 5.0, "cap+"});
    sys.constraints.push_back({{0, 0, -1}, Rel::kLe, 5.0, "cap-"});
    ConstraintSystem red = fourier_motzkin_eliminate(sys, 2);
    for (int p = 0; p < 200; ++p) {
      std::vector<double> x = {rng.next_unit() * 6 - 3, rng.next_unit() * 6 - 3, 0.0};
      CHECK(red.satisfied(x, 1e-9) == exists_extension(sys, x, 2, 1e-9));
    }
  }
}

TEST_CASE("two-bit scenario projects to the expected halfplanes") {
  Region2D r = project_region(build_nonunique_system(toy_profile()));
  REQUIRE_FALSE(r.infeasible);
  REQUIRE(r.halfplanes.size() == 2);
  std::vector<Region2D::Halfplane> hs = r.halfplanes;
  std::sort(hs.begin(), hs.end(), [](const auto& a, const auto& b) {
    return std::pair(a.a, a.b) < std::pair(b.a, b.b);
  });
  CHECK(hs[0].a == 1);
  CHECK(hs[0].b == 0);
  CHECK(hs[0].c == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(hs[1].a == 1);
  CHECK(hs[1].b == 1);
  CHECK(hs[1].c == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("region membership and comparison") {
  Region2D square;
  square.halfplanes = {{1, 0, 1.0}, {0, 1, 1.0}};
  CHECK(square.contains(0.5, 0.5));
  CHECK_FALSE(square.contains(1.1, 0.5));
  CHECK_FALSE(square.contains(-0.1, 0.5));

  Region2D tri;
  tri.halfplanes = {{1, 1, 1.0}};
  RegionUnion a{{square}};
  RegionUnion b{{tri}};
  CompareResult eq = compare_regions(a, a, 1e-9, 100);
  CHECK(eq.verdict == CompareResult::Verdict::kEqual);
  CompareResult sub = compare_regions(a, b, 1e-9, 100);
  CHECK(sub.verdict == CompareResult::Verdict::kANotSubsetB);
  CHECK(sub.witness_a_only.has_value());
  // the triangle is inside the square
  CompareResult sup = compare_regions(b, a, 1e-9, 100);
  CHECK(sup.verdict == CompareResult::Verdict::kBNotSubsetA);
}

TEST_CASE("regime predicate splits at the cloud information") {
  MIProfile mi = toy_profile();  // iU_Y2 = iU_Y3 = 1
  RateTuple below;
  below.r0 = 0.8;
  CHECK(regime_predicate(mi, below).y2 == Regime::kA);
  RateTuple above;
  above.r0 = 1.2;
  CHECK(regime_predicate(mi, above).y2 == Regime::kB);
  RateTuple at;
  at.r0 = 1.0;
  CHECK(regime_predicate(mi, at).y2 == Regime::kBoundary);
  CHECK(regime_predicate(mi, at, 0.3).y2 == Regime::kBoundary);
}

TEST_CASE("feasible tuple sampler stays inside the system") {
  Rng rng(5);
  MIProfile mi = toy_profile();
  ConstraintSystem sys = build_nonunique_system(mi);
  auto tuples = sample_feasible_tuples(sys, mi, 200, rng);
  REQUIRE(tuples.size() == 200);
  int distinct_r0 = 0;
  double prev = -1;
  for (const RateTuple& t : tuples) {
    std::array<double, kNumRateVars> x{};
    for (int v = 0; v < kNumRateVars; ++v) x[static_cast<std::size_t>(v)] = t.get(v);
    CHECK(sys.satisfied(x, 1e-7));
    if (std::abs(t.r0 - prev) > 1e-6) ++distinct_r0;
    prev = t.r0;
  }
  CHECK(distinct_r0 > 100);  // the walk actually moves
}
