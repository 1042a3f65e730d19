#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "ratesim/prob.hpp"
#include "ratesim/rng.hpp"
#include "ratesim/suites.hpp"
#include "ratesim/typicality.hpp"

using namespace ratesim;

namespace {

std::vector<int> iv(std::initializer_list<int> l) { return {l.begin(), l.end()}; }

}  // namespace

TEST_CASE("exact empirical match is typical") {
  JointPmf ref({2}, {0.5, 0.5});
  std::vector<Symbol> s = {0, 1, 0, 1, 0, 1, 0, 1};
  const std::vector<Symbol>* seqs[] = {&s};
  CHECK(is_jointly_typical(seqs, ref, 0.01));
}

TEST_CASE("zero-probability symbols are forbidden") {
  JointPmf ref({2}, {1.0, 0.0});
  std::vector<Symbol> s = {0, 0, 0, 1};
  const std::vector<Symbol>* seqs[] = {&s};
  CHECK_FALSE(is_jointly_typical(seqs, ref, 10.0));
}

TEST_CASE("integer count windows match the multiplicative definition") {
  // n=16, p=1/2, eps=0.12: counts must be exactly 8.
  JointPmf ref({2}, {0.5, 0.5});
  TypTest t(ref, 16, 0.12);
  std::vector<std::int32_t> scratch(t.cells());
  std::vector<Symbol> balanced(16, 0), off(16, 0);
  for (int i = 0; i < 8; ++i) balanced[static_cast<std::size_t>(i)] = 1;
  for (int i = 0; i < 7; ++i) off[static_cast<std::size_t>(i)] = 1;
  const Symbol* b = balanced.data();
  const Symbol* o = off.data();
  CHECK(t.test(&b, scratch.data()));
  CHECK_FALSE(t.test(&o, scratch.data()));
}

TEST_CASE("bind plus test_bound equals the full test") {
  Rng rng(7);
  JointPmf ref = random_joint(rng, {2, 2, 2});
  TypTest t(ref, 24, 0.4);
  std::vector<std::int32_t> ctx(24), s1(t.cells()), s2(t.cells());
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Symbol> a(24), b(24), c(24);
    for (int i = 0; i < 24; ++i) {
      a[static_cast<std::size_t>(i)] = static_cast<Symbol>(rng.uniform_index(2));
      b[static_cast<std::size_t>(i)] = static_cast<Symbol>(rng.uniform_index(2));
      c[static_cast<std::size_t>(i)] = static_cast<Symbol>(rng.uniform_index(2));
    }
    const Symbol* all[] = {a.data(), b.data(), c.data()};
    const Symbol* prefix[] = {a.data(), b.data()};
    t.bind(prefix, ctx.data());
    CHECK(t.test(all, s1.data()) == t.test_bound(ctx.data(), c.data(), s2.data()));
  }
}

TEST_CASE("typicality marginalizes to sub-tuples") {
  Rng rng(99);
  JointPmf ref = random_joint(rng, {2, 3, 2});
  JointPmf ref01 = marginalize(ref, iv({0, 1}));
  JointPmf ref2 = marginalize(ref, iv({2}));
  JointPmf ref20 = marginalize(ref, iv({2, 0}));
  double eps = 0.5;
  int n = 600;  // wide count windows so typical tuples actually occur
  CondPmf full = condition(ref, iv({}));
  int typical_seen = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Symbol> a(static_cast<std::size_t>(n)), b(a), c(a);
    for (int i = 0; i < n; ++i) {
      auto f = static_cast<std::size_t>(rng.sample(full.row(0)));
      std::vector<int> idx(3);
      ref.unflatten(f, idx);
      a[static_cast<std::size_t>(i)] = static_cast<Symbol>(idx[0]);
      b[static_cast<std::size_t>(i)] = static_cast<Symbol>(idx[1]);
      c[static_cast<std::size_t>(i)] = static_cast<Symbol>(idx[2]);
    }
    const std::vector<Symbol>* seqs[] = {&a, &b, &c};
    if (!is_jointly_typical(seqs, ref, eps)) continue;
    ++typical_seen;
    const std::vector<Symbol>* s01[] = {&a, &b};
    const std::vector<Symbol>* s2[] = {&c};
    const std::vector<Symbol>* s20[] = {&c, &a};
    CHECK(is_jointly_typical(s01, ref01, eps));
    CHECK(is_jointly_typical(s2, ref2, eps));
    CHECK(is_jointly_typical(s20, ref20, eps));
  }
  CHECK(typical_seen > 0);  // the property must actually be exercised
}

TEST_CASE("iid draws from the reference are usually typical") {
  JointPmf ref({2}, {0.5, 0.5});
  Rng rng(1234);
  int accepted = 0;
  const int draws = 1000, n = 200;
  std::vector<Symbol> s(static_cast<std::size_t>(n));
  for (int d = 0; d < draws; ++d) {
    for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = static_cast<Symbol>(rng.uniform_index(2));
    const std::vector<Symbol>* seqs[] = {&s};
    if (is_jointly_typical(seqs, ref, 0.2)) ++accepted;
  }
  CHECK(accepted >= 950);
}

TEST_CASE("arity and length mismatches are rejected") {
  JointPmf ref({2, 2}, {0.25, 0.25, 0.25, 0.25});
  std::vector<Symbol> a = {0, 1}, b = {0, 1, 0};
  const std::vector<Symbol>* wrong_arity[] = {&a};
  CHECK_THROWS_AS(is_jointly_typical(wrong_arity, ref, 0.1), std::invalid_argument);
  const std::vector<Symbol>* wrong_len[] = {&a, &b};
  CHECK_THROWS_AS(is_jointly_typical(wrong_len, ref, 0.1), std::invalid_argument);
}
