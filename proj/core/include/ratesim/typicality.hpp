#pragma once

// Robust joint typicality: a tuple of sequences is typical for a reference
// joint pmf iff every joint symbol's empirical frequency is within a
// multiplicative eps of its probability, and symbols of zero probability do
// not occur. The multiplicative form implies marginal consistency: a typical
// tuple stays typical under any sub-tuple/marginal pair at the same eps,
// which the per-trial decoder implication laws rely on.

#include <cstdint>
#include <span>
#include <vector>

#include "ratesim/prob.hpp"

namespace ratesim {

using Symbol = std::uint8_t;

// Precompiled typicality test for one reference pmf at fixed (n, eps):
// per joint cell, integer count bounds [lo, hi] with
//   lo = ceil(n*p*(1-eps)), hi = floor(n*p*(1+eps)), and lo = hi = 0 if p = 0.
// Testing is then pure integer counting.
class TypTest {
 public:
  TypTest() = default;
  TypTest(const JointPmf& ref, int n, double eps);

  int arity() const { return static_cast<int>(dims_.size()); }
  int n() const { return n_; }
  std::size_t cells() const { return lo_.size(); }

  // Full test of an arity-sized tuple of length-n sequences.
  // `scratch` must hold at least cells() counters.
  bool test(const Symbol* const* seqs, std::int32_t* scratch) const;

  // Two-phase scan support for decoder loops: bind all but the last
  // dimension once, then test many candidate final sequences cheaply.
  // `ctx` must hold n entries.
  void bind(const Symbol* const* prefix_seqs, std::int32_t* ctx) const;
  bool test_bound(const std::int32_t* ctx, const Symbol* last,
                  std::int32_t* scratch) const;

 private:
  bool check_counts(const std::int32_t* counts) const;

  std::vector<int> dims_;
  std::vector<std::int32_t> lo_, hi_;
  std::vector<std::int32_t> stride_;
  int n_ = 0;
};

// One-shot convenience wrapper (compiles a TypTest per call).
bool is_jointly_typical(std::span<const std::vector<Symbol>* const> seqs,
                        const JointPmf& ref, double eps);

}  // namespace ratesim
