#pragma once

// Invariant suites run by the `verify` command, plus the shared scenario
// builders and random-model generators they (and the tests) use.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ratesim/bc.hpp"
#include "ratesim/detic.hpp"
#include "ratesim/region.hpp"
#include "ratesim/rng.hpp"

namespace ratesim {

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string details;
};

// --- shared scenario builders -------------------------------------------

// Noiseless two-bit scenario: U a uniform bit, V2/V3 degenerate, X = (U, W)
// with W a fresh uniform bit, Y1 = X, Y2 = Y3 = U. Its (R0,R1) projection is
// exactly {R0 <= 1, R0 + R1 <= 2}.
NegSchemeConfig two_bit_config(const RateTuple& rates, int n, double eps,
                               std::uint64_t seed, const Caps& caps = {});

// Satellite-pair counting scenario for the concentration check: U degenerate,
// V2/V3 independent uniform bits (so the pair-exponent information term is
// zero), X = (V2, V3), noiseless outputs.
NegSchemeConfig bin_stats_config(double t2, double t3, int n, double eps,
                                 std::uint64_t seed);

// Three-sender XOR interference scenario: senders 1 and 2 carry uniform
// bits, sender 3 is degenerate; Y1 = X1 xor X2, Y2 = X2 xor X3 = X2,
// Y3 = X1 xor X2 (through the component tables).
ICConfig xor_ic_config(double r1, double r2, int n, double eps, std::uint64_t seed,
                       const Caps& caps = {});

// --- random models --------------------------------------------------------

// Dirichlet-style random pmf (normalized exponentials), full support.
JointPmf random_joint(Rng& rng, std::vector<int> dims);
CondPmf random_channel(Rng& rng, std::vector<int> in_dims, std::vector<int> out_dims);

// Random (source over (U,V2,V3,X), channel X -> (Y1,Y2,Y3)) pair with
// alphabet sizes drawn from {2,3}.
std::pair<JointPmf, CondPmf> random_model(Rng& rng);

MIProfile model_profile(const JointPmf& source, const CondPmf& channel);

// --- feasible-point sampling ----------------------------------------------

// Hit-and-run samples from the polytope of a rate constraint system. The
// deterministic start point carries the whole pair-selection budget on
// (T2,T3); returns empty when that start is infeasible (resample the model).
std::vector<RateTuple> sample_feasible_tuples(const ConstraintSystem& sys,
                                              const MIProfile& mi, int count,
                                              Rng& rng);

// --- suites -----------------------------------------------------------------

// Every sampled feasible tuple of the non-unique system, outside a 1e-9 band
// of the regime boundaries, lies in the union of the four joint-unique
// regime systems.
SuiteResult run_pointwise_suite(std::uint64_t seed, int num_models, int samples_per_model);

// Projected (R0,R1) regions agree: non-unique vs union of the four regime
// systems, grid comparison.
SuiteResult run_projection_suite(std::uint64_t seed, int num_models, double tol, int grid);

// Per-trial decoder implication laws over mixed broadcast and interference
// scenarios; requires at least `min_trials` total and zero violations.
SuiteResult run_implication_suite(std::uint64_t seed, long min_trials);

// Bin-count tail probabilities against the Chernoff-style bounds.
SuiteResult run_concentration_suite(std::uint64_t seed, long draws);

std::vector<SuiteResult> run_all_suites(std::uint64_t seed);

}  // namespace ratesim
