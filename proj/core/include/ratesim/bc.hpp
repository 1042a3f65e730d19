#pragma once

// Finite-blocklength simulation of the layered broadcast scheme: cloud
// codebook U carrying the common part, satellite codebooks V2/V3 generated
// conditionally and binned, a jointly typical pair selected per product bin
// to carry the bin indices, and X generated from the selected pair. Decoders:
// the private receiver's joint decoder over all five indices, and per
// degraded receiver a non-unique decoder, two joint-unique component
// decoders, and the auxiliary decoder combining them.

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "ratesim/prob.hpp"
#include "ratesim/region.hpp"
#include "ratesim/rng.hpp"
#include "ratesim/typicality.hpp"

namespace ratesim {

struct Caps {
  std::size_t max_codebook = 4096;              // per-extent bound
  std::size_t max_search = std::size_t{1} << 24;  // per-decoder scan bound
};

struct NegSchemeConfig {
  int n = 16;
  double eps = 0.12;
  RateTuple rates;
  JointPmf source;   // (U, V2, V3, X)
  CondPmf channel;   // X -> (Y1, Y2, Y3)
  std::uint64_t seed = 0;
  Caps caps;
};

// Codebook extent for a rate: max(1, round(2^{n*rate})).
std::size_t codebook_size(int n, double rate);

// A transmitted message: common index m0 and the private split (s0,s2,s3,s1).
struct Msg {
  std::size_t m0 = 0, s0 = 0, s2 = 0, s3 = 0, s1 = 0;
};

struct NegCodebook {
  int n = 0;
  std::size_t m0 = 1, ms0 = 1, ms1 = 1, ms2 = 1, ms3 = 1, mt2 = 1, mt3 = 1;

  // Flat sequence pools, row length n. The cloud index j ranges over
  // (m0, s0) pairs: j = m0*ms0 + s0.
  std::vector<Symbol> u;    // [j]
  std::vector<Symbol> v2;   // [j*mt2 + t2]
  std::vector<Symbol> v3;   // [j*mt3 + t3]
  std::vector<int> bin2;    // t2 -> s2
  std::vector<int> bin3;    // t3 -> s3

  // Selected satellite pair per product bin; on selection failure the pair
  // is a uniform fallback from the bin and fail is set.
  struct Chosen {
    std::int32_t t2 = 0, t3 = 0;
    bool fail = false;
  };
  std::vector<Chosen> chosen;  // [(j*ms2 + s2)*ms3 + s3]
  std::vector<Symbol> x;       // [((j*ms2 + s2)*ms3 + s3)*ms1 + s1]

  std::size_t j_count() const { return m0 * ms0; }
  std::size_t bin_index(std::size_t j, std::size_t s2, std::size_t s3) const {
    return (j * ms2 + s2) * ms3 + s3;
  }
  const Symbol* u_row(std::size_t j) const { return u.data() + j * n; }
  const Symbol* v2_row(std::size_t j, std::size_t t2) const {
    return v2.data() + (j * mt2 + t2) * n;
  }
  const Symbol* v3_row(std::size_t j, std::size_t t3) const {
    return v3.data() + (j * mt3 + t3) * n;
  }
  const Symbol* x_row(std::size_t j, std::size_t s2, std::size_t s3, std::size_t s1) const {
    return x.data() + (bin_index(j, s2, s3) * ms1 + s1) * n;
  }
};

struct Verdict {
  enum class Kind { kCorrect, kWrong, kNoCandidate, kAmbiguous };
  Kind kind = Kind::kNoCandidate;
  std::vector<std::size_t> decoded;  // present for kCorrect and kWrong

  bool is_error() const { return kind != Kind::kCorrect; }
  // Whether the decoder produced an output (as opposed to declaring an
  // error); the auxiliary combination rule keys on this.
  bool decided() const { return kind == Kind::kCorrect || kind == Kind::kWrong; }
};

// Precompiled typicality tests shared by codebook generation and all
// decoders for one (source, channel, n, eps).
struct DecoderRefs {
  JointPmf joint7;    // (U,V2,V3,X,Y1,Y2,Y3)
  TypTest enc;        // (U,V2,V3), scan over V3
  TypTest y1;         // (U,V2,V3,Y1,X), scan over X
  TypTest y2_scan;    // (U,Y2,V2), scan over V2
  TypTest y2_cloud;   // (Y2,U), scan over U
  TypTest y3_scan;    // (U,Y3,V3), scan over V3
  TypTest y3_cloud;   // (Y3,U), scan over U
  // Output-marginal prechecks: if the received sequence fails its own
  // marginal, no tuple can be typical (robust typicality marginalizes), so
  // decoders may short-circuit to NoCandidate.
  TypTest y1_marg, y2_marg, y3_marg;
};

DecoderRefs make_decoder_refs(const NegSchemeConfig& cfg);

// Draws a full codebook; throws std::runtime_error if any extent exceeds
// caps.max_codebook or any decoder scan would exceed caps.max_search.
NegCodebook generate_codebook(const NegSchemeConfig& cfg, const DecoderRefs& refs, Rng& rng);

// Looks up the codeword and the bin's failure flag; transmission proceeds
// regardless of the flag.
std::pair<const Symbol*, bool> encode(const NegCodebook& cb, const Msg& msg);

// Memoryless transmission: per-position independent sampling of
// (y1,y2,y3) from the channel row of x[i].
void transmit(const CondPmf& channel, const Symbol* x, int n, Rng& rng,
              std::vector<Symbol>& y1, std::vector<Symbol>& y2, std::vector<Symbol>& y3);

// Private receiver: unique quintuple (m0,s0,s2,s3,s1) with
// (U, V2_chosen, V3_chosen, X, y1) jointly typical.
Verdict decode_y1(const NegCodebook& cb, const DecoderRefs& refs,
                  const std::vector<Symbol>& y1, const Msg& truth);

// Degraded receiver `sat` (2 or 3): non-unique decoding of (m0,s0) —
// candidate iff the cloud row plus SOME satellite row is typical with yk.
Verdict decode_yk_nonunique(const NegCodebook& cb, const DecoderRefs& refs,
                            const std::vector<Symbol>& yk, int sat, const Msg& truth);

// Component k=1: unique (m0,s0) from the cloud alone; component k=2:
// unique (m0,s0,tk) from cloud + satellite.
Verdict decode_yk_component(const NegCodebook& cb, const DecoderRefs& refs,
                            const std::vector<Symbol>& yk, int sat, int k,
                            const Msg& truth);

// Auxiliary rule on component outputs: error iff both components declare
// errors or both decode with mismatched (m0,s0); otherwise the non-erring
// output. Both-err maps to NoCandidate, disagreement to Ambiguous.
Verdict auxiliary_from_components(const Verdict& comp1, const Verdict& comp2,
                                  std::size_t true_j, const NegCodebook& cb);

Verdict decode_yk_auxiliary(const NegCodebook& cb, const DecoderRefs& refs,
                            const std::vector<Symbol>& yk, int sat, const Msg& truth);

// Convenience aliases matching the scheme's receiver names.
inline Verdict decode_y2_nonunique(const NegCodebook& cb, const DecoderRefs& r,
                                   const std::vector<Symbol>& y2, const Msg& t) {
  return decode_yk_nonunique(cb, r, y2, 2, t);
}
inline Verdict decode_y2_component(const NegCodebook& cb, const DecoderRefs& r,
                                   const std::vector<Symbol>& y2, int k, const Msg& t) {
  return decode_yk_component(cb, r, y2, 2, k, t);
}
inline Verdict decode_y2_auxiliary(const NegCodebook& cb, const DecoderRefs& r,
                                   const std::vector<Symbol>& y2, const Msg& t) {
  return decode_yk_auxiliary(cb, r, y2, 2, t);
}

enum DecoderId : int {
  kDY1 = 0,
  kDY2Nonunique,
  kDY2Comp1,
  kDY2Comp2,
  kDY2Aux,
  kDY3Nonunique,
  kDY3Comp1,
  kDY3Comp2,
  kDY3Aux,
  kNumDecoders
};
extern const std::array<const char*, kNumDecoders> kDecoderNames;

struct VerdictCounts {
  long correct = 0, wrong = 0, no_candidate = 0, ambiguous = 0;
  void add(Verdict::Kind k);
  long total() const { return correct + wrong + no_candidate + ambiguous; }
  long errors() const { return total() - correct; }
};

struct TrialStats {
  long trials = 0;
  long enc_fail = 0;
  std::array<VerdictCounts, kNumDecoders> decoders{};
  // Per-trial law violations (expected to stay 0; tracked, never asserted here).
  long viol_comp2_implies_nonunique = 0;
  long viol_comp1_implies_nonunique = 0;
  long viol_aux_rule = 0;
};

// Monte Carlo driver: uniform message per trial, encode, transmit, all nine
// decoders, per-trial law checks. The codebook is redrawn every
// `fresh_codebook_every` trials. Fully deterministic under cfg.seed.
TrialStats run_trials(const NegSchemeConfig& cfg, long trials, long fresh_codebook_every);

// Satellite-pair counts within the focal product bin (requires
// M(S2) = M(S3) = 1 and M(T2) >= 3). Per codebook draw:
//   n1 = typical (V2(t2), V3(t3)) pairs over all rows t2 except the second,
//   n2 = typical pairs in row t2 = 2 (1-based), n3 = row t2 = 3.
// p_l, p_u bracket the per-pair typicality probability using the
// configured exponent slack delta.
struct BinStats {
  std::vector<long> n1, n2, n3;
  double p_l = 0, p_u = 0;
  long N = 0;  // number of V3 columns, M(T3)
  int n = 0;
  double delta = 0;
  long draws = 0;
};

BinStats bin_statistics(const NegSchemeConfig& cfg, long draws, double delta);

// Chernoff-style concentration check on the bin counts; constants
// alpha1 = 2 - e^{1/2}, beta1 = e^{1/2}, alpha2 = 1/2 - e^{-1}, beta2 = 1.
struct ConcentrationReport {
  double alpha1 = 0, beta1 = 0, alpha2 = 0, beta2 = 0;
  double emp_n2_tail = 0, bound_n2 = 0, slack_n2 = 0;
  double emp_n3_tail = 0, bound_n3 = 0, slack_n3 = 0;
  bool pass_n2 = false, pass_n3 = false, pass = false;
};

ConcentrationReport concentration_check(const BinStats& stats);

}  // namespace ratesim
