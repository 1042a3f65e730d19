#pragma once

// Three-user deterministic interference channel: each sender l's input X_l
// maps through per-receiver component functions X_lk = g_lk(X_l); receiver k
// sees Y_k = f_k(X_kk, S_k) where S_k = h_k(.,.) combines the two interfering
// components. h_k and f_k are injective in each argument when the other is
// fixed. Receiver 1 runs a non-unique decoder over m1, four joint-unique
// component decoders (treating interference subsets {}, {2}, {3}, {2,3} as
// decodable), and the auxiliary decoder combining them.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ratesim/bc.hpp"
#include "ratesim/prob.hpp"
#include "ratesim/rng.hpp"
#include "ratesim/typicality.hpp"

namespace ratesim {

// The two interfering senders at each receiver, in h_k argument order.
inline constexpr int kICInterferers[3][2] = {{1, 2}, {0, 2}, {1, 0}};

struct DetICSpec {
  int q_dim = 1;
  std::array<int, 3> x_dim{};                   // |X_l|
  std::array<std::array<int, 3>, 3> comp_dim{}; // |X_lk|
  std::array<int, 3> s_dim{};                   // |S_k|
  std::array<int, 3> y_dim{};                   // |Y_k|

  // g[l][k]: X_l -> X_lk, size x_dim[l].
  std::array<std::array<std::vector<int>, 3>, 3> g;
  // h[k]: (first interferer component, second) -> S_k, row-major
  // [a * comp_dim[second][k] + b], size = product of the two component dims.
  std::array<std::vector<int>, 3> h;
  // f[k]: (X_kk, S_k) -> Y_k, row-major [x * s_dim[k] + s].
  std::array<std::vector<int>, 3> f;
};

struct ICValidation {
  bool ok = true;
  std::string message;  // first violation with witnesses
};

// Exhaustive check: table sizes and ranges, then injectivity of every
// h_k(., b), h_k(a, .), f_k(., s), f_k(x, .).
ICValidation validate_spec(const DetICSpec& spec);

struct ICConfig {
  int n = 16;
  double eps = 0.12;
  DetICSpec spec;
  JointPmf q;                          // p(Q), single dimension
  std::array<CondPmf, 3> x_given_q;    // p(X_l | Q)
  std::array<double, 3> rates{};       // R1, R2, R3
  std::uint64_t seed = 0;
  Caps caps;
};

struct ICCodebook {
  int n = 0;
  std::vector<Symbol> q;
  std::array<std::size_t, 3> m{1, 1, 1};      // extents M(R_k)
  std::array<std::vector<Symbol>, 3> x;       // input pools [m_l rows]
  // Precomputed interfering components at receiver 1.
  std::vector<Symbol> c21;                    // g_21(X2 rows), [m[1] rows]
  std::vector<Symbol> c31;                    // g_31(X3 rows), [m[2] rows]

  const Symbol* x_row(int l, std::size_t mi) const { return x[l].data() + mi * n; }
  const Symbol* c21_row(std::size_t mi) const { return c21.data() + mi * n; }
  const Symbol* c31_row(std::size_t mi) const { return c31.data() + mi * n; }
};

// Q i.i.d. from p(Q); X_l rows conditionally i.i.d. from p(X_l|Q).
// Throws std::runtime_error on cap violation, std::invalid_argument on an
// invalid spec or mismatched distributions.
ICCodebook ic_generate_codebook(const ICConfig& cfg, Rng& rng);

// Deterministic per-position evaluation of the channel relations.
void ic_transmit(const DetICSpec& spec, const Symbol* x1, const Symbol* x2,
                 const Symbol* x3, int n, std::vector<Symbol>& y1,
                 std::vector<Symbol>& y2, std::vector<Symbol>& y3);

// Typicality references for receiver 1's decoders, all marginals of the
// joint over (Q, X1, X21, X31, S1, Y1) induced by p(q) prod_l p(x_l|q)
// pushed through the deterministic tables.
struct ICDecoderRefs {
  JointPmf ext;     // (Q, X1, X21, X31, S1, Y1)
  TypTest t_own;    // (Q, Y1, X1), scan over X1
  TypTest t_i2;     // (Q, Y1, X21, X1)
  TypTest t_i3;     // (Q, Y1, X31, X1)
  TypTest t_full;   // (Q, Y1, X21, X31, S1, X1)
};

JointPmf ic_extended_joint(const DetICSpec& spec, const JointPmf& q,
                           const std::array<CondPmf, 3>& x_given_q);

ICDecoderRefs ic_make_decoder_refs(const ICConfig& cfg);

struct ICMsg {
  std::size_t m1 = 0, m2 = 0, m3 = 0;
};

// Candidate m1 iff (Q, X1(m1), X21(m2), X31(m3), S1(m2,m3), y1) is jointly
// typical for SOME (m2, m3); unique-or-error on m1 only.
Verdict ic_decode_nonunique(const ICCodebook& cb, const DetICSpec& spec,
                            const ICDecoderRefs& refs,
                            const std::vector<Symbol>& y1, const ICMsg& truth);

enum class ICSubset { kNone, k2, k3, kBoth };

// Joint-unique component decoders: kNone seeks unique m1 with (Q,X1,y1)
// typical; k2 unique (m1,m2) adding X21; k3 unique (m1,m3) adding X31;
// kBoth unique (m1,m2,m3) over the full tuple including S1.
Verdict ic_decode_component(const ICCodebook& cb, const DetICSpec& spec,
                            const ICDecoderRefs& refs,
                            const std::vector<Symbol>& y1, ICSubset subset,
                            const ICMsg& truth);

// Combines the four component verdicts: error iff all four err or the
// non-erring ones disagree on m1; otherwise the agreed m1. When the
// non-erring components agree on m1 but disagree on an interference index,
// the verdict still stands on m1 and *interference_disagree is set.
Verdict ic_auxiliary_from_components(const std::array<Verdict, 4>& comps,
                                     std::size_t true_m1,
                                     bool* interference_disagree);

Verdict ic_decode_auxiliary(const ICCodebook& cb, const DetICSpec& spec,
                            const ICDecoderRefs& refs,
                            const std::vector<Symbol>& y1, const ICMsg& truth,
                            bool* interference_disagree = nullptr);

// Exponents of the dominant wrong-candidate terms at receiver 1; a negative
// value predicts that term vanishes with n. Entropies and informations are
// over the extended joint above, rates in bits.
struct ICBoundReport {
  // R1 + min{R2, H(X21|Q)} - I(X1,X21; Y1 | Q,X31)
  double single2 = 0;
  // R1 + min{R3, H(X31|Q)} + min{R2, H(X21|Q)} - I(X1,X21,X31; Y1 | Q)
  double pair = 0;
  // as `pair` with the second min capped by H(S1|X31,Q)
  double pair_capped = 0;
  // R1 + min{R2+R3, R2+H(X31|Q), H(X21|Q)+R3, H(S1|Q)} - I(X1,S1; Y1 | Q)
  double combined = 0;

  double max_exponent() const;
};

ICBoundReport ic_bound_exponents(const DetICSpec& spec, const JointPmf& q,
                                 const std::array<CondPmf, 3>& x_given_q,
                                 const std::array<double, 3>& rates);

enum ICDecoderId : int {
  kICNonunique = 0,
  kICCompNone,
  kICComp2,
  kICComp3,
  kICCompBoth,
  kICAux,
  kICNumDecoders
};
extern const std::array<const char*, kICNumDecoders> kICDecoderNames;

struct ICTrialStats {
  long trials = 0;
  std::array<VerdictCounts, kICNumDecoders> decoders{};
  long viol_compboth_implies_nonunique = 0;
  long viol_aux_rule = 0;
  long aux_interference_disagree = 0;  // tracked, not an error
};

// Uniform (m1,m2,m3) per trial, deterministic transmission, all six
// decoders at Y1. Codebook redrawn every fresh_codebook_every trials;
// deterministic under cfg.seed.
ICTrialStats ic_run_trials(const ICConfig& cfg, long trials, long fresh_codebook_every);

}  // namespace ratesim
