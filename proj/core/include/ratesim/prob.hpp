#pragma once

// Finite-alphabet probability: joint pmfs over products of finite alphabets,
// marginalization, conditioning, channel composition, and information
// measures in bits. All types are immutable after construction and all
// operations are pure.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ratesim {

// A finite alphabet: a size plus optional display labels.
struct Alphabet {
  int size = 0;
  std::vector<std::string> labels;  // empty, or exactly `size` distinct entries
};

// Normalized pmf over a product of finite alphabets. Probabilities are stored
// flat in row-major order (last dimension varies fastest); that layout is the
// canonical exchange format across the library.
class JointPmf {
 public:
  JointPmf() = default;
  // Validates: dims all >= 1, probs length == product(dims), entries >= 0,
  // sum within 1e-12 of 1. Throws std::invalid_argument otherwise.
  JointPmf(std::vector<int> dims, std::vector<double> probs);

  const std::vector<int>& dims() const { return dims_; }
  int rank() const { return static_cast<int>(dims_.size()); }
  std::size_t size() const { return p_.size(); }
  const std::vector<double>& probs() const { return p_; }

  double operator[](std::size_t flat) const { return p_[flat]; }
  double at(std::span<const int> idx) const { return p_[flat_index(idx)]; }

  std::size_t flat_index(std::span<const int> idx) const;
  void unflatten(std::size_t flat, std::span<int> out) const;

 private:
  std::vector<int> dims_;
  std::vector<double> p_;
};

// Conditional pmf: for every input cell a pmf over the output product space.
// Rows whose conditioning event has zero probability are flagged undefined
// and are excluded from downstream averages.
struct CondPmf {
  std::vector<int> in_dims;
  std::vector<int> out_dims;
  std::vector<double> rows;    // [flat(in) * out_size + flat(out)]
  std::vector<bool> defined;   // per input cell

  std::size_t in_size() const;
  std::size_t out_size() const;
  std::span<const double> row(std::size_t in_flat) const;
};

// Builds a channel from explicit rows; validates each row is a pmf
// (row-stochastic within 1e-12). Throws std::invalid_argument on violation.
CondPmf make_cond_pmf(std::vector<int> in_dims, std::vector<int> out_dims,
                      std::vector<double> rows);

// Sums out every dimension not in `keep`; result dims follow `keep` order
// (which may reorder dimensions). Throws on invalid/duplicate indices.
JointPmf marginalize(const JointPmf& p, std::span<const int> keep);

// p(rest | given): one row per `given` cell, over the remaining dimensions in
// their original order. Zero-mass rows are flagged undefined, never NaN.
CondPmf condition(const JointPmf& p, std::span<const int> given);

// Joint over (source dims..., ch out dims...) where the channel conditions on
// the trailing dimensions of `source` (ch.in_dims must equal that suffix).
// result(s, y) = source(s) * ch(y | suffix(s)).
JointPmf chain_compose(const JointPmf& source, const CondPmf& ch);

// -sum p log2 p with 0*log0 := 0. Result clamped to [0, inf).
double entropy(const JointPmf& p);

// Entropy of the marginal over `vars`.
double entropy_of(const JointPmf& p, std::span<const int> vars);

// I(A;B) = H(A)+H(B)-H(A,B), bits; tiny negative fp residue clamped to 0.
// Throws if A and B overlap.
double mutual_information(const JointPmf& p, std::span<const int> a,
                          std::span<const int> b);

// I(A;B|C) = H(A,C)+H(B,C)-H(A,B,C)-H(C), bits, clamped like MI.
// Throws if the index sets are not pairwise disjoint.
double conditional_mutual_information(const JointPmf& p,
                                      std::span<const int> a,
                                      std::span<const int> b,
                                      std::span<const int> c);

}  // namespace ratesim
