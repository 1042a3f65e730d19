#include "ratesim/typicality.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace ratesim {

TypTest::TypTest(const JointPmf& ref, int n, double eps)
    : dims_(ref.dims()), n_(n) {
  if (n < 1) throw std::invalid_argument("TypTest: n must be >= 1");
  if (eps <= 0) throw std::invalid_argument("TypTest: eps must be > 0");
  lo_.resize(ref.size());
  hi_.resize(ref.size());
  for (std::size_t c = 0; c < ref.size(); ++c) {
    double p = ref[c];
    if (p == 0.0) {
      lo_[c] = 0;
      hi_[c] = 0;
    } else {
      // Small slack absorbs fp error in n*p*(1 +/- eps) at representable
      // boundaries so that exact-frequency sequences test true.
      lo_[c] = static_cast<std::int32_t>(std::ceil(n * p * (1.0 - eps) - 1e-9));
      hi_[c] = static_cast<std::int32_t>(std::floor(n * p * (1.0 + eps) + 1e-9));
      if (lo_[c] < 0) lo_[c] = 0;
    }
  }
  stride_.assign(dims_.size(), 1);
  for (std::size_t k = dims_.size() - 1; k-- > 0;) {
    stride_[k] = stride_[k + 1] * dims_[k + 1];
  }
}

bool TypTest::check_counts(const std::int32_t* counts) const {
  for (std::size_t c = 0; c < lo_.size(); ++c) {
    if (counts[c] < lo_[c] || counts[c] > hi_[c]) return false;
  }
  return true;
}

bool TypTest::test(const Symbol* const* seqs, std::int32_t* scratch) const {
  std::memset(scratch, 0, cells() * sizeof(std::int32_t));
  const auto arity = dims_.size();
  for (int i = 0; i < n_; ++i) {
    std::int32_t idx = 0;
    for (std::size_t k = 0; k < arity; ++k) idx += stride_[k] * seqs[k][i];
    ++scratch[idx];
  }
  return check_counts(scratch);
}

void TypTest::bind(const Symbol* const* prefix_seqs, std::int32_t* ctx) const {
  const auto arity = dims_.size();
  for (int i = 0; i < n_; ++i) {
    std::int32_t idx = 0;
    for (std::size_t k = 0; k + 1 < arity; ++k) idx += stride_[k] * prefix_seqs[k][i];
    ctx[i] = idx;
  }
}

bool TypTest::test_bound(const std::int32_t* ctx, const Symbol* last,
                         std::int32_t* scratch) const {
  std::memset(scratch, 0, cells() * sizeof(std::int32_t));
  for (int i = 0; i < n_; ++i) ++scratch[ctx[i] + last[i]];
  return check_counts(scratch);
}

bool is_jointly_typical(std::span<const std::vector<Symbol>* const> seqs,
                        const JointPmf& ref, double eps) {
  if (seqs.size() != static_cast<std::size_t>(ref.rank())) {
    throw std::invalid_argument("is_jointly_typical: tuple arity does not match ref dims");
  }
  if (seqs.empty()) throw std::invalid_argument("is_jointly_typical: empty tuple");
  std::size_t n = seqs[0]->size();
  for (const auto* s : seqs) {
    if (s->size() != n) throw std::invalid_argument("is_jointly_typical: sequence length mismatch");
  }
  TypTest t(ref, static_cast<int>(n), eps);
  std::vector<const Symbol*> ptrs;
  ptrs.reserve(seqs.size());
  for (const auto* s : seqs) ptrs.push_back(s->data());
  std::vector<std::int32_t> scratch(t.cells());
  return t.test(ptrs.data(), scratch.data());
}

}  // namespace ratesim
