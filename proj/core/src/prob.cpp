#include "ratesim/prob.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ratesim {

namespace {

constexpr double kSumTol = 1e-12;

std::size_t product(std::span<const int> dims) {
  std::size_t n = 1;
  for (int d : dims) n *= static_cast<std::size_t>(d);
  return n;
}

void check_indices(std::span<const int> idx, int rank, const char* what) {
  std::vector<bool> seen(static_cast<std::size_t>(rank), false);
  for (int i : idx) {
    if (i < 0 || i >= rank) throw std::invalid_argument(std::string(what) + ": index out of range");
    if (seen[static_cast<std::size_t>(i)]) throw std::invalid_argument(std::string(what) + ": duplicate index");
    seen[static_cast<std::size_t>(i)] = true;
  }
}

double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace

JointPmf::JointPmf(std::vector<int> dims, std::vector<double> probs)
    : dims_(std::move(dims)), p_(std::move(probs)) {
  if (dims_.empty()) throw std::invalid_argument("JointPmf: empty dims");
  for (int d : dims_) {
    if (d < 1) throw std::invalid_argument("JointPmf: dimension < 1");
  }
  if (p_.size() != product(dims_)) throw std::invalid_argument("JointPmf: probs length != product(dims)");
  double sum = 0.0;
  for (double v : p_) {
    if (v < 0.0) throw std::invalid_argument("JointPmf: negative entry");
    sum += v;
  }
  if (std::fabs(sum - 1.0) > kSumTol) throw std::invalid_argument("JointPmf: entries do not sum to 1");
}

std::size_t JointPmf::flat_index(std::span<const int> idx) const {
  if (idx.size() != dims_.size()) throw std::invalid_argument("JointPmf: index rank mismatch");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= dims_[k]) throw std::invalid_argument("JointPmf: index out of range");
    flat = flat * static_cast<std::size_t>(dims_[k]) + static_cast<std::size_t>(idx[k]);
  }
  return flat;
}

void JointPmf::unflatten(std::size_t flat, std::span<int> out) const {
  for (std::size_t k = dims_.size(); k-- > 0;) {
    auto d = static_cast<std::size_t>(dims_[k]);
    out[k] = static_cast<int>(flat % d);
    flat /= d;
  }
}

std::size_t CondPmf::in_size() const { return product(in_dims); }
std::size_t CondPmf::out_size() const { return product(out_dims); }

std::span<const double> CondPmf::row(std::size_t in_flat) const {
  std::size_t w = out_size();
  return {rows.data() + in_flat * w, w};
}

CondPmf make_cond_pmf(std::vector<int> in_dims, std::vector<int> out_dims,
                      std::vector<double> rows) {
  CondPmf c;
  c.in_dims = std::move(in_dims);
  c.out_dims = std::move(out_dims);
  c.rows = std::move(rows);
  std::size_t in_n = c.in_size(), out_n = c.out_size();
  if (c.rows.size() != in_n * out_n) throw std::invalid_argument("CondPmf: rows length mismatch");
  for (std::size_t i = 0; i < in_n; ++i) {
    double sum = 0.0;
    for (double v : c.row(i)) {
      if (v < 0.0) throw std::invalid_argument("CondPmf: negative entry");
      sum += v;
    }
    if (std::fabs(sum - 1.0) > kSumTol) throw std::invalid_argument("CondPmf: row does not sum to 1");
  }
  c.defined.assign(in_n, true);
  return c;
}

JointPmf marginalize(const JointPmf& p, std::span<const int> keep) {
  check_indices(keep, p.rank(), "marginalize");
  std::vector<int> out_dims(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) out_dims[k] = p.dims()[static_cast<std::size_t>(keep[k])];
  std::vector<double> out(product(out_dims), 0.0);

  std::vector<int> idx(static_cast<std::size_t>(p.rank()));
  for (std::size_t flat = 0; flat < p.size(); ++flat) {
    double v = p[flat];
    if (v == 0.0) continue;
    p.unflatten(flat, idx);
    std::size_t oflat = 0;
    for (std::size_t k = 0; k < keep.size(); ++k) {
      oflat = oflat * static_cast<std::size_t>(out_dims[k]) + static_cast<std::size_t>(idx[static_cast<std::size_t>(keep[k])]);
    }
    out[oflat] += v;
  }
  // renormalize away accumulated rounding so downstream validation holds
  double sum = 0.0;
  for (double v : out) sum += v;
  for (double& v : out) v /= sum;
  return JointPmf(std::move(out_dims), std::move(out));
}

CondPmf condition(const JointPmf& p, std::span<const int> given) {
  check_indices(given, p.rank(), "condition");
  std::vector<bool> is_given(static_cast<std::size_t>(p.rank()), false);
  for (int g : given) is_given[static_cast<std::size_t>(g)] = true;
  std::vector<int> rest;
  for (int k = 0; k < p.rank(); ++k) {
    if (!is_given[static_cast<std::size_t>(k)]) rest.push_back(k);
  }

  CondPmf c;
  for (int g : given) c.in_dims.push_back(p.dims()[static_cast<std::size_t>(g)]);
  for (int r : rest) c.out_dims.push_back(p.dims()[static_cast<std::size_t>(r)]);
  std::size_t in_n = c.in_size(), out_n = c.out_size();
  c.rows.assign(in_n * out_n, 0.0);

  std::vector<double> mass(in_n, 0.0);
  std::vector<int> idx(static_cast<std::size_t>(p.rank()));
  for (std::size_t flat = 0; flat < p.size(); ++flat) {
    double v = p[flat];
    p.unflatten(flat, idx);
    std::size_t gflat = 0;
    for (std::size_t k = 0; k < given.size(); ++k) {
      gflat = gflat * static_cast<std::size_t>(c.in_dims[k]) + static_cast<std::size_t>(idx[static_cast<std::size_t>(given[k])]);
    }
    std::size_t rflat = 0;
    for (std::size_t k = 0; k < rest.size(); ++k) {
      rflat = rflat * static_cast<std::size_t>(c.out_dims[k]) + static_cast<std::size_t>(idx[static_cast<std::size_t>(rest[k])]);
    }
    c.rows[gflat * out_n + rflat] += v;
    mass[gflat] += v;
  }
  c.defined.assign(in_n, false);
  for (std::size_t g = 0; g < in_n; ++g) {
    if (mass[g] > 0.0) {
      c.defined[g] = true;
      for (std::size_t r = 0; r < out_n; ++r) c.rows[g * out_n + r] /= mass[g];
    }
  }
  return c;
}

JointPmf chain_compose(const JointPmf& source, const CondPmf& ch) {
  std::size_t in_rank = ch.in_dims.size();
  if (in_rank > source.dims().size()) throw std::invalid_argument("chain_compose: channel input rank exceeds source rank");
  std::size_t off = source.dims().size() - in_rank;
  for (std::size_t k = 0; k < in_rank; ++k) {
    if (source.dims()[off + k] != ch.in_dims[k]) throw std::invalid_argument("chain_compose: channel input dims do not match source suffix");
  }
  std::vector<int> out_dims(source.dims());
  out_dims.insert(out_dims.end(), ch.out_dims.begin(), ch.out_dims.end());

  std::size_t in_n = ch.in_size(), out_n = ch.out_size();
  std::vector<double> out(source.size() * out_n, 0.0);
  for (std::size_t s = 0; s < source.size(); ++s) {
    double v = source[s];
    if (v == 0.0) continue;
    std::size_t in_flat = s % in_n;  // trailing dims are the fastest-varying
    auto row = ch.row(in_flat);
    for (std::size_t y = 0; y < out_n; ++y) out[s * out_n + y] = v * row[y];
  }
  return JointPmf(std::move(out_dims), std::move(out));
}

double entropy(const JointPmf& p) {
  double h = 0.0;
  for (double v : p.probs()) h -= xlog2x(v);
  return h < 0.0 ? 0.0 : h;
}

double entropy_of(const JointPmf& p, std::span<const int> vars) {
  return entropy(marginalize(p, vars));
}

namespace {

std::vector<int> joined(std::span<const int> a, std::span<const int> b) {
  std::vector<int> v(a.begin(), a.end());
  v.insert(v.end(), b.begin(), b.end());
  return v;
}

void check_disjoint(std::span<const int> a, std::span<const int> b, const char* what) {
  for (int i : a) {
    for (int j : b) {
      if (i == j) throw std::invalid_argument(std::string(what) + ": overlapping index sets");
    }
  }
}

}  // namespace

double mutual_information(const JointPmf& p, std::span<const int> a,
                          std::span<const int> b) {
  check_disjoint(a, b, "mutual_information");
  double v = entropy_of(p, a) + entropy_of(p, b) - entropy_of(p, joined(a, b));
  return v < 0.0 ? 0.0 : v;
}

double conditional_mutual_information(const JointPmf& p,
                                      std::span<const int> a,
                                      std::span<const int> b,
                                      std::span<const int> c) {
  check_disjoint(a, b, "conditional_mutual_information");
  check_disjoint(a, c, "conditional_mutual_information");
  check_disjoint(b, c, "conditional_mutual_information");
  double v = entropy_of(p, joined(a, c)) + entropy_of(p, joined(b, c)) -
             entropy_of(p, joined(joined(a, b), c)) - entropy_of(p, c);
  return v < 0.0 ? 0.0 : v;
}

}  // namespace ratesim
