#include "ratesim/region.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ratesim {

namespace {
constexpr double kRhsTol = 1e-12;
}

const std::array<const char*, kNumRateVars> kRateVarNames = {
    "R0", "S0", "S1", "S2", "S3", "T2", "T3"};

double RateTuple::get(int var) const {
  switch (var) {
    case kR0: return r0;
    case kS0: return s0;
    case kS1: return s1;
    case kS2: return s2;
    case kS3: return s3;
    case kT2: return t2;
    case kT3: return t3;
    default: throw std::invalid_argument("RateTuple: bad variable index");
  }
}

void RateTuple::set(int var, double v) {
  switch (var) {
    case kR0: r0 = v; break;
    case kS0: s0 = v; break;
    case kS1: s1 = v; break;
    case kS2: s2 = v; break;
    case kS3: s3 = v; break;
    case kT2: t2 = v; break;
    case kT3: t3 = v; break;
    default: throw std::invalid_argument("RateTuple: bad variable index");
  }
}

double LinearConstraint::lhs(std::span<const double> x) const {
  double v = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] != 0) v += coeffs[i] * x[i];
  }
  return v;
}

bool LinearConstraint::satisfied(std::span<const double> x, double tol) const {
  double v = lhs(x);
  return rel == Rel::kLe ? v <= rhs + tol : v >= rhs - tol;
}

LinearConstraint LinearConstraint::as_le() const {
  if (rel == Rel::kLe) return *this;
  LinearConstraint c = *this;
  c.rel = Rel::kLe;
  for (int& v : c.coeffs) v = -v;
  c.rhs = -rhs;
  return c;
}

bool ConstraintSystem::satisfied(std::span<const double> x, double tol) const {
  for (const auto& c : constraints) {
    if (!c.satisfied(x, tol)) return false;
  }
  return true;
}

MIProfile mi_profile(const JointPmf& joint7) {
  if (joint7.rank() != 7) throw std::invalid_argument("mi_profile: joint must have 7 dimensions (U,V2,V3,X,Y1,Y2,Y3)");
  // dimension order: U=0, V2=1, V3=2, X=3, Y1=4, Y2=5, Y3=6
  auto I = [&](std::initializer_list<int> a, std::initializer_list<int> b) {
    return mutual_information(joint7, std::span<const int>(a.begin(), a.size()),
                              std::span<const int>(b.begin(), b.size()));
  };
  auto Ic = [&](std::initializer_list<int> a, std::initializer_list<int> b,
                std::initializer_list<int> c) {
    return conditional_mutual_information(
        joint7, std::span<const int>(a.begin(), a.size()),
        std::span<const int>(b.begin(), b.size()),
        std::span<const int>(c.begin(), c.size()));
  };
  MIProfile mi;
  mi.iX_Y1_gUV2V3 = Ic({3}, {4}, {0, 1, 2});
  mi.iX_Y1_gUV3 = Ic({3}, {4}, {0, 2});
  mi.iX_Y1_gUV2 = Ic({3}, {4}, {0, 1});
  mi.iX_Y1_gU = Ic({3}, {4}, {0});
  mi.iX_Y1 = I({3}, {4});
  mi.iU_Y2 = I({0}, {5});
  mi.iUV2_Y2 = I({0, 1}, {5});
  mi.iV2_Y2_gU = Ic({1}, {5}, {0});
  mi.iU_Y3 = I({0}, {6});
  mi.iUV3_Y3 = I({0, 2}, {6});
  mi.iV3_Y3_gU = Ic({2}, {6}, {0});
  mi.iV2_V3_gU = Ic({1}, {2}, {0});
  return mi;
}

namespace {

LinearConstraint row(std::initializer_list<std::pair<int, int>> terms, Rel rel,
                     double rhs, std::string label) {
  LinearConstraint c;
  c.coeffs.assign(kNumRateVars, 0);
  for (auto [var, coef] : terms) c.coeffs[static_cast<std::size_t>(var)] = coef;
  c.rel = rel;
  c.rhs = rhs;
  c.label = std::move(label);
  return c;
}

// Rows shared by every system: rate splits/nonnegativity and the Marton
// encoding constraint, plus the private receiver Y1 constraints.
void append_common_rows(const MIProfile& mi, std::vector<LinearConstraint>& out) {
  out.push_back(row({{kT2, 1}, {kS2, -1}}, Rel::kGe, 0, "split.t2"));
  out.push_back(row({{kT3, 1}, {kS3, -1}}, Rel::kGe, 0, "split.t3"));
  out.push_back(row({{kS0, 1}}, Rel::kGe, 0, "nonneg.s0"));
  out.push_back(row({{kS1, 1}}, Rel::kGe, 0, "nonneg.s1"));
  out.push_back(row({{kS2, 1}}, Rel::kGe, 0, "nonneg.s2"));
  out.push_back(row({{kS3, 1}}, Rel::kGe, 0, "nonneg.s3"));
  out.push_back(row({{kR0, 1}}, Rel::kGe, 0, "nonneg.r0"));
  out.push_back(row({{kT2, 1}, {kT3, 1}, {kS2, -1}, {kS3, -1}}, Rel::kGe,
                    mi.iV2_V3_gU, "encoding"));
  out.push_back(row({{kS1, 1}}, Rel::kLe, mi.iX_Y1_gUV2V3, "y1.s1"));
  out.push_back(row({{kS1, 1}, {kS2, 1}}, Rel::kLe, mi.iX_Y1_gUV3, "y1.s1s2"));
  out.push_back(row({{kS1, 1}, {kS3, 1}}, Rel::kLe, mi.iX_Y1_gUV2, "y1.s1s3"));
  out.push_back(row({{kS1, 1}, {kS2, 1}, {kS3, 1}}, Rel::kLe, mi.iX_Y1_gU, "y1.s1s2s3"));
  out.push_back(row({{kR0, 1}, {kS0, 1}, {kS1, 1}, {kS2, 1}, {kS3, 1}}, Rel::kLe,
                    mi.iX_Y1, "y1.all"));
}

std::vector<std::string> rate_var_names() {
  return {kRateVarNames.begin(), kRateVarNames.end()};
}

}  // namespace

ConstraintSystem build_nonunique_system(const MIProfile& mi) {
  ConstraintSystem sys;
  sys.num_vars = kNumRateVars;
  sys.var_names = rate_var_names();
  sys.label = "nonunique";
  append_common_rows(mi, sys.constraints);
  sys.constraints.push_back(row({{kR0, 1}, {kS0, 1}, {kT2, 1}}, Rel::kLe,
                                mi.iUV2_Y2, "y2.nonunique"));
  sys.constraints.push_back(row({{kR0, 1}, {kS0, 1}, {kT3, 1}}, Rel::kLe,
                                mi.iUV3_Y3, "y3.nonunique"));
  return sys;
}

std::vector<ConstraintSystem> build_jointunique_systems(const MIProfile& mi) {
  std::vector<ConstraintSystem> out;
  for (int ry2 = 0; ry2 < 2; ++ry2) {
    for (int ry3 = 0; ry3 < 2; ++ry3) {
      ConstraintSystem sys;
      sys.num_vars = kNumRateVars;
      sys.var_names = rate_var_names();
      sys.label = std::string("regime-") + (ry2 ? "b" : "a") + (ry3 ? "b" : "a");
      append_common_rows(mi, sys.constraints);
      if (ry2 == 0) {
        sys.constraints.push_back(row({{kR0, 1}, {kS0, 1}}, Rel::kLe, mi.iU_Y2, "y2.regime-a"));
        // The regimes partition points already satisfying the non-unique
        // decoding constraint, so it stays in force in regime (a) as well
        // (in regime (b) it coincides with the cloud-satellite row).
        sys.constraints.push_back(row({{kR0, 1}, {kS0, 1}, {kT2, 1}}, Rel::kLe,
                                      mi.iUV2_Y2, "y2.nonunique"));
      } else {
        sys.constraints.push_back(row({{kR0, 1}, {kS0, 1}, {kT2, 1}}, Rel::kLe,
                                      mi.iUV2_Y2, "y2.regime-b.cloud-satellite"));
        sys.constraints.push_back(row({{kT2, 1}}, Rel::kLe, mi.iV2_Y2_gU, "y2.regime-b.satellite"));
      }
      if (ry3 == 0) {
        sys.constraints.push_back(row({{kR0, 1}, {kS0, 1}}, Rel::kLe, mi.iU_Y3, "y3.regime-a"));
        sys.constraints.push_back(row({{kR0, 1}, {kS0, 1}, {kT3, 1}}, Rel::kLe,
                                      mi.iUV3_Y3, "y3.nonunique"));
      } else {
        sys.constraints.push_back(row({{kR0, 1}, {kS0, 1}, {kT3, 1}}, Rel::kLe,
                                      mi.iUV3_Y3, "y3.regime-b.cloud-satellite"));
        sys.constraints.push_back(row({{kT3, 1}}, Rel::kLe, mi.iV3_Y3_gU, "y3.regime-b.satellite"));
      }
      out.push_back(std::move(sys));
    }
  }
  return out;
}

namespace {

bool is_vacuous(const LinearConstraint& le) {
  for (int v : le.coeffs) {
    if (v != 0) return false;
  }
  return le.rhs >= -kRhsTol;
}

bool all_zero(const LinearConstraint& le) {
  return std::all_of(le.coeffs.begin(), le.coeffs.end(), [](int v) { return v == 0; });
}

void dedup_rows(std::vector<LinearConstraint>& rows) {
  std::vector<LinearConstraint> kept;
  for (auto& r : rows) {
    if (is_vacuous(r)) continue;
    bool merged = false;
    for (auto& k : kept) {
      if (k.coeffs == r.coeffs) {
        if (r.rhs < k.rhs - kRhsTol) k = r;  // keep the tighter row
        merged = true;
        break;
      }
    }
    if (!merged) kept.push_back(std::move(r));
  }
  rows = std::move(kept);
}

}  // namespace

ConstraintSystem fourier_motzkin_eliminate(const ConstraintSystem& sys, int var) {
  if (var < 0 || var >= sys.num_vars) throw std::invalid_argument("fourier_motzkin_eliminate: bad variable index");
  auto v = static_cast<std::size_t>(var);

  std::vector<LinearConstraint> zero, pos, neg;
  for (const auto& c : sys.constraints) {
    LinearConstraint le = c.as_le();
    if (le.coeffs[v] == 0) {
      zero.push_back(std::move(le));
    } else if (le.coeffs[v] > 0) {
      pos.push_back(std::move(le));
    } else {
      neg.push_back(std::move(le));
    }
  }

  // Upper bound row (coef > 0) paired with lower bound row (coef < 0):
  // scale to cancel var, preserving integer coefficients.
  for (const auto& p : pos) {
    for (const auto& q : neg) {
      int sp = -q.coeffs[v];  // > 0
      int sq = p.coeffs[v];   // > 0
      LinearConstraint r;
      r.coeffs.assign(static_cast<std::size_t>(sys.num_vars), 0);
      for (std::size_t i = 0; i < r.coeffs.size(); ++i) {
        r.coeffs[i] = sp * p.coeffs[i] + sq * q.coeffs[i];
      }
      r.rel = Rel::kLe;
      r.rhs = sp * p.rhs + sq * q.rhs;
      int g = 0;
      for (int c : r.coeffs) g = std::gcd(g, std::abs(c));
      if (g > 1) {
        for (int& c : r.coeffs) c /= g;
        r.rhs /= g;
      }
      r.label = p.label + "+" + q.label;
      zero.push_back(std::move(r));
    }
  }

  dedup_rows(zero);
  ConstraintSystem out;
  out.num_vars = sys.num_vars;
  out.var_names = sys.var_names;
  out.label = sys.label;
  out.constraints = std::move(zero);
  return out;
}

bool Region2D::contains(double r0, double r1, double tol) const {
  if (infeasible) return false;
  if (r0 < -tol || r1 < -tol) return false;
  for (const auto& h : halfplanes) {
    if (h.a * r0 + h.b * r1 > h.c + tol) return false;
  }
  return true;
}

std::vector<std::pair<double, double>> Region2D::vertices() const {
  if (infeasible) return {};
  // Boundary lines: halfplanes plus the two axes.
  struct Line { double a, b, c; };
  std::vector<Line> lines;
  for (const auto& h : halfplanes) lines.push_back({double(h.a), double(h.b), h.c});
  lines.push_back({1, 0, 0});
  lines.push_back({0, 1, 0});

  std::vector<std::pair<double, double>> verts;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      double det = lines[i].a * lines[j].b - lines[j].a * lines[i].b;
      if (std::fabs(det) < 1e-12) continue;
      double x = (lines[i].c * lines[j].b - lines[j].c * lines[i].b) / det;
      double y = (lines[i].a * lines[j].c - lines[j].a * lines[i].c) / det;
      if (contains(x, y, 1e-9)) verts.emplace_back(x, y);
    }
  }
  return verts;
}

bool RegionUnion::contains(double r0, double r1, double tol) const {
  for (const auto& p : parts) {
    if (p.contains(r0, r1, tol)) return true;
  }
  return false;
}

namespace {

// Drops halfplanes that do not change the feasible set. A halfplane is
// redundant iff max(a*x+b*y) over the region bounded by the other rows (and
// a large box, to handle unbounded directions) stays <= c.
void prune_redundant(Region2D& reg) {
  constexpr double kBig = 1e6;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < reg.halfplanes.size(); ++i) {
      Region2D rest = reg;
      rest.halfplanes.erase(rest.halfplanes.begin() + static_cast<std::ptrdiff_t>(i));
      Region2D boxed = rest;
      boxed.halfplanes.push_back({1, 0, kBig});
      boxed.halfplanes.push_back({0, 1, kBig});
      double worst = -1e300;
      for (auto [x, y] : boxed.vertices()) {
        worst = std::max(worst, reg.halfplanes[i].a * x + reg.halfplanes[i].b * y);
      }
      if (worst <= reg.halfplanes[i].c + 1e-9) {
        reg.halfplanes = rest.halfplanes;
        changed = true;
        break;
      }
    }
  }
}

}  // namespace

Region2D project_region(const ConstraintSystem& sys) {
  if (sys.num_vars != kNumRateVars) throw std::invalid_argument("project_region: system must be over the 7 rate variables");

  // Substitute S1 = R1 - S0 - S2 - S3: after this rewrite the S1 slot holds
  // R1 and the projection target is (R0, R1).
  ConstraintSystem work = sys;
  work.var_names[kS1] = "R1";
  for (auto& c : work.constraints) {
    int c1 = c.coeffs[kS1];
    if (c1 != 0) {
      c.coeffs[kS0] -= c1;
      c.coeffs[kS2] -= c1;
      c.coeffs[kS3] -= c1;
    }
  }

  for (int var : {kS2, kS3, kS0, kT2, kT3}) {
    work = fourier_motzkin_eliminate(work, var);
  }

  Region2D reg;
  for (const auto& c : work.constraints) {
    LinearConstraint le = c.as_le();
    if (all_zero(le)) {
      if (le.rhs < -kRhsTol) reg.infeasible = true;
      continue;
    }
    int a = le.coeffs[kR0], b = le.coeffs[kS1];
    int g = std::gcd(std::abs(a), std::abs(b));
    if (g > 1) {
      a /= g;
      b /= g;
      le.rhs /= g;
    }
    // Rows only bounding from below duplicate the nonneg orthant or are
    // vacuous for nonnegative rates; keep every row and let pruning decide.
    reg.halfplanes.push_back({a, b, le.rhs});
  }
  if (reg.infeasible) {
    reg.halfplanes.clear();
    return reg;
  }

  // Drop rows that cannot bind over the nonneg orthant (a,b <= 0, c >= 0).
  std::erase_if(reg.halfplanes, [](const Region2D::Halfplane& h) {
    return h.a <= 0 && h.b <= 0 && h.c >= -kRhsTol;
  });
  // Detect emptiness such as {R0 <= -1}.
  for (const auto& h : reg.halfplanes) {
    if (h.a >= 0 && h.b >= 0 && h.c < -kRhsTol) {
      reg.infeasible = true;
      reg.halfplanes.clear();
      return reg;
    }
  }

  prune_redundant(reg);
  std::sort(reg.halfplanes.begin(), reg.halfplanes.end(),
            [](const Region2D::Halfplane& x, const Region2D::Halfplane& y) {
              return std::tie(x.a, x.b, x.c) < std::tie(y.a, y.b, y.c);
            });
  return reg;
}

CompareResult compare_regions(const RegionUnion& a, const RegionUnion& b,
                              double tol, int grid) {
  if (tol <= 0 || grid < 2) throw std::invalid_argument("compare_regions: need tol > 0 and grid >= 2");

  double xmax = 0, ymax = 0;
  for (const RegionUnion* u : {&a, &b}) {
    for (const auto& part : u->parts) {
      for (auto [x, y] : part.vertices()) {
        xmax = std::max(xmax, x);
        ymax = std::max(ymax, y);
      }
    }
  }
  if (xmax <= 0) xmax = 1;
  if (ymax <= 0) ymax = 1;
  // Pad the box so points just outside shared boundaries are probed too.
  xmax *= 1.05;
  ymax *= 1.05;

  auto near_boundary = [&](double x, double y) {
    for (const RegionUnion* u : {&a, &b}) {
      for (const auto& part : u->parts) {
        for (const auto& h : part.halfplanes) {
          double norm = std::hypot(double(h.a), double(h.b));
          if (norm == 0) continue;
          if (std::fabs(h.a * x + h.b * y - h.c) / norm <= tol) return true;
        }
      }
    }
    return false;
  };

  CompareResult res;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      double x = xmax * i / (grid - 1);
      double y = ymax * j / (grid - 1);
      if (near_boundary(x, y)) continue;
      bool ina = a.contains(x, y);
      bool inb = b.contains(x, y);
      if (ina && !inb && !res.witness_a_only) res.witness_a_only = {x, y};
      if (inb && !ina && !res.witness_b_only) res.witness_b_only = {x, y};
    }
  }
  if (res.witness_a_only) {
    res.verdict = CompareResult::Verdict::kANotSubsetB;
  } else if (res.witness_b_only) {
    res.verdict = CompareResult::Verdict::kBNotSubsetA;
  } else {
    res.verdict = CompareResult::Verdict::kEqual;
  }
  return res;
}

RegimeVerdict regime_predicate(const MIProfile& mi, const RateTuple& t, double band) {
  if (band <= 0) throw std::invalid_argument("regime_predicate: band must be > 0");
  auto classify = [&](double iU_Yk) {
    double lhs = t.r0 + t.s0;
    if (lhs < iU_Yk - band) return Regime::kA;
    if (lhs > iU_Yk + band) return Regime::kB;
    return Regime::kBoundary;
  };
  return {classify(mi.iU_Y2), classify(mi.iU_Y3)};
}

}  // namespace ratesim
