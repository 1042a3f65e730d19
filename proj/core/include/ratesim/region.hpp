#pragma once

// Rate-region machinery: the linear constraint systems over the seven rate
// variables, Fourier-Motzkin elimination, projection to the (R0,R1) plane,
// grid-based region comparison, and the per-receiver operating-regime
// predicate.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ratesim/prob.hpp"

namespace ratesim {

// Shared rate-variable order for every constraint system.
enum RateVar : int { kR0 = 0, kS0, kS1, kS2, kS3, kT2, kT3, kNumRateVars };
extern const std::array<const char*, kNumRateVars> kRateVarNames;

// A candidate operating point. R1 is derived, not free: the split identity
// R1 = S0+S1+S2+S3 is treated as a definition so no equality constraint is
// ever needed.
struct RateTuple {
  double r0 = 0, s0 = 0, s1 = 0, s2 = 0, s3 = 0, t2 = 0, t3 = 0;

  double r1() const { return s0 + s1 + s2 + s3; }
  double get(int var) const;
  void set(int var, double v);
};

// The twelve mutual-information quantities (bits) appearing on constraint
// right-hand sides for one channel + auxiliary distribution.
struct MIProfile {
  double iX_Y1_gUV2V3 = 0;  // I(X;Y1|U,V2,V3)
  double iX_Y1_gUV3 = 0;    // I(X;Y1|U,V3)
  double iX_Y1_gUV2 = 0;    // I(X;Y1|U,V2)
  double iX_Y1_gU = 0;      // I(X;Y1|U)
  double iX_Y1 = 0;         // I(X;Y1)
  double iU_Y2 = 0;         // I(U;Y2)
  double iUV2_Y2 = 0;       // I(U,V2;Y2)
  double iV2_Y2_gU = 0;     // I(V2;Y2|U)
  double iU_Y3 = 0;         // I(U;Y3)
  double iUV3_Y3 = 0;       // I(U,V3;Y3)
  double iV3_Y3_gU = 0;     // I(V3;Y3|U)
  double iV2_V3_gU = 0;     // I(V2;V3|U)
};

enum class Rel { kLe, kGe };

// Integer coefficients, real right-hand side: sum(coeffs[i]*x[i]) rel rhs.
struct LinearConstraint {
  std::vector<int> coeffs;
  Rel rel = Rel::kLe;
  double rhs = 0;
  std::string label;

  double lhs(std::span<const double> x) const;
  bool satisfied(std::span<const double> x, double tol) const;
  LinearConstraint as_le() const;  // flip a >= constraint to <= form
};

struct ConstraintSystem {
  int num_vars = 0;
  std::vector<std::string> var_names;
  std::vector<LinearConstraint> constraints;
  std::string label;

  bool satisfied(std::span<const double> x, double tol) const;
};

// Computes the MI profile from the 7-variable joint in the fixed dimension
// order (U, V2, V3, X, Y1, Y2, Y3).
MIProfile mi_profile(const JointPmf& joint7);

// Constraint system for the non-unique decoding scheme: rate splits and
// nonnegativity, the Marton encoding constraint, the five private-receiver
// constraints, and one constraint per degraded receiver. Labels identify the
// originating inequality (the split identity is definitional and emits no
// row; nonnegativity contributes four rows under one label family, plus an
// R0 >= 0 row required for bounded sampling).
ConstraintSystem build_nonunique_system(const MIProfile& mi);

// The joint-unique region as the union of four systems: at each degraded
// receiver the decoder operates in regime A (cloud-only decoding,
// R0+S0 <= I(U;Yk)) or regime B (cloud+satellite decoding,
// R0+S0+Tk <= I(U,Vk;Yk) and Tk <= I(Vk;Yk|U)). Labels: aa, ab, ba, bb.
std::vector<ConstraintSystem> build_jointunique_systems(const MIProfile& mi);

// Eliminates one variable; the result has zero coefficients on `var` and a
// point extends to a feasible value of `var` iff it satisfies the result.
// Duplicate rows are pruned by exact coefficient comparison (keeping the
// tighter RHS, tolerance 1e-12); vacuous rows are dropped.
ConstraintSystem fourier_motzkin_eliminate(const ConstraintSystem& sys, int var);

// Projected polygon in the (R0,R1) plane: halfplanes a*R0 + b*R1 <= c plus
// the implicit nonnegative orthant.
struct Region2D {
  struct Halfplane {
    int a = 0, b = 0;
    double c = 0;
  };
  std::vector<Halfplane> halfplanes;
  bool infeasible = false;

  bool contains(double r0, double r1, double tol = 0.0) const;
  // Polygon vertices (intersections of active boundary lines incl. axes).
  std::vector<std::pair<double, double>> vertices() const;
};

// Projects a 7-variable rate system to (R0,R1): substitutes the split
// identity so the S1 slot becomes R1, eliminates the remaining auxiliaries,
// gcd-reduces coefficients, and prunes redundant halfplanes so the output is
// a minimal representation.
Region2D project_region(const ConstraintSystem& sys);

struct RegionUnion {
  std::vector<Region2D> parts;
  bool contains(double r0, double r1, double tol = 0.0) const;
};

struct CompareResult {
  enum class Verdict { kEqual, kANotSubsetB, kBNotSubsetA };
  Verdict verdict = Verdict::kEqual;
  // Witness points found on the comparison grid (if any) for each direction.
  std::optional<std::pair<double, double>> witness_a_only;
  std::optional<std::pair<double, double>> witness_b_only;
};

// Membership comparison on a grid x grid lattice over the joint bounding box;
// lattice points within `tol` of any halfplane boundary of either union are
// skipped. Verdict is kEqual iff no witness is found in either direction.
CompareResult compare_regions(const RegionUnion& a, const RegionUnion& b,
                              double tol, int grid);

enum class Regime { kA, kB, kBoundary };
struct RegimeVerdict {
  Regime y2 = Regime::kA;
  Regime y3 = Regime::kA;
};

// Operating-regime split at each degraded receiver: A if R0+S0 is below
// I(U;Yk) by more than `band`, Boundary within the band, B above. The band
// excludes the measure-zero boundary where neither component decoder is
// guaranteed.
RegimeVerdict regime_predicate(const MIProfile& mi, const RateTuple& t,
                               double band = 1e-9);

}  // namespace ratesim
