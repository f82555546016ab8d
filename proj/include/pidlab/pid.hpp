#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pidlab/aux_optimizer.hpp"
#include "pidlab/distribution.hpp"
#include "pidlab/measures.hpp"

namespace pidlab {

/// Which variables play the predictor and target roles.
struct Roles {
  std::string x1 = "X1";
  std::string x2 = "X2";
  std::string y = "Y";
};

enum class Measure { I1, I2, I3, I4, I4Max, C2GK };

std::string measure_name(Measure m);
/// Accepts i1, i2, i3, i4, i4max, c2gk. Throws UnimplementedMeasure.
Measure parse_measure(std::string_view name);

struct PidOptions {
  Roles roles;
  AuxOptions aux = [] {
    AuxOptions o;
    o.restarts = 3;
    o.max_iters = 200;
    return o;
  }();
  /// Certificate threshold for the mixture projections.
  double projection_tol = 1e-9;
  size_t projection_iters = 200000;
  size_t polytope_iters = 3000;
  /// Also evaluate the maximizing variant of i4 for comparison.
  bool i4_both = true;
};

struct PidResult {
  std::string measure;
  MeasureValue redundancy;
  MeasureValue unique1;
  MeasureValue unique2;
  MeasureValue synergy;
  double total = 0.0;
  double consistency_residual = 0.0;
  /// Redundancy of the other i4 variant when both were computed.
  std::optional<double> alternate_redundancy;
  std::string note;
};

/// I(X1 ^ X2 ; Y), exact.
MeasureValue i_cap_1(const JointDistribution& dist, const Roles& roles = {});

struct RedundancySolution {
  AuxSolution solution;
  /// Best deterministic Q = f(X1), f(X2) or f(X1,X2).
  double deterministic = 0.0;
  bool disagreement = false;
};

/// max I(Q;Y) subject to Q - X1 - Y and Q - X2 - Y.
RedundancySolution i_cap_2(const JointDistribution& dist, const PidOptions& opts = {});

struct UniqueSolution {
  AuxSolution solution;
  /// Gap of I(Y;X1) + I(X2;Y|Q) = I(Y;X2) + I(X1;Y|Q) at the witness.
  double symmetry_gap = 0.0;
};

/// min I(X_which;Y|Q) under the same constraints; which is 1 or 2.
UniqueSolution ui_2(const JointDistribution& dist, int which, const PidOptions& opts = {});

/// C_GK(X1 ^ X2 ; Y).
MeasureValue c_cap_2(const JointDistribution& dist, const Roles& roles = {});

struct ProjectionResult {
  MeasureValue redundancy;
  /// Weighted projection divergences for X1 onto the X2 hull and vice versa.
  double ui1 = 0.0;
  double ui2 = 0.0;
  /// Largest certificate gap across all projections.
  double certificate = 0.0;
};

/// Reverse information projections; throws NonConvergence when a certificate
/// stays above 1e-6.
ProjectionResult i_cap_3(const JointDistribution& dist, const PidOptions& opts = {});

struct PolytopeResult {
  MeasureValue redundancy;
  /// Optimal I(X1;Y|X2) over the marginal polytope.
  double unique1 = 0.0;
  /// Optimal I(X1 X2;Y) over the polytope.
  double joint = 0.0;
  bool maximize = false;
  size_t iterations = 0;
};

/// Unique information optimized over joint distributions sharing the
/// (X1,Y) and (X2,Y) marginals. Minimizes by default.
PolytopeResult i_cap_4(const JointDistribution& dist, bool maximize = false, const PidOptions& opts = {});

PidResult decompose(const JointDistribution& dist, Measure measure, const PidOptions& opts = {});

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
  double co_information = 0.0;
  bool holds = true;
};

Bounds bounds_check(const JointDistribution& dist, const Roles& roles = {});

struct DiStep {
  size_t step = 0;
  PidResult result;
  /// I(X^i ; Y_i | Y^{i-1}) = unique(X^i) + synergy.
  double conditional_total = 0.0;
};

struct DiDecomposition {
  std::vector<DiStep> steps;
  double directed_information = 0.0;
  /// |sum of conditional totals - directed information|
  double gap = 0.0;
};

/// Per-step decomposition with predictors X^i and Y^{i-1} and target Y_i.
DiDecomposition di_decompose(const JointDistribution& dist, Measure measure, const PidOptions& opts = {});

enum class DiagramFormat { Text, Svg };
std::string render_pi_diagram(const PidResult& result, DiagramFormat format);

}  // namespace pidlab
