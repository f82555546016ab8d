#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pidlab/aux_optimizer.hpp"
#include "pidlab/distribution.hpp"
#include "pidlab/measures.hpp"

namespace pidlab {

/// Maximal common random variable of several variable groups: one label per
/// positive-probability outcome of the designated variables.
struct CommonRV {
  Names vars;
  /// Positive outcomes of `vars` (symbol indices), in table order.
  std::vector<std::vector<size_t>> outcomes;
  /// Component id of each outcome; ids follow first appearance.
  std::vector<size_t> labeling;
  size_t components = 0;
  std::vector<double> masses;
  /// Exact component masses (empty in float mode).
  std::vector<Rational> exact_masses;
  MeasureValue entropy;

  /// Label of an outcome of `vars`; throws BadParams for a zero-mass outcome.
  size_t label_of(std::span<const size_t> outcome) const;
};

/// Ergodic decomposition of the multipartite support graph. Float inputs are
/// snapped at 1e-12 first and the result carries a note.
CommonRV gacs_korner(const JointDistribution& dist, const std::vector<Names>& groups);

/// `dist` with the common variable appended under `name` (exact when possible).
JointDistribution with_common(const JointDistribution& dist, const CommonRV& common, const std::string& name);

/// I(X;Y|Q*) vanishes: exact in rational mode, at most 1e-9 bits in float mode.
bool is_saturable(const JointDistribution& dist, const Names& x, const Names& y);

struct SufficientStatistic {
  Names of;
  Names wrt;
  /// Outcome labels of `of` grouped by equal conditional rows p(wrt | of).
  std::vector<std::vector<std::string>> classes;
  std::vector<std::vector<size_t>> class_outcomes;
  /// p(wrt | class), one row per class over the outcomes of `wrt`.
  std::vector<std::vector<double>> representatives;
  std::vector<double> masses;
  /// H(Q) and H(of | Q).
  MeasureValue common;
  MeasureValue residual_private;
  /// |H(of) - H(Q) - H(of|Q)|
  double sum_rule_gap = 0.0;
};

/// Groups outcomes of `of` by identical p(wrt | of): exact comparison in
/// rational mode, L-infinity at most 1e-9 in float mode.
SufficientStatistic minimal_sufficient_statistic(const JointDistribution& dist, const Names& of, const Names& wrt);

enum class ComponentClass { Minimum, Maximum, Both, Intermediate };
std::string component_class_name(ComponentClass c);

struct ComponentDecomposition {
  struct Component {
    std::vector<std::string> xs;
    std::vector<std::string> ys;
  };
  std::vector<Component> components;
  std::vector<size_t> sizes;
  ComponentClass classification = ComponentClass::Intermediate;
  bool saturable = false;
  /// Each component coincides with an ergodic component.
  bool matches_ergodic = false;
  double private_part = 0.0;
  double h_y_given_x = 0.0;
  size_t merges = 0;
};

/// Components of (X, Y) built from the sufficient-statistic classes of Y.
ComponentDecomposition component_decomposition(const JointDistribution& dist, const Names& x, const Names& y);

struct DoubleMarkovReport {
  CommonRV q_prime;
  double h_given_x = 0.0;
  double h_given_y = 0.0;
  MarkovCheck xy_qprime_q;
  double i_xy_q = 0.0;
  /// I(XY;Q) equals H(Q') within 1e-9.
  bool attains = false;
};

/// Throws NotDoublyMarkov unless X - Y - Q and Y - X - Q hold.
DoubleMarkovReport double_markov_reduce(const JointDistribution& dist, const Names& x, const Names& y,
                                        const Names& q);

struct WynerResult {
  AuxSolution solution;
  /// H(XY) minus the value.
  MeasureValue total_private;
};

WynerResult wyner_ci(const JointDistribution& dist, const Names& x, const Names& y, const AuxOptions& opts = {});
AuxSolution common_entropy(const JointDistribution& dist, const Names& x, const Names& y,
                           const AuxOptions& opts = {});
/// min I(Y;Q|X) + I(X;Q|Y) + I(X;Y|Q)
AuxSolution c1_measure(const JointDistribution& dist, const Names& x, const Names& y, const AuxOptions& opts = {});

/// Second singular value of p(x,y)/sqrt(p(x)p(y)). Exactly 1 when the support
/// graph is disconnected, otherwise strictly below 1.
MeasureValue hgr_maximal_correlation(const JointDistribution& dist, const Names& x, const Names& y,
                                     bool restrict_support = true);

struct IbPoint {
  double beta = 0.0;
  double rate = 0.0;
  double relevance = 0.0;
  bool converged = true;
};

struct IbOptions {
  size_t restarts = 16;
  size_t max_iters = 500;
  double tol = 1e-10;
  uint64_t seed = 1;
};

/// Information bottleneck: Q drawn from `of`, rate I(Q;of), relevance
/// I(Q;about), |Q| = |of| + 1. The curve is sorted by rate and reports the best
/// relevance reached at equal or lower rate.
std::vector<IbPoint> ib_curve(const JointDistribution& dist, const Names& of, const Names& about,
                              const std::vector<double>& betas, const IbOptions& opts = {});

}  // namespace pidlab
