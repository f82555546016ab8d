#pragma once

#include <span>
#include <string>
#include <vector>

#include "pidlab/distribution.hpp"

namespace pidlab {

/// An information quantity in bits, optionally annotated with how it was
/// obtained (e.g. "upper bound, residual 3e-9").
struct MeasureValue {
  double bits = 0.0;
  std::string note;
};

/// Marginal probabilities over `vars` (row-major in the given order). In
/// exact mode the sums are exact before rounding.
std::vector<double> marginal_probs(const JointDistribution& dist, const Names& vars);
std::vector<Rational> marginal_exact(const JointDistribution& dist, const Names& vars);

/// Entropy in bits of a probability vector, with 0 log 0 = 0.
double entropy_of(std::span<const double> probs);

double entropy(const JointDistribution& dist, const Names& vars);
double conditional_entropy(const JointDistribution& dist, const Names& vars, const Names& given);

/// I(A;B|given). Throws OverlappingSets when the sets intersect.
double mutual_information(const JointDistribution& dist, const Names& a, const Names& b,
                          const Names& given = {});

/// D(p||q) in bits. Throws SupportMismatch when p has mass where q has none.
double kl_divergence(std::span<const double> p, std::span<const double> q);
double kl_divergence(const JointDistribution& p, const JointDistribution& q);

/// I(A;B) - I(A;B|C).
double co_information(const JointDistribution& dist, const Names& a, const Names& b, const Names& c);

struct MarkovCheck {
  bool holds = false;
  /// max over cells of |p(y)p(x,y,z) - p(x,y)p(y,z)|
  double residual = 0.0;
};

/// Tests X - Y - Z. Exact in rational mode; `tol` bounds the residual in
/// float mode.
MarkovCheck is_markov_chain(const JointDistribution& dist, const Names& x, const Names& y, const Names& z,
                            double tol = 1e-12);

struct DirectedInformation {
  double total = 0.0;
  /// I(X^i ; Y_i | Y^{i-1}) for i = 1..N
  std::vector<double> steps;
  size_t horizon = 0;
};

/// Time-indexed variables are named X1..XN and Y1..YN. Throws BadTimeLabels.
DirectedInformation directed_information(const JointDistribution& dist);

/// Finds N such that X1..XN and Y1..YN all exist. Throws BadTimeLabels.
size_t time_horizon(const JointDistribution& dist);

}  // namespace pidlab
