#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pidlab/distribution.hpp"
#include "pidlab/measures.hpp"

namespace pidlab {

/// coef * I(a;b|given), or coef * H(a|given) when b is empty. Names may
/// include the auxiliary variable (AuxProblem::q_name).
struct InfoTerm {
  double coef = 1.0;
  Names a;
  Names b;
  Names given;
};

/// a - b - c, enforced as I(a;c|b) = 0.
struct MarkovConstraint {
  Names a;
  Names b;
  Names c;
};

enum class Direction { Minimize, Maximize };

enum class BoundKind { Upper, Lower, Exact, ExactWithinClass };
std::string bound_kind_name(BoundKind k);

struct AuxProblem {
  JointDistribution base;
  /// Alphabet size of Q; 0 selects min(|conditioning support| + 2, 8).
  size_t q_card = 0;
  /// Q is drawn from p(q | conditioning); empty means every base variable.
  Names conditioning;
  std::vector<InfoTerm> objective;
  std::vector<MarkovConstraint> constraints;
  Direction direction = Direction::Minimize;
  std::string q_name = "Q";
};

/// p(q | c) with one row per positive-mass value c of the conditioning
/// variables, in table order.
using Conditional = std::vector<std::vector<double>>;

struct AuxOptions {
  size_t restarts = 8;
  std::vector<double> penalties{1e1, 1e2, 1e3, 1e4, 1e5, 1e6};
  /// Largest constraint conditional MI (bits) for a point to count as feasible.
  double tol = 1e-6;
  uint64_t seed = 1;
  size_t max_iters = 300;
  /// Starting points tried before the random restarts. Rows whose width
  /// differs from the Q alphabet are padded with zeros or rejected.
  std::vector<Conditional> warm_starts;
  /// |Q| for problems built by the library; 0 keeps their default.
  size_t q_card = 0;
  /// Permit |Q| above 8.
  bool allow_large_q = false;
  /// One line per penalty stage when set.
  std::ostream* trace = nullptr;
};

struct AuxSolution {
  MeasureValue value;
  Conditional witness;
  /// Labels of the conditioning values, one per witness row.
  std::vector<std::vector<std::string>> rows;
  Names conditioning;
  double residual = 0.0;
  size_t restarts_used = 0;
  size_t iterations = 0;
  BoundKind bound = BoundKind::Upper;
};

/// Penalized mirror descent on the conditional simplex from warm starts and
/// seeded random starts. Returns the best point whose residual is within tol.
/// Throws Infeasible when no such point was reached and BadProblem for
/// malformed terms. Deterministic given the options.
AuxSolution solve(const AuxProblem& problem, const AuxOptions& opts = {});

/// Scores every deterministic map Q = f(conditioning) with at most f_card_cap
/// values. Throws TooLarge above 10^7 candidates and Infeasible when no map
/// satisfies the constraints within tol.
AuxSolution enumerate_deterministic(const AuxProblem& problem, size_t f_card_cap, double tol = 1e-6);

/// Objective and residual of a given conditional.
struct AuxEvaluation {
  double objective = 0.0;
  double residual = 0.0;
  std::vector<double> constraint_values;
};
AuxEvaluation evaluate(const AuxProblem& problem, const Conditional& w);

/// Base distribution with Q appended (float mode).
JointDistribution with_auxiliary(const AuxProblem& problem, const Conditional& w);

/// Conditional where Q copies a function of the conditioning outcome.
Conditional deterministic_conditional(const AuxProblem& problem,
                                      const std::function<size_t(std::span<const size_t>)>& f);

/// Number of conditioning rows and the resolved |Q|.
size_t conditioning_rows(const AuxProblem& problem);
size_t resolved_q_card(const AuxProblem& problem);

}  // namespace pidlab
