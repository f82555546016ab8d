#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pidlab/rational.hpp"

namespace pidlab {

using Names = std::vector<std::string>;

struct Variable {
  std::string name;
  std::vector<std::string> alphabet;

  bool operator==(const Variable&) const = default;
};

enum class NumericMode { Exact, Float };

/// Dense probability table over named finite variables.
///
/// Cells are laid out row-major with the last variable varying fastest. In
/// exact mode the rational table is authoritative and the double table is a
/// cached rounding of it; in float mode only the double table exists.
/// Instances are immutable once built.
class JointDistribution {
 public:
  JointDistribution() = default;

  /// Takes a table that already sums to one; use validate() to normalize.
  static JointDistribution exact(std::vector<Variable> vars, std::vector<Rational> table);
  static JointDistribution real(std::vector<Variable> vars, std::vector<double> table);

  NumericMode mode() const { return mode_; }
  bool is_exact() const { return mode_ == NumericMode::Exact; }

  const std::vector<Variable>& variables() const { return vars_; }
  size_t num_vars() const { return vars_.size(); }
  size_t size() const { return probs_.size(); }
  Names names() const;

  bool has(std::string_view name) const;
  /// Throws Errc::UnknownVariable.
  size_t index_of(std::string_view name) const;
  const Variable& variable(std::string_view name) const { return vars_[index_of(name)]; }

  double p(size_t cell) const { return probs_[cell]; }
  /// Exact mode only.
  const Rational& q(size_t cell) const { return exact_[cell]; }
  const std::vector<double>& probs() const { return probs_; }
  const std::vector<Rational>& exact_probs() const { return exact_; }
  bool positive(size_t cell) const { return is_exact() ? sgn(exact_[cell]) > 0 : probs_[cell] > 0.0; }

  std::vector<size_t> outcome(size_t cell) const;
  size_t cell(std::span<const size_t> outcome) const;
  size_t stride(size_t var) const { return strides_[var]; }
  /// Symbol index of variable `var` in `cell`.
  size_t coordinate(size_t cell, size_t var) const { return (cell / strides_[var]) % vars_[var].alphabet.size(); }

  /// Cells with positive probability, in table order.
  std::vector<size_t> support() const;

  JointDistribution to_float() const;

  bool operator==(const JointDistribution& other) const;

 private:
  void init_layout();

  std::vector<Variable> vars_;
  std::vector<size_t> strides_;
  NumericMode mode_ = NumericMode::Float;
  std::vector<Rational> exact_;
  std::vector<double> probs_;
};

/// Checks shape and signs and renormalizes. The result is exact iff every
/// weight is exact. Throws NegativeMass, ZeroMass, BadParams.
JointDistribution validate(std::vector<Variable> vars, const std::vector<Prob>& table);
JointDistribution validate(const JointDistribution& dist);

/// Sums out everything not in `keep`; the result lists variables in the order
/// given. Throws UnknownVariable.
JointDistribution marginalize(const JointDistribution& dist, const Names& keep);

/// Conditional distribution of the remaining variables given the assignment.
/// Throws ZeroProbabilityEvent, UnknownVariable.
JointDistribution condition(const JointDistribution& dist,
                            const std::vector<std::pair<std::string, std::string>>& on);

/// Replaces `members` by one tuple-valued variable placed where the first
/// member was. Tuple labels concatenate member labels ("," separated unless
/// every member label is a single character).
JointDistribution merge_variables(const JointDistribution& dist, const Names& members,
                                  const std::string& merged_name);

/// Appends a variable that is a deterministic function of the outcome.
JointDistribution add_function_variable(const JointDistribution& dist, Variable var,
                                        const std::function<size_t(std::span<const size_t>)>& f);

/// Appends a variable drawn from an exact channel p(new | outcome).
JointDistribution add_channel_variable(
    const JointDistribution& dist, Variable var,
    const std::function<std::vector<Rational>(std::span<const size_t>)>& channel);

/// Appends a variable from a floating-point channel p(new | outcome).
JointDistribution add_channel_variable_real(
    const JointDistribution& dist, Variable var,
    const std::function<std::vector<double>(std::span<const size_t>)>& channel);

/// Renames variables (pairs of old, new).
JointDistribution rename(const JointDistribution& dist,
                         const std::vector<std::pair<std::string, std::string>>& renames);

}  // namespace pidlab
