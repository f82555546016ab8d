#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <variant>

namespace pidlab {

using Rational = mpq_class;

// Parses "num/den" or an integer literal into a canonical rational.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);
inline double to_double(const Rational& r) { return r.get_d(); }

// A probability weight as read from a file: exact when written as a
// fraction or integer, floating point when written as a decimal.
class Prob {
 public:
  Prob() : value_(Rational(0)) {}
  Prob(Rational r) : value_(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  Prob(double d) : value_(d) {}               // NOLINT(google-explicit-constructor)

  static Prob parse(std::string_view text);

  bool exact() const { return std::holds_alternative<Rational>(value_); }
  const Rational& rational() const { return std::get<Rational>(value_); }
  double as_double() const;
  std::string str() const;

 private:
  std::variant<Rational, double> value_;
};

}  // namespace pidlab
