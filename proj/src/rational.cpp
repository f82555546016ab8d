#include "pidlab/rational.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

#include "pidlab/error.hpp"

namespace pidlab {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::NegativeMass: return "NegativeMass";
    case Errc::ZeroMass: return "ZeroMass";
    case Errc::NotNormalized: return "NotNormalized";
    case Errc::UnknownVariable: return "UnknownVariable";
    case Errc::ZeroProbabilityEvent: return "ZeroProbabilityEvent";
    case Errc::OverlappingSets: return "OverlappingSets";
    case Errc::SupportMismatch: return "SupportMismatch";
    case Errc::BadTimeLabels: return "BadTimeLabels";
    case Errc::EmptySupport: return "EmptySupport";
    case Errc::GroundMismatch: return "GroundMismatch";
    case Errc::GroundTooLarge: return "GroundTooLarge";
    case Errc::NotDoublyMarkov: return "NotDoublyMarkov";
    case Errc::DegenerateMarginal: return "DegenerateMarginal";
    case Errc::Infeasible: return "Infeasible";
    case Errc::BadProblem: return "BadProblem";
    case Errc::TooLarge: return "TooLarge";
    case Errc::UnknownName: return "UnknownName";
    case Errc::BadParams: return "BadParams";
    case Errc::NonConvergence: return "NonConvergence";
    case Errc::UnimplementedMeasure: return "UnimplementedMeasure";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  text = trim(text);
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (num.size() > 0 && num[0] == '+') num.remove_prefix(1);
  if (!is_integer_literal(num) || !is_integer_literal(den)) {
    throw Error(Errc::ParseError, "not a rational: '" + std::string(text) + "'");
  }
  mpz_class n{std::string(num)}, d{std::string(den)};
  if (d == 0) throw Error(Errc::ParseError, "zero denominator: '" + std::string(text) + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_str();
}

Prob Prob::parse(std::string_view text) {
  text = trim(text);
  if (text.find('/') != std::string_view::npos || is_integer_literal(text)) {
    return Prob(parse_rational(text));
  }
  double d = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(Errc::ParseError, "not a probability: '" + std::string(text) + "'");
  }
  return Prob(d);
}

double Prob::as_double() const {
  if (exact()) return rational().get_d();
  return std::get<double>(value_);
}

std::string Prob::str() const {
  if (exact()) return to_string(rational());
  std::ostringstream os;
  os.precision(17);
  os << std::get<double>(value_);
  return os.str();
}

}  // namespace pidlab
