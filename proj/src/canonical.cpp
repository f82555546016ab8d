#include "pidlab/canonical.hpp"

#include <algorithm>
#include <cctype>

#include "pidlab/error.hpp"

namespace pidlab {

namespace {

Variable var(std::string name, std::vector<std::string> alphabet) { return {std::move(name), std::move(alphabet)}; }

const std::vector<std::string> kBit{"0", "1"};

Rational q(long num, long den) { return Rational(num, den); }

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

JointDistribution xor_gate() {
  return from_outcomes({var("X1", kBit), var("X2", kBit), var("Y", kBit)},
                       {{{"0", "0", "0"}, q(1, 4)}, {{"0", "1", "1"}, q(1, 4)},
                        {{"1", "0", "1"}, q(1, 4)}, {{"1", "1", "0"}, q(1, 4)}});
}

JointDistribution and_gate() {
  return from_outcomes({var("X1", kBit), var("X2", kBit), var("Y", kBit)},
                       {{{"0", "0", "0"}, q(1, 4)}, {{"0", "1", "0"}, q(1, 4)},
                        {{"1", "0", "0"}, q(1, 4)}, {{"1", "1", "1"}, q(1, 4)}});
}

const std::vector<std::string> kPairs{"00", "01", "10", "11"};

JointDistribution copy_gate() {
  return from_outcomes({var("X1", kBit), var("X2", kBit), var("Y", kPairs)},
                       {{{"0", "0", "00"}, q(1, 3)}, {{"0", "1", "01"}, q(1, 3)}, {{"1", "1", "11"}, q(1, 3)}});
}

JointDistribution unq_gate() {
  return from_outcomes({var("X1", kBit), var("X2", kBit), var("Y", kPairs)},
                       {{{"0", "0", "00"}, q(1, 4)}, {{"0", "1", "01"}, q(1, 4)},
                        {{"1", "0", "10"}, q(1, 4)}, {{"1", "1", "11"}, q(1, 4)}});
}

JointDistribution rdn_gate() {
  return from_outcomes({var("X1", kBit), var("X2", kBit), var("Y", kBit)},
                       {{{"0", "0", "0"}, q(1, 2)}, {{"1", "1", "1"}, q(1, 2)}});
}

std::vector<std::string> bit_strings(size_t width) {
  std::vector<std::string> out;
  for (size_t v = 0; v < (size_t{1} << width); ++v) {
    std::string s;
    for (size_t b = width; b-- > 0;) s += ((v >> b) & 1) ? '1' : '0';
    out.push_back(s);
  }
  return out;
}

// X1 = (a1, b1, z), X2 = (a2, b2, z), Y = (a1 xor a2, b1, b2, z)
JointDistribution rdnunqxor_gate() {
  std::vector<std::pair<std::vector<std::string>, Rational>> cells;
  for (int a1 = 0; a1 < 2; ++a1) {
    for (int a2 = 0; a2 < 2; ++a2) {
      for (int b1 = 0; b1 < 2; ++b1) {
        for (int b2 = 0; b2 < 2; ++b2) {
          for (int z = 0; z < 2; ++z) {
            auto bit = [](int v) { return v ? std::string("1") : std::string("0"); };
            cells.push_back({{bit(a1) + bit(b1) + bit(z), bit(a2) + bit(b2) + bit(z),
                              bit(a1 ^ a2) + bit(b1) + bit(b2) + bit(z)},
                             q(1, 32)});
          }
        }
      }
    }
  }
  return from_outcomes({var("X1", bit_strings(3)), var("X2", bit_strings(3)), var("Y", bit_strings(4))}, cells);
}

JointDistribution ex4() {
  std::vector<std::string> four{"1", "2", "3", "4"};
  std::vector<std::pair<std::vector<std::string>, Rational>> cells;
  for (const char* t : {"111", "122", "212", "221", "333", "344", "434", "443"}) {
    cells.push_back({{std::string(1, t[0]), std::string(1, t[1]), std::string(1, t[2])}, q(1, 8)});
  }
  return from_outcomes({var("X1", four), var("X2", four), var("Y", four)}, cells);
}

JointDistribution ex5() {
  return from_outcomes({var("X", {"1", "2", "3", "4"}), var("Y", {"5", "6", "7"})},
                       {{{"1", "5"}, q(10, 32)},
                        {{"2", "5"}, q(3, 32)},
                        {{"3", "5"}, q(5, 32)},
                        {{"4", "6"}, q(1, 32)},
                        {{"1", "7"}, q(4, 32)},
                        {{"2", "7"}, q(7, 32)},
                        {{"3", "7"}, q(2, 32)}});
}

void check_delta(const Rational& d) {
  if (abs(d) >= Rational(1, 8)) throw Error(Errc::BadParams, "delta must lie strictly inside (-1/8, 1/8)");
}

JointDistribution ex6(const Rational& d, const Rational& d2) {
  check_delta(d);
  check_delta(d2);
  Rational e(1, 8);
  return from_outcomes({var("X", {"1", "2"}), var("Y", {"3", "4", "5", "6"})},
                       {{{"1", "3"}, e},
                        {{"1", "4"}, e},
                        {{"1", "5"}, e},
                        {{"1", "6"}, e},
                        {{"2", "3"}, e - d},
                        {{"2", "4"}, e + d},
                        {{"2", "5"}, e + d2},
                        {{"2", "6"}, e - d2}});
}

JointDistribution ex11(const Rational& d, const Rational& d2) {
  auto base = ex6(d, d2);
  std::vector<std::string> ys;
  for (const auto& a : base.variables()[0].alphabet) {
    for (const auto& b : base.variables()[1].alphabet) ys.push_back(a + b);
  }
  std::vector<std::pair<std::vector<std::string>, Rational>> cells;
  for (size_t c : base.support()) {
    auto o = base.outcome(c);
    const auto& a = base.variables()[0].alphabet[o[0]];
    const auto& b = base.variables()[1].alphabet[o[1]];
    cells.push_back({{a, b, a + b}, base.q(c)});
  }
  return from_outcomes({var("X1", base.variables()[0].alphabet), var("X2", base.variables()[1].alphabet),
                        var("Y", ys)},
                       cells);
}

}  // namespace

JointDistribution from_outcomes(std::vector<Variable> vars,
                                const std::vector<std::pair<std::vector<std::string>, Rational>>& cells) {
  size_t n = 1;
  for (const auto& v : vars) n *= v.alphabet.size();
  std::vector<Rational> table(n, Rational(0));
  for (const auto& [outcome, p] : cells) {
    if (outcome.size() != vars.size()) throw Error(Errc::BadParams, "outcome has the wrong length");
    size_t cell = 0;
    for (size_t k = 0; k < vars.size(); ++k) {
      const auto& a = vars[k].alphabet;
      auto it = std::find(a.begin(), a.end(), outcome[k]);
      if (it == a.end()) throw Error(Errc::BadParams, "symbol '" + outcome[k] + "' not in alphabet");
      cell = cell * a.size() + static_cast<size_t>(it - a.begin());
    }
    table[cell] += p;
  }
  return JointDistribution::exact(std::move(vars), std::move(table));
}

const std::vector<std::string>& canonical_names() {
  static const std::vector<std::string> names{"XOR", "AND", "COPY", "UNQ", "RDN",
                                              "RDNUNQXOR", "EX4", "EX5", "EX6", "EX11"};
  return names;
}

JointDistribution canonical(std::string_view name, std::optional<Rational> delta, std::optional<Rational> delta2) {
  std::string key = upper(name);
  key.erase(std::remove_if(key.begin(), key.end(), [](unsigned char c) { return std::isspace(c); }), key.end());
  if (auto open = key.find('('); open != std::string::npos) {
    if (key.back() != ')') throw Error(Errc::BadParams, "unbalanced parameters in '" + std::string(name) + "'");
    std::string args = key.substr(open + 1, key.size() - open - 2);
    key = key.substr(0, open);
    auto comma = args.find(',');
    if (comma == std::string::npos) throw Error(Errc::BadParams, "expected two parameters");
    delta = parse_rational(args.substr(0, comma));
    delta2 = parse_rational(args.substr(comma + 1));
  }
  if (key == "XOR") return xor_gate();
  if (key == "AND") return and_gate();
  if (key == "COPY") return copy_gate();
  if (key == "UNQ") return unq_gate();
  if (key == "RDN") return rdn_gate();
  if (key == "RDNUNQXOR") return rdnunqxor_gate();
  if (key == "EX4") return ex4();
  if (key == "EX5") return ex5();
  if (key == "EX6") return ex6(delta.value_or(Rational(1, 16)), delta2.value_or(Rational(1, 16)));
  if (key == "EX11") return ex11(delta.value_or(Rational(1, 32)), delta2.value_or(Rational(1, 64)));
  throw Error(Errc::UnknownName, "no canonical distribution named '" + std::string(name) + "'");
}

}  // namespace pidlab
