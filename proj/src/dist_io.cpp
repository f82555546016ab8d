#include "pidlab/dist_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "pidlab/error.hpp"

namespace pidlab {

using nlohmann::json;

namespace {

std::string symbol_text(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer() || j.is_number_unsigned()) return j.dump();
  throw Error(Errc::ParseError, "outcome symbols must be strings or integers, got " + j.dump());
}

Prob weight(const json& j) {
  if (j.is_string()) return Prob::parse(j.get<std::string>());
  if (j.is_number_integer() || j.is_number_unsigned()) return Prob(Rational(j.dump()));
  if (j.is_number_float()) return Prob(j.get<double>());
  throw Error(Errc::ParseError, "probability must be a string or number, got " + j.dump());
}

}  // namespace

JointDistribution distribution_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("vars") || !doc.contains("probs")) {
    throw Error(Errc::ParseError, "expected an object with 'vars' and 'probs'");
  }
  std::vector<Variable> vars;
  for (const auto& v : doc.at("vars")) {
    if (!v.contains("name") || !v.contains("alphabet")) throw Error(Errc::ParseError, "variable needs name and alphabet");
    Variable var;
    var.name = v.at("name").get<std::string>();
    for (const auto& s : v.at("alphabet")) var.alphabet.push_back(symbol_text(s));
    vars.push_back(std::move(var));
  }
  if (vars.empty()) throw Error(Errc::ParseError, "no variables");
  size_t n = 1;
  for (const auto& v : vars) n *= std::max<size_t>(v.alphabet.size(), 1);

  // strides for cell lookup; alphabets are validated by the constructor below
  std::vector<std::map<std::string, size_t>> lookup(vars.size());
  for (size_t k = 0; k < vars.size(); ++k) {
    for (size_t s = 0; s < vars[k].alphabet.size(); ++s) lookup[k][vars[k].alphabet[s]] = s;
  }
  std::vector<Prob> table(n, Prob(Rational(0)));
  std::vector<bool> seen(n, false);
  bool all_exact = true;
  for (const auto& entry : doc.at("probs")) {
    const auto& out = entry.at("outcome");
    if (!out.is_array() || out.size() != vars.size()) {
      throw Error(Errc::ParseError, "outcome " + out.dump() + " has the wrong length");
    }
    size_t cell = 0;
    for (size_t k = 0; k < vars.size(); ++k) {
      auto sym = symbol_text(out[k]);
      auto it = lookup[k].find(sym);
      if (it == lookup[k].end()) {
        throw Error(Errc::ParseError, "symbol '" + sym + "' not in the alphabet of " + vars[k].name);
      }
      cell = cell * vars[k].alphabet.size() + it->second;
    }
    if (seen[cell]) throw Error(Errc::ParseError, "duplicate outcome " + out.dump());
    seen[cell] = true;
    table[cell] = weight(entry.at("p"));
    all_exact = all_exact && table[cell].exact();
  }
  if (all_exact) {
    Rational sum(0);
    for (const auto& p : table) sum += p.rational();
    if (sum != 1) throw Error(Errc::NotNormalized, "weights sum to " + to_string(sum));
  } else {
    double sum = 0.0;
    for (const auto& p : table) sum += p.as_double();
    if (std::abs(sum - 1.0) > 1e-9) throw Error(Errc::NotNormalized, "weights sum to " + std::to_string(sum));
    if (std::abs(sum - 1.0) <= 1e-12) {
      // keep the stored doubles so save/load round-trips bit for bit
      std::vector<double> d;
      d.reserve(n);
      for (const auto& p : table) {
        if (p.as_double() < 0.0) throw Error(Errc::NegativeMass, "negative entry " + p.str());
        d.push_back(p.as_double());
      }
      return JointDistribution::real(std::move(vars), std::move(d));
    }
  }
  return validate(std::move(vars), table);
}

JointDistribution load_distribution(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, path.string() + ": " + e.what());
  }
  try {
    return distribution_from_json(doc);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, path.string() + ": " + e.what());
  }
}

json distribution_to_json(const JointDistribution& dist) {
  json doc;
  doc["vars"] = json::array();
  for (const auto& v : dist.variables()) doc["vars"].push_back({{"name", v.name}, {"alphabet", v.alphabet}});
  doc["probs"] = json::array();
  for (size_t c : dist.support()) {
    json outcome = json::array();
    auto o = dist.outcome(c);
    for (size_t k = 0; k < o.size(); ++k) outcome.push_back(dist.variables()[k].alphabet[o[k]]);
    json p = dist.is_exact() ? json(to_string(dist.q(c))) : json(dist.p(c));
    doc["probs"].push_back({{"outcome", outcome}, {"p", p}});
  }
  return doc;
}

void save_distribution(const JointDistribution& dist, const std::filesystem::path& path) {
  write_text(path, distribution_to_json(dist).dump(2) + "\n");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace pidlab
