#include "pidlab/distribution.hpp"

#include <algorithm>
#include <set>

#include "pidlab/error.hpp"

namespace pidlab {

namespace {

constexpr double kFloatSumTol = 1e-12;

void check_vars(const std::vector<Variable>& vars) {
  std::set<std::string> names;
  for (const auto& v : vars) {
    if (v.name.empty()) throw Error(Errc::BadParams, "empty variable name");
    if (!names.insert(v.name).second) throw Error(Errc::BadParams, "duplicate variable '" + v.name + "'");
    if (v.alphabet.empty()) throw Error(Errc::BadParams, "empty alphabet for '" + v.name + "'");
    std::set<std::string> symbols(v.alphabet.begin(), v.alphabet.end());
    if (symbols.size() != v.alphabet.size()) {
      throw Error(Errc::BadParams, "duplicate symbol in alphabet of '" + v.name + "'");
    }
  }
}

size_t table_size(const std::vector<Variable>& vars) {
  size_t n = 1;
  for (const auto& v : vars) n *= v.alphabet.size();
  return n;
}

}  // namespace

void JointDistribution::init_layout() {
  check_vars(vars_);
  strides_.assign(vars_.size(), 1);
  for (size_t i = vars_.size(); i-- > 1;) strides_[i - 1] = strides_[i] * vars_[i].alphabet.size();
}

JointDistribution JointDistribution::exact(std::vector<Variable> vars, std::vector<Rational> table) {
  JointDistribution d;
  d.vars_ = std::move(vars);
  d.init_layout();
  if (table.size() != table_size(d.vars_)) throw Error(Errc::BadParams, "table size does not match alphabets");
  Rational total = 0;
  for (auto& r : table) {
    r.canonicalize();
    if (sgn(r) < 0) throw Error(Errc::NegativeMass, "negative table entry " + to_string(r));
    total += r;
  }
  if (total != 1) throw Error(Errc::NotNormalized, "exact table sums to " + to_string(total));
  d.mode_ = NumericMode::Exact;
  d.probs_.reserve(table.size());
  for (const auto& r : table) d.probs_.push_back(r.get_d());
  d.exact_ = std::move(table);
  return d;
}

JointDistribution JointDistribution::real(std::vector<Variable> vars, std::vector<double> table) {
  JointDistribution d;
  d.vars_ = std::move(vars);
  d.init_layout();
  if (table.size() != table_size(d.vars_)) throw Error(Errc::BadParams, "table size does not match alphabets");
  double total = 0;
  for (double x : table) {
    if (!(x >= 0.0)) throw Error(Errc::NegativeMass, "negative or NaN table entry");
    total += x;
  }
  if (std::abs(total - 1.0) > kFloatSumTol) {
    throw Error(Errc::NotNormalized, "float table sums to " + std::to_string(total));
  }
  d.mode_ = NumericMode::Float;
  d.probs_ = std::move(table);
  return d;
}

Names JointDistribution::names() const {
  Names out;
  for (const auto& v : vars_) out.push_back(v.name);
  return out;
}

bool JointDistribution::has(std::string_view name) const {
  return std::any_of(vars_.begin(), vars_.end(), [&](const Variable& v) { return v.name == name; });
}

size_t JointDistribution::index_of(std::string_view name) const {
  for (size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name == name) return i;
  }
  throw Error(Errc::UnknownVariable, "no variable named '" + std::string(name) + "'");
}

std::vector<size_t> JointDistribution::outcome(size_t cell) const {
  std::vector<size_t> out(vars_.size());
  for (size_t i = 0; i < vars_.size(); ++i) out[i] = coordinate(cell, i);
  return out;
}

size_t JointDistribution::cell(std::span<const size_t> outcome) const {
  size_t c = 0;
  for (size_t i = 0; i < vars_.size(); ++i) c += outcome[i] * strides_[i];
  return c;
}

std::vector<size_t> JointDistribution::support() const {
  std::vector<size_t> out;
  for (size_t c = 0; c < size(); ++c) {
    if (positive(c)) out.push_back(c);
  }
  return out;
}

JointDistribution JointDistribution::to_float() const {
  JointDistribution d = *this;
  d.mode_ = NumericMode::Float;
  d.exact_.clear();
  return d;
}

bool JointDistribution::operator==(const JointDistribution& other) const {
  if (vars_ != other.vars_ || mode_ != other.mode_) return false;
  if (is_exact()) return exact_ == other.exact_;
  return probs_ == other.probs_;
}

JointDistribution validate(std::vector<Variable> vars, const std::vector<Prob>& table) {
  bool all_exact = std::all_of(table.begin(), table.end(), [](const Prob& p) { return p.exact(); });
  if (all_exact) {
    std::vector<Rational> r;
    r.reserve(table.size());
    Rational total = 0;
    for (const auto& p : table) {
      if (sgn(p.rational()) < 0) throw Error(Errc::NegativeMass, "negative entry " + p.str());
      total += p.rational();
      r.push_back(p.rational());
    }
    if (total == 0) throw Error(Errc::ZeroMass, "all entries are zero");
    for (auto& x : r) x /= total;
    return JointDistribution::exact(std::move(vars), std::move(r));
  }
  std::vector<double> d;
  d.reserve(table.size());
  double total = 0;
  for (const auto& p : table) {
    double x = p.as_double();
    if (!(x >= 0.0)) throw Error(Errc::NegativeMass, "negative entry " + p.str());
    total += x;
    d.push_back(x);
  }
  if (total <= 0.0) throw Error(Errc::ZeroMass, "all entries are zero");
  for (auto& x : d) x /= total;
  return JointDistribution::real(std::move(vars), std::move(d));
}

JointDistribution validate(const JointDistribution& dist) {
  std::vector<Prob> t;
  t.reserve(dist.size());
  for (size_t c = 0; c < dist.size(); ++c) {
    if (dist.is_exact()) {
      t.emplace_back(dist.q(c));
    } else {
      t.emplace_back(dist.p(c));
    }
  }
  return validate(dist.variables(), t);
}

JointDistribution marginalize(const JointDistribution& dist, const Names& keep) {
  if (keep.empty()) throw Error(Errc::BadParams, "marginalize needs at least one variable");
  std::vector<size_t> idx;
  std::vector<Variable> vars;
  for (const auto& name : keep) {
    size_t i = dist.index_of(name);
    if (std::find(idx.begin(), idx.end(), i) != idx.end()) {
      throw Error(Errc::OverlappingSets, "variable '" + name + "' listed twice");
    }
    idx.push_back(i);
    vars.push_back(dist.variables()[i]);
  }
  size_t n = 1;
  std::vector<size_t> strides(idx.size(), 1);
  for (size_t k = idx.size(); k-- > 0;) {
    strides[k] = n;
    n *= vars[k].alphabet.size();
  }
  auto target = [&](size_t cell) {
    size_t t = 0;
    for (size_t k = 0; k < idx.size(); ++k) t += dist.coordinate(cell, idx[k]) * strides[k];
    return t;
  };
  if (dist.is_exact()) {
    std::vector<Rational> out(n, Rational(0));
    for (size_t c = 0; c < dist.size(); ++c) {
      if (sgn(dist.q(c)) != 0) out[target(c)] += dist.q(c);
    }
    return JointDistribution::exact(std::move(vars), std::move(out));
  }
  std::vector<double> out(n, 0.0);
  for (size_t c = 0; c < dist.size(); ++c) out[target(c)] += dist.p(c);
  double total = 0;
  for (double x : out) total += x;
  for (auto& x : out) x /= total;
  return JointDistribution::real(std::move(vars), std::move(out));
}

JointDistribution condition(const JointDistribution& dist,
                            const std::vector<std::pair<std::string, std::string>>& on) {
  std::vector<std::pair<size_t, size_t>> fixed;
  for (const auto& [name, symbol] : on) {
    size_t i = dist.index_of(name);
    const auto& alpha = dist.variables()[i].alphabet;
    auto it = std::find(alpha.begin(), alpha.end(), symbol);
    if (it == alpha.end()) {
      throw Error(Errc::UnknownVariable, "symbol '" + symbol + "' not in alphabet of '" + name + "'");
    }
    fixed.emplace_back(i, static_cast<size_t>(it - alpha.begin()));
  }
  Names rest;
  for (size_t i = 0; i < dist.num_vars(); ++i) {
    bool is_fixed = std::any_of(fixed.begin(), fixed.end(), [&](auto& f) { return f.first == i; });
    if (!is_fixed) rest.push_back(dist.variables()[i].name);
  }
  if (rest.empty()) throw Error(Errc::BadParams, "conditioning on every variable leaves nothing");
  auto matches = [&](size_t cell) {
    return std::all_of(fixed.begin(), fixed.end(),
                       [&](auto& f) { return dist.coordinate(cell, f.first) == f.second; });
  };
  std::vector<Prob> t(dist.size());
  bool any = false;
  for (size_t c = 0; c < dist.size(); ++c) {
    bool keep = matches(c);
    if (dist.is_exact()) {
      t[c] = keep ? Prob(dist.q(c)) : Prob(Rational(0));
    } else {
      t[c] = keep ? Prob(dist.p(c)) : Prob(0.0);
    }
    any = any || (keep && dist.positive(c));
  }
  if (!any) throw Error(Errc::ZeroProbabilityEvent, "conditioning event has probability zero");
  return marginalize(validate(dist.variables(), t), rest);
}

JointDistribution merge_variables(const JointDistribution& dist, const Names& members,
                                  const std::string& merged_name) {
  if (members.empty()) throw Error(Errc::BadParams, "nothing to merge");
  std::vector<size_t> idx;
  for (const auto& m : members) idx.push_back(dist.index_of(m));
  bool single_char = true;
  for (size_t i : idx) {
    for (const auto& s : dist.variables()[i].alphabet) single_char = single_char && s.size() == 1;
  }
  // Tuple alphabet, first member most significant.
  std::vector<std::string> labels{""};
  for (size_t k = 0; k < idx.size(); ++k) {
    std::vector<std::string> next;
    for (const auto& prefix : labels) {
      for (const auto& s : dist.variables()[idx[k]].alphabet) {
        next.push_back(prefix.empty() && k == 0 ? s : prefix + (single_char ? "" : ",") + s);
      }
    }
    labels = std::move(next);
  }
  Variable merged{merged_name, labels};
  auto with = add_function_variable(dist, merged, [&](std::span<const size_t> o) {
    size_t t = 0;
    for (size_t i : idx) t = t * dist.variables()[i].alphabet.size() + o[i];
    return t;
  });
  Names order;
  bool placed = false;
  for (size_t i = 0; i < dist.num_vars(); ++i) {
    if (std::find(idx.begin(), idx.end(), i) != idx.end()) {
      if (!placed && i == *std::min_element(idx.begin(), idx.end())) {
        order.push_back(merged_name);
        placed = true;
      }
      continue;
    }
    order.push_back(dist.variables()[i].name);
  }
  return marginalize(with, order);
}

JointDistribution add_function_variable(const JointDistribution& dist, Variable var,
                                        const std::function<size_t(std::span<const size_t>)>& f) {
  size_t k = var.alphabet.size();
  std::vector<Variable> vars = dist.variables();
  vars.push_back(std::move(var));
  if (dist.is_exact()) {
    std::vector<Rational> t(dist.size() * k, Rational(0));
    for (size_t c = 0; c < dist.size(); ++c) {
      auto o = dist.outcome(c);
      size_t v = f(o);
      if (v >= k) throw Error(Errc::BadParams, "function value outside new alphabet");
      t[c * k + v] = dist.q(c);
    }
    return JointDistribution::exact(std::move(vars), std::move(t));
  }
  std::vector<double> t(dist.size() * k, 0.0);
  for (size_t c = 0; c < dist.size(); ++c) {
    auto o = dist.outcome(c);
    size_t v = f(o);
    if (v >= k) throw Error(Errc::BadParams, "function value outside new alphabet");
    t[c * k + v] = dist.p(c);
  }
  return JointDistribution::real(std::move(vars), std::move(t));
}

JointDistribution add_channel_variable(
    const JointDistribution& dist, Variable var,
    const std::function<std::vector<Rational>(std::span<const size_t>)>& channel) {
  if (!dist.is_exact()) {
    return add_channel_variable_real(dist, std::move(var), [&](std::span<const size_t> o) {
      std::vector<double> out;
      for (const auto& r : channel(o)) out.push_back(r.get_d());
      return out;
    });
  }
  size_t k = var.alphabet.size();
  std::vector<Variable> vars = dist.variables();
  vars.push_back(std::move(var));
  std::vector<Rational> t(dist.size() * k, Rational(0));
  for (size_t c = 0; c < dist.size(); ++c) {
    if (sgn(dist.q(c)) == 0) continue;
    auto row = channel(dist.outcome(c));
    if (row.size() != k) throw Error(Errc::BadParams, "channel row has wrong length");
    Rational total = 0;
    for (const auto& r : row) {
      if (sgn(r) < 0) throw Error(Errc::NegativeMass, "negative channel entry");
      total += r;
    }
    if (total != 1) throw Error(Errc::NotNormalized, "channel row does not sum to one");
    for (size_t j = 0; j < k; ++j) t[c * k + j] = dist.q(c) * row[j];
  }
  return JointDistribution::exact(std::move(vars), std::move(t));
}

JointDistribution add_channel_variable_real(
    const JointDistribution& dist, Variable var,
    const std::function<std::vector<double>(std::span<const size_t>)>& channel) {
  size_t k = var.alphabet.size();
  std::vector<Variable> vars = dist.variables();
  vars.push_back(std::move(var));
  std::vector<double> t(dist.size() * k, 0.0);
  for (size_t c = 0; c < dist.size(); ++c) {
    if (dist.p(c) == 0.0) continue;
    auto row = channel(dist.outcome(c));
    if (row.size() != k) throw Error(Errc::BadParams, "channel row has wrong length");
    double total = 0;
    for (double r : row) total += r;
    for (size_t j = 0; j < k; ++j) t[c * k + j] = dist.p(c) * row[j] / total;
  }
  double total = 0;
  for (double x : t) total += x;
  for (auto& x : t) x /= total;
  return JointDistribution::real(std::move(vars), std::move(t));
}

JointDistribution rename(const JointDistribution& dist,
                         const std::vector<std::pair<std::string, std::string>>& renames) {
  std::vector<Variable> vars = dist.variables();
  for (const auto& [from, to] : renames) vars[dist.index_of(from)].name = to;
  if (dist.is_exact()) return JointDistribution::exact(std::move(vars), dist.exact_probs());
  return JointDistribution::real(std::move(vars), dist.probs());
}

}  // namespace pidlab
