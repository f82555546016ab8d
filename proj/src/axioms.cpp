#include "pidlab/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "pidlab/canonical.hpp"
#include "pidlab/error.hpp"
#include "pidlab/measures.hpp"
#include "pidlab/parallel.hpp"
#include "pidlab/random.hpp"

namespace pidlab {

std::string property_name(Property p) {
  switch (p) {
    case Property::GP:
      return "GP";
    case Property::S:
      return "S";
    case Property::I:
      return "I";
    case Property::M:
      return "M";
    case Property::SM:
      return "SM";
    case Property::LP:
      return "LP";
    case Property::Id:
      return "Id";
    case Property::TM:
      return "TM";
    case Property::PM:
      return "PM";
    case Property::TMu:
      return "TMu";
    case Property::PMu:
      return "PMu";
    case Property::PMuc:
      return "PMuc";
  }
  return "?";
}

const std::vector<Property>& all_properties() {
  static const std::vector<Property> all{Property::GP, Property::S,  Property::I,  Property::M,
                                         Property::SM, Property::LP, Property::Id, Property::TM,
                                         Property::PM, Property::TMu, Property::PMu, Property::PMuc};
  return all;
}

std::string status_name(PropertyStatus s) {
  return s == PropertyStatus::HoldsOnCorpus ? "holds-on-corpus" : "violated";
}

const PropertyEntry& AxiomReport::entry(Property p) const {
  for (const auto& e : entries) {
    if (e.property == p) return e;
  }
  throw Error(Errc::UnknownName, "property " + property_name(p) + " not in report");
}

double default_axiom_tol(Measure m) {
  switch (m) {
    case Measure::I1:
    case Measure::C2GK:
      return 1e-9;
    case Measure::I2:
      return 2e-3;
    case Measure::I3:
      return 1e-6;
    case Measure::I4:
    case Measure::I4Max:
      return 1e-4;
  }
  return 1e-6;
}

namespace {

using Rng = std::mt19937_64;

const Names kTriple{"X1", "X2", "Y"};

Rational proportion(Rng& rng) { return Rational(static_cast<long>(rng() % 4 + 1), 5); }

// Replaces `var` by a refinement where one positive symbol is split in two
// with cell-dependent proportions.
JointDistribution split_symbol(const JointDistribution& d, const std::string& var, Rng& rng) {
  size_t pos = d.index_of(var);
  const auto& alpha = d.variables()[pos].alphabet;
  std::vector<size_t> used;
  for (size_t c : d.support()) {
    size_t s = d.outcome(c)[pos];
    if (std::find(used.begin(), used.end(), s) == used.end()) used.push_back(s);
  }
  std::sort(used.begin(), used.end());
  size_t s = used[rng() % used.size()];
  std::map<std::vector<size_t>, Rational> share;
  for (size_t c : d.support()) share[d.outcome(c)] = proportion(rng);
  Variable refined{var + "+", alpha};
  refined.alphabet.push_back(alpha[s] + "'");
  auto out = add_channel_variable(d, refined, [&](std::span<const size_t> o) {
    std::vector<Rational> row(alpha.size() + 1, Rational(0));
    if (o[pos] != s) {
      row[o[pos]] = 1;
    } else {
      auto it = share.find(std::vector<size_t>(o.begin(), o.end()));
      Rational z = it == share.end() ? Rational(1, 2) : it->second;
      row[s] = z;
      row.back() = 1 - z;
    }
    return row;
  });
  Names keep;
  for (const auto& n : kTriple) keep.push_back(n == var ? var + "+" : n);
  return rename(marginalize(out, keep), {{var + "+", var}});
}

// X2 replaced by a copy of X1.
JointDistribution duplicate_x1(const JointDistribution& d) {
  auto base = marginalize(d, {"X1", "Y"});
  auto alpha = d.variable("X1").alphabet;
  auto out = add_function_variable(base, {"X2", alpha}, [](std::span<const size_t> o) { return o[0]; });
  return marginalize(out, kTriple);
}

// X1 replaced by a random function of X2.
JointDistribution coarsen_x2(const JointDistribution& d, Rng& rng) {
  auto base = marginalize(d, {"X2", "Y"});
  size_t n = d.variable("X2").alphabet.size();
  size_t k = 1 + rng() % n;
  std::vector<size_t> g(n);
  for (auto& v : g) v = rng() % k;
  Variable x1{"X1", {}};
  for (size_t i = 0; i < k; ++i) x1.alphabet.push_back("g" + std::to_string(i));
  auto out = add_function_variable(base, x1, [&](std::span<const size_t> o) { return g[o[0]]; });
  return marginalize(out, kTriple);
}

// X1 replaced by a random channel of X2, so X1 - X2 - Y.
JointDistribution channel_of_x2(const JointDistribution& d, Rng& rng) {
  auto base = marginalize(d, {"X2", "Y"});
  size_t n = d.variable("X2").alphabet.size();
  size_t k = 2 + rng() % 2;
  std::vector<std::vector<Rational>> rows(n);
  for (auto& row : rows) {
    Rational total(0);
    for (size_t i = 0; i < k; ++i) {
      row.emplace_back(static_cast<long>(rng() % 4 + 1));
      total += row.back();
    }
    for (auto& v : row) v /= total;
  }
  Variable x1{"X1", {}};
  for (size_t i = 0; i < k; ++i) x1.alphabet.push_back("c" + std::to_string(i));
  auto out = add_channel_variable(base, x1, [&](std::span<const size_t> o) { return rows[o[0]]; });
  return marginalize(out, kTriple);
}

// Y replaced by the pair (X1, X2).
JointDistribution pair_target(const JointDistribution& d) {
  auto base = marginalize(d, {"X1", "X2"});
  const auto& a = d.variable("X1").alphabet;
  const auto& b = d.variable("X2").alphabet;
  Variable y{"Y", {}};
  for (const auto& u : a) {
    for (const auto& v : b) y.alphabet.push_back(u + "," + v);
  }
  size_t nb = b.size();
  auto out = add_function_variable(base, y, [nb](std::span<const size_t> o) { return o[0] * nb + o[1]; });
  return marginalize(out, kTriple);
}

JointDistribution exact_copy(const JointDistribution& d) {
  if (d.is_exact()) return d;
  std::vector<std::pair<std::vector<std::string>, Rational>> cells;
  for (size_t c : d.support()) {
    auto o = d.outcome(c);
    std::vector<std::string> labels;
    for (size_t i = 0; i < o.size(); ++i) labels.push_back(d.variables()[i].alphabet[o[i]]);
    cells.emplace_back(labels, Rational(d.p(c)));
  }
  return from_outcomes(d.variables(), cells);
}

struct Check {
  Property property;
  double gap;
  JointDistribution dist;
  std::string detail;
};

struct InstanceResult {
  std::string name;
  std::vector<Check> checks;
  std::string skipped;
};

std::string bits(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

InstanceResult run_instance(const std::string& name, const JointDistribution& d0, Measure m, const PidOptions& po,
                            Rng& rng) {
  InstanceResult out;
  out.name = name;
  try {
    auto d = exact_copy(marginalize(d0, kTriple));
    auto eval = [&](const JointDistribution& dist, const Roles& roles = {}) {
      PidOptions o = po;
      o.roles = roles;
      o.i4_both = false;
      return decompose(dist, m, o);
    };
    auto mi = [](const JointDistribution& dist, const std::string& a, const std::string& b) {
      return mutual_information(dist, {a}, {b});
    };
    auto add = [&](Property p, double gap, const JointDistribution& dist, std::string detail) {
      out.checks.push_back({p, std::max(0.0, gap), dist, std::move(detail)});
    };

    auto base = eval(d);
    double red = base.redundancy.bits;
    double i1 = mi(d, "X1", "Y"), i2 = mi(d, "X2", "Y");
    add(Property::GP, -red, d, "redundancy " + bits(red));
    double lowest = std::min({red, base.unique1.bits, base.unique2.bits, base.synergy.bits});
    add(Property::LP, -lowest,
        d, "atoms " + bits(red) + " " + bits(base.unique1.bits) + " " + bits(base.unique2.bits) + " " +
               bits(base.synergy.bits));

    auto swapped = eval(d, {"X2", "X1", "Y"});
    add(Property::S, std::abs(red - swapped.redundancy.bits), d,
        "orders give " + bits(red) + " and " + bits(swapped.redundancy.bits));

    auto dup = duplicate_x1(d);
    double rdup = eval(dup).redundancy.bits, idup = mi(dup, "X1", "Y");
    add(Property::I, std::abs(rdup - idup), dup, "redundancy " + bits(rdup) + " vs I(X1;Y) " + bits(idup));

    double cap = std::min(i1, i2);
    add(Property::M, red - cap, d, "redundancy " + bits(red) + " above min I(Xi;Y) " + bits(cap));
    auto coarse = coarsen_x2(d, rng);
    double rc = eval(coarse).redundancy.bits, ic = mi(coarse, "X1", "Y");
    add(Property::M, std::abs(rc - ic), coarse, "X1 = f(X2): redundancy " + bits(rc) + " vs I(X1;Y) " + bits(ic));

    auto noisy = channel_of_x2(d, rng);
    double rn = eval(noisy).redundancy.bits, in = mi(noisy, "X1", "Y");
    add(Property::SM, std::abs(rn - in), noisy,
        "X1 - X2 - Y: redundancy " + bits(rn) + " vs I(X1;Y) " + bits(in));

    auto copy = pair_target(d);
    double rid = eval(copy).redundancy.bits, ix = mi(copy, "X1", "X2");
    add(Property::Id, std::abs(rid - ix), copy, "Y = X1X2: redundancy " + bits(rid) + " vs I(X1;X2) " + bits(ix));

    auto finer_y = split_symbol(d, "Y", rng);
    auto ty = eval(finer_y);
    add(Property::TM, red - ty.redundancy.bits, finer_y,
        "refined target lowers redundancy " + bits(red) + " -> " + bits(ty.redundancy.bits));
    add(Property::TMu, base.unique1.bits - ty.unique1.bits, finer_y,
        "refined target lowers UI(X1) " + bits(base.unique1.bits) + " -> " + bits(ty.unique1.bits));

    auto finer_x1 = split_symbol(d, "X1", rng);
    auto px = eval(finer_x1);
    add(Property::PM, red - px.redundancy.bits, finer_x1,
        "refined X1 lowers redundancy " + bits(red) + " -> " + bits(px.redundancy.bits));
    add(Property::PMu, base.unique1.bits - px.unique1.bits, finer_x1,
        "refined X1 lowers UI(X1) " + bits(base.unique1.bits) + " -> " + bits(px.unique1.bits));

    auto finer_x2 = split_symbol(d, "X2", rng);
    auto pc = eval(finer_x2);
    add(Property::PMuc, pc.unique1.bits - base.unique1.bits, finer_x2,
        "refined X2 raises UI(X1) " + bits(base.unique1.bits) + " -> " + bits(pc.unique1.bits));
  } catch (const Error& e) {
    out.checks.clear();
    out.skipped = name + ": " + e.what();
  }
  return out;
}

}  // namespace

AxiomReport axiom_harness(Measure measure, const AxiomOptions& opts) {
  AxiomReport report;
  report.measure = measure_name(measure);
  report.corpus_instances = opts.corpus.size();
  report.random_trials = opts.random_trials;
  report.seed = opts.seed;
  report.tol = opts.tol > 0.0 ? opts.tol : default_axiom_tol(measure);

  struct Instance {
    std::string name;
    JointDistribution dist;
  };
  std::vector<Instance> instances;
  for (const auto& n : opts.corpus) instances.push_back({n, canonical(n)});
  for (size_t t = 0; t < opts.random_trials; ++t) {
    auto rng = stream_rng(opts.seed, t);
    RandomSpec spec;
    spec.sizes = {2 + rng() % 2, 2 + rng() % 2, 2 + rng() % 2};
    spec.zero_fraction = t % 2 ? 0.3 : 0.0;
    instances.push_back({"random#" + std::to_string(t), random_distribution(rng, spec)});
  }

  std::vector<InstanceResult> results(instances.size());
  parallel_for(instances.size(), [&](size_t i) {
    auto rng = stream_rng(opts.seed ^ 0x5eedULL, 1000000 + i);
    results[i] = run_instance(instances[i].name, instances[i].dist, measure, opts.pid, rng);
  });

  for (Property p : all_properties()) {
    PropertyEntry e;
    e.property = p;
    for (const auto& r : results) {
      for (const auto& c : r.checks) {
        if (c.property != p) continue;
        ++e.checked;
        if (c.gap > report.tol && c.gap > e.worst_gap) {
          e.worst_gap = c.gap;
          e.counterexample = Counterexample{r.name, c.dist, Roles{}, c.gap, c.detail};
        }
      }
    }
    e.status = e.counterexample ? PropertyStatus::Violated : PropertyStatus::HoldsOnCorpus;
    report.entries.push_back(std::move(e));
  }
  for (const auto& r : results) {
    if (!r.skipped.empty()) report.skipped.push_back(r.skipped);
  }
  return report;
}

}  // namespace pidlab
