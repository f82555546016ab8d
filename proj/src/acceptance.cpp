#include "pidlab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>

#include "pidlab/axioms.hpp"
#include "pidlab/canonical.hpp"
#include "pidlab/common_info.hpp"
#include "pidlab/corpus.hpp"
#include "pidlab/error.hpp"
#include "pidlab/measures.hpp"
#include "pidlab/partition.hpp"
#include "pidlab/pid.hpp"
#include "pidlab/random.hpp"

namespace pidlab {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", std::abs(v) < 5e-15 ? 0.0 : v);
  return buf;
}

double h(std::initializer_list<double> ps) {
  double s = 0.0;
  for (double p : ps) {
    if (p > 0.0) s -= p * std::log2(p);
  }
  return s;
}

struct Sheet {
  std::vector<std::string> lines;
  bool ok = true;

  void approx(const std::string& name, double computed, double expected, double tol) {
    bool good = std::abs(computed - expected) <= tol;
    lines.push_back(name + ": " + num(computed) + " vs " + num(expected) + " +/- " + num(tol) +
                    (good ? "" : "  MISMATCH"));
    ok = ok && good;
  }
  void check(const std::string& name, bool good, const std::string& computed = "") {
    lines.push_back(name + (computed.empty() ? "" : ": " + computed) + (good ? "" : "  MISMATCH"));
    ok = ok && good;
  }
};

// Exact entropy when every mass is a power of one half.
std::optional<Rational> dyadic_entropy(const JointDistribution& d, const Names& vars) {
  if (!d.is_exact()) return std::nullopt;
  Rational total(0);
  for (const auto& p : marginal_exact(d, vars)) {
    if (p == 0) continue;
    if (p.get_num() != 1) return std::nullopt;
    mpz_class den = p.get_den();
    if (mpz_popcount(den.get_mpz_t()) != 1) return std::nullopt;
    total += p * Rational(static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2) - 1));
  }
  return total;
}

// Largest H(f(X)) over labelings f of X for which some g has f(X) = g(Y) a.s.
double common_function_search(const JointDistribution& d) {
  const size_t nx = d.variables()[0].alphabet.size(), ny = d.variables()[1].alphabet.size();
  std::vector<size_t> f(nx, 0);
  double best = 0.0;
  std::function<void(size_t, size_t)> go = [&](size_t i, size_t used) {
    if (i == nx) {
      std::vector<long> g(ny, -1);
      std::vector<double> mass(nx, 0.0);
      for (size_t c : d.support()) {
        auto o = d.outcome(c);
        long fx = static_cast<long>(f[o[0]]);
        if (g[o[1]] >= 0 && g[o[1]] != fx) return;
        g[o[1]] = fx;
        mass[f[o[0]]] += d.p(c);
      }
      best = std::max(best, entropy_of(mass));
      return;
    }
    for (size_t c = 0; c <= used && c < nx; ++c) {
      f[i] = c;
      go(i + 1, std::max(used, c + 1));
    }
  };
  go(0, 0);
  return best;
}

// Finest common coarsening by scanning every partition of the ground set.
Partition brute_force_meet(const Partition& a, const Partition& b) {
  const size_t n = a.ground()->size();
  std::vector<Partition> common;
  std::vector<size_t> rgs(n, 0);
  std::function<void(size_t, size_t)> go = [&](size_t i, size_t used) {
    if (i == n) {
      Partition z(a.ground(), rgs);
      if (refines(a, z) && refines(b, z)) common.push_back(z);
      return;
    }
    for (size_t c = 0; c <= used; ++c) {
      rgs[i] = c;
      go(i + 1, std::max(used, c + 1));
    }
  };
  go(0, 0);
  for (const auto& z : common) {
    if (std::all_of(common.begin(), common.end(), [&](const Partition& o) { return refines(z, o); })) return z;
  }
  throw Error(Errc::BadParams, "no finest common coarsening");
}

// Connected components of the bipartite graph on positive x and y values.
size_t support_components(const JointDistribution& d, size_t ix, size_t iy) {
  const size_t nx = d.variables()[ix].alphabet.size();
  const size_t ny = d.variables()[iy].alphabet.size();
  std::vector<size_t> parent(nx + ny);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<size_t(size_t)> find = [&](size_t v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
  std::vector<bool> seen(nx + ny, false);
  for (size_t c : d.support()) {
    auto o = d.outcome(c);
    seen[o[ix]] = seen[nx + o[iy]] = true;
    parent[find(o[ix])] = find(nx + o[iy]);
  }
  size_t comps = 0;
  for (size_t v = 0; v < nx + ny; ++v) {
    if (seen[v] && find(v) == v) ++comps;
  }
  return comps;
}

void atoms(Sheet& s, const std::string& tag, const PidResult& r, const double (&want)[4], double tol) {
  s.approx(tag + " redundancy", r.redundancy.bits, want[0], tol);
  s.approx(tag + " unique X1", r.unique1.bits, want[1], tol);
  s.approx(tag + " unique X2", r.unique2.bits, want[2], tol);
  s.approx(tag + " synergy", r.synergy.bits, want[3], tol);
}

using Dir = std::optional<std::filesystem::path>;

void ex5_statistics(Sheet& s, const Dir& dir) {
  auto d = corpus_distribution("ex5", dir);
  auto sy = minimal_sufficient_statistic(d, {"Y"}, {"X"});
  s.approx("H(Q_Y^X)", sy.common.bits, 1.151, 2e-3);
  s.check("rational mode", d.is_exact());
  s.check("residual private part of Y is exactly 0", sy.residual_private.bits == 0.0, num(sy.residual_private.bits));
  auto sx = minimal_sufficient_statistic(d, {"X"}, {"Y"});
  auto masses = sx.masses;
  std::sort(masses.begin(), masses.end());
  bool m = masses.size() == 3 && std::abs(masses[0] - 1.0 / 32) < 1e-12 && std::abs(masses[1] - 5.0 / 16) < 1e-12 &&
           std::abs(masses[2] - 21.0 / 32) < 1e-12;
  s.check("Q_X^Y class masses {21/32, 5/16, 1/32}", m);
  s.approx("H(Q_X^Y)", sx.common.bits, h({21.0 / 32, 5.0 / 16, 1.0 / 32}), 1e-12);
  double hx = entropy(d, {"X"});
  s.check("H(Q_X^Y) < H(X)", sx.common.bits < hx, num(sx.common.bits) + " < " + num(hx));
}

void ex6_flip(Sheet& s, const Dir& dir) {
  auto d = corpus_distribution("ex6", dir);
  auto q = minimal_sufficient_statistic(d, {"Y"}, {"X"});
  s.approx("delta = delta' = 1/16: H(Q_Y^X)", q.common.bits, h({3.0 / 8, 5.0 / 8}), 1e-9);
  auto e = corpus_distribution("ex6b", dir);
  auto r = minimal_sufficient_statistic(e, {"Y"}, {"X"});
  size_t ys = marginal_exact(e, {"Y"}).size();
  size_t positive = 0;
  for (const auto& p : marginal_exact(e, {"Y"})) positive += p > 0 ? 1 : 0;
  (void)ys;
  s.check("rational mode", e.is_exact());
  s.check("delta' = 1/32: every y is its own class, so H(Q_Y^X) = H(Y) exactly",
          r.classes.size() == positive,
          std::to_string(r.classes.size()) + " classes for " + std::to_string(positive) + " values");
  s.approx("delta' = 1/32: H(Q_Y^X) - H(Y)", r.common.bits - entropy(e, {"Y"}), 0.0, 0.0);
}

void and_values(Sheet& s, const Dir& dir) {
  auto d = corpus_distribution("and", dir);
  s.approx("I(X1X2;Y)", mutual_information(d, {"X1", "X2"}, {"Y"}), 0.811, 1e-3);
  s.approx("I(X1;Y)", mutual_information(d, {"X1"}, {"Y"}), 0.311, 1e-3);
  s.approx("I(X2;Y)", mutual_information(d, {"X2"}, {"Y"}), 0.311, 1e-3);
  s.approx("I(X1;X2|Y)", mutual_information(d, {"X1"}, {"X2"}, {"Y"}), 0.189, 1e-3);
  s.approx("i_cap_2", decompose(d, Measure::I2).redundancy.bits, 0.0, 1e-3);
  for (auto m : {Measure::I3, Measure::I4}) {
    auto r = decompose(d, m);
    s.approx(measure_name(m) + " redundancy", r.redundancy.bits, 0.311, 5e-3);
    s.approx(measure_name(m) + " synergy", r.synergy.bits, 0.5, 5e-3);
  }
}

void copy_values(Sheet& s, const Dir& dir) {
  auto d = corpus_distribution("copy", dir);
  double ix = mutual_information(d, {"X1"}, {"X2"});
  s.approx("I(X1;X2)", ix, 0.252, 1e-3);
  auto ideal = decompose(d, Measure::I3);
  s.approx("unique X1 (i3)", ideal.unique1.bits, 0.667, 1e-3);
  s.approx("unique X2 (i3)", ideal.unique2.bits, 0.667, 1e-3);
  s.approx("i2 synergy", decompose(d, Measure::I2).synergy.bits, -0.252, 1e-3);
}

void atom_vectors(Sheet& s, const Dir& dir) {
  struct Case {
    const char* stem;
    double want[4];
  };
  for (const Case& c : {Case{"unq", {0, 1, 1, 0}}, Case{"rdn", {1, 0, 0, 0}}, Case{"xor", {0, 0, 0, 1}},
                        Case{"rdnunqxor", {1, 1, 1, 1}}}) {
    auto d = corpus_distribution(c.stem, dir);
    for (auto m : {Measure::I3, Measure::I4}) atoms(s, std::string(c.stem) + " " + measure_name(m), decompose(d, m), c.want, 1e-3);
  }
}

void ex4_totals(Sheet& s, const Dir& dir) {
  auto d = corpus_distribution("ex4", dir);
  auto hy = dyadic_entropy(d, {"Y"}), hx = dyadic_entropy(d, {"X1", "X2"}), hxy = dyadic_entropy(d, {"X1", "X2", "Y"});
  auto h1 = dyadic_entropy(d, {"X1"}), h2 = dyadic_entropy(d, {"X2"}), h1y = dyadic_entropy(d, {"X1", "Y"}),
       h2y = dyadic_entropy(d, {"X2", "Y"});
  if (!(hy && hx && hxy && h1 && h2 && h1y && h2y)) {
    s.check("all marginals dyadic (exact entropies)", false);
    return;
  }
  Rational total = *hx + *hy - *hxy;
  // I(X1;X2) - I(X1;X2|Y)
  Rational co = (*h1 + *h2 - *hx) - (*h1y + *h2y - *hxy - *hy);
  s.check("I(X1X2;Y) = 2 exactly", total == 2, to_string(total));
  s.check("co-information = 0 exactly", co == 0, to_string(co));
}

void partitions(Sheet& s, const Dir& dir) {
  auto ex1 = corpus_partitions("ex1", dir);
  s.check("ex1 join", format(join(ex1.x, ex1.y)) == "w1|w2|w3|w4", format(join(ex1.x, ex1.y)));
  s.check("ex1 meet", format(meet(ex1.x, ex1.y)) == "w1w2w4|w3", format(meet(ex1.x, ex1.y)));
  if (ex1.event) {
    const auto& e = *ex1.event;
    s.check("ex1 K_X(E)", format(knows(ex1.x, e)) == "w2", format(knows(ex1.x, e)));
    s.check("ex1 K_Y(E)", format(knows(ex1.y, e)) == "w1w2", format(knows(ex1.y, e)));
    s.check("ex1 C(E) empty", common_knowledge(ex1.x, ex1.y, e).empty(), format(common_knowledge(ex1.x, ex1.y, e)));
  } else {
    s.check("ex1 event present", false);
  }
  auto e2 = parse_event("w1w2w4", ex1.ground);
  s.check("ex1 C(w1w2w4) = w1w2w4", common_knowledge(ex1.x, ex1.y, e2) == e2);

  auto ex2 = corpus_partitions("ex2", dir);
  auto t0 = std::chrono::steady_clock::now();
  auto res = private_complement(ex2.x, ex2.y);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  s.check("ex2 chromatic number 3", res.chromatic_number == 3, std::to_string(res.chromatic_number));
  s.check("ex2 at least two minimal colorings", res.structures.size() >= 2, std::to_string(res.structures.size()));
  for (const char* printed : {"w1w2w7w8w11w12|w3w4w9w10w15w16|w5w6w13w14",
                              "w1w2w5w6w11w12|w3w4w7w8w13w14|w9w10w15w16"}) {
    auto p = parse_partition(printed, ex2.ground);
    s.check(std::string("ex2 contains ") + printed,
            std::find(res.structures.begin(), res.structures.end(), p) != res.structures.end());
  }
  s.check("ex2 coloring within 10 s", secs <= 10.0);

  auto ex3 = corpus_partitions("ex3", dir);
  auto rel = private_relative(ex3.x, ex3.y);
  for (const char* printed : {"w1w4|w2w3w5w6", "w1w5w6|w2w3w4"}) {
    auto p = parse_partition(printed, ex3.ground);
    s.check(std::string("ex3 contains ") + printed,
            std::find(rel.structures.begin(), rel.structures.end(), p) != rel.structures.end());
  }
}

void inequality_chain(Sheet& s, uint64_t seed) {
  AuxOptions quick;
  quick.restarts = 1;
  quick.max_iters = 60;
  size_t violations = 0;
  std::string first;
  const size_t n = 500;
  for (size_t k = 0; k < n; ++k) {
    auto rng = stream_rng(seed + 8000, k);
    RandomSpec spec;
    spec.sizes = {2 + rng() % 2, 2 + rng() % 2, 2 + rng() % 2};
    spec.zero_fraction = k % 2 ? 0.3 : 0.0;
    auto d = random_distribution(rng, spec);
    double gk = gacs_korner(d, {{"X1"}, {"Y"}}).entropy.bits;
    double mi = mutual_information(d, {"X1"}, {"Y"});
    double wy = wyner_ci(d, {"X1"}, {"Y"}, quick).solution.value.bits;
    auto b = bounds_check(d);
    double chain = entropy(d, {"X1"}) + conditional_entropy(d, {"X2"}, {"X1"}) +
                   conditional_entropy(d, {"Y"}, {"X1", "X2"}) - entropy(d, {"X1", "X2", "Y"});
    double mi_chain = mutual_information(d, {"X1", "X2"}, {"Y"}) -
                      (mutual_information(d, {"X1"}, {"Y"}) + mutual_information(d, {"X2"}, {"Y"}, {"X1"}));
    bool good = gk <= mi + 1e-12 && mi <= wy + 1e-6 && b.holds && std::abs(chain) <= 1e-12 && std::abs(mi_chain) <= 1e-12;
    if (!good) {
      if (violations == 0) first = "first at #" + std::to_string(k);
      ++violations;
    }
  }
  s.check("violations over " + std::to_string(n) + " distributions", violations == 0,
          std::to_string(violations) + (first.empty() ? "" : " (" + first + ")"));
}

void oracles(Sheet& s, uint64_t seed) {
  size_t tried = 0, mismatches = 0;
  for (uint64_t k = 0; tried < 100; ++k) {
    auto rng = stream_rng(seed + 9000, k);
    auto d = random_distribution(rng, {{3, 3}, {}, 0.5});
    if (d.support().size() > 8) continue;
    ++tried;
    if (std::abs(gacs_korner(d, {{"X"}, {"Y"}}).entropy.bits - common_function_search(d)) > 1e-12) ++mismatches;
  }
  s.check("gacs_korner vs common-function search (100)", mismatches == 0, std::to_string(mismatches) + " mismatches");
  std::mt19937_64 rng(seed + 9100);
  size_t bad = 0;
  for (int t = 0; t < 100; ++t) {
    size_t n = 1 + rng() % 6;
    auto g = GroundSet::numbered(n);
    auto random_partition = [&] {
      size_t blocks = 1 + rng() % n;
      std::vector<size_t> lab(n);
      for (auto& l : lab) l = rng() % blocks;
      return Partition(g, lab);
    };
    auto a = random_partition();
    auto b = random_partition();
    if (!(meet(a, b) == brute_force_meet(a, b))) ++bad;
  }
  s.check("meet vs brute-force coarsening (100)", bad == 0, std::to_string(bad) + " mismatches");
}

void harness(Sheet& s, uint64_t seed) {
  auto t0 = std::chrono::steady_clock::now();
  auto row = [&](const AxiomReport& r, std::initializer_list<Property> hold, std::initializer_list<Property> fail) {
    for (auto p : hold) {
      const auto& e = r.entry(p);
      s.check(r.measure + " " + property_name(p) + " holds on corpus", e.status == PropertyStatus::HoldsOnCorpus,
              std::to_string(e.checked) + " checks");
    }
    for (auto p : fail) {
      const auto& e = r.entry(p);
      bool good = e.status == PropertyStatus::Violated && e.counterexample.has_value();
      s.check(r.measure + " " + property_name(p) + " violated with counterexample", good,
              good ? e.counterexample->instance + ", gap " + num(e.worst_gap) : "none found");
    }
    s.check(r.measure + " no skipped instances", r.skipped.empty(), std::to_string(r.skipped.size()));
  };
  AxiomOptions o;
  o.seed = seed;
  o.random_trials = 200;
  row(axiom_harness(Measure::I1, o), {Property::GP, Property::S, Property::I, Property::M},
      {Property::SM, Property::LP, Property::Id});
  o.random_trials = 20;
  row(axiom_harness(Measure::I2, o), {Property::GP, Property::S, Property::I, Property::M, Property::SM},
      {Property::LP, Property::Id});
  o.random_trials = 200;
  for (auto m : {Measure::I3, Measure::I4}) {
    row(axiom_harness(m, o),
        {Property::GP, Property::S, Property::I, Property::M, Property::SM, Property::LP, Property::Id}, {});
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  s.check("runtime within 5 min", secs <= 300.0);
}

void hgr(Sheet& s, const Dir& dir) {
  auto bsc = from_outcomes({{"X", {"0", "1"}}, {"Y", {"0", "1"}}},
                           {{{"0", "0"}, Rational(9, 20)},
                            {{"0", "1"}, Rational(1, 20)},
                            {{"1", "0"}, Rational(1, 20)},
                            {{"1", "1"}, Rational(9, 20)}});
  s.approx("binary symmetric pair, flip 0.1", hgr_maximal_correlation(bsc, {"X"}, {"Y"}).bits, 0.8, 1e-6);
  size_t pairs = 0, bad = 0;
  std::string first;
  for (const auto& e : corpus_entries()) {
    auto d = corpus_distribution(e.stem, dir);
    const auto& vars = d.variables();
    for (size_t i = 0; i < vars.size(); ++i) {
      for (size_t j = i + 1; j < vars.size(); ++j) {
        ++pairs;
        double rho = hgr_maximal_correlation(d, {vars[i].name}, {vars[j].name}).bits;
        bool decomposable = support_components(d, i, j) >= 2;
        if (decomposable ? rho != 1.0 : !(rho < 1.0)) {
          if (bad++ == 0) first = e.stem + " (" + vars[i].name + "," + vars[j].name + ") rho " + num(rho);
        }
      }
    }
  }
  s.check("rho = 1 exactly iff decomposable over " + std::to_string(pairs) + " corpus pairs", bad == 0,
          std::to_string(bad) + " mismatches" + (first.empty() ? "" : ", first " + first));
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
  struct Item {
    int id;
    std::string title;
    std::function<void(Sheet&)> run;
  };
  const Dir& dir = opts.corpus_dir;
  std::vector<Item> items{
      {1, "ex5 sufficient statistics", [&](Sheet& s) { ex5_statistics(s, dir); }},
      {2, "ex6 flip", [&](Sheet& s) { ex6_flip(s, dir); }},
      {3, "AND decomposition", [&](Sheet& s) { and_values(s, dir); }},
      {4, "COPY decomposition", [&](Sheet& s) { copy_values(s, dir); }},
      {5, "UNQ/RDN/XOR/RDNUNQXOR atom vectors", [&](Sheet& s) { atom_vectors(s, dir); }},
      {6, "ex4 exact totals", [&](Sheet& s) { ex4_totals(s, dir); }},
      {7, "partition suite", [&](Sheet& s) { partitions(s, dir); }},
      {8, "inequality chain on 500 random distributions", [&](Sheet& s) { inequality_chain(s, opts.seed); }},
      {9, "oracle equivalence", [&](Sheet& s) { oracles(s, opts.seed); }},
      {10, "axiom harness", [&](Sheet& s) { harness(s, opts.seed); }},
      {11, "maximal correlation", [&](Sheet& s) { hgr(s, dir); }},
  };
  std::vector<CriterionResult> out;
  for (const auto& item : items) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), item.id) == opts.only.end()) continue;
    CriterionResult r;
    r.id = item.id;
    r.title = item.title;
    Sheet s;
    auto t0 = std::chrono::steady_clock::now();
    try {
      item.run(s);
    } catch (const std::exception& e) {
      s.check(std::string("error: ") + e.what(), false);
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.passed = s.ok;
    r.lines = std::move(s.lines);
    out.push_back(std::move(r));
  }
  return out;
}

std::string summary_line(const CriterionResult& r) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%2d", r.id);
  return std::string(r.passed ? "PASS" : "FAIL") + "  " + buf + "  " + r.title;
}

}  // namespace pidlab
