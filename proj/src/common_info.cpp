#include "pidlab/common_info.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "pidlab/error.hpp"
#include "pidlab/random.hpp"

namespace pidlab {

namespace {

constexpr double kSnap = 1e-12;
constexpr double kRowTol = 1e-9;

// Float tables lose entries at or below the snap threshold; exact tables pass
// through untouched.
JointDistribution snap(const JointDistribution& dist, std::string* note = nullptr) {
  if (dist.is_exact()) return dist;
  auto probs = dist.probs();
  bool changed = false;
  double total = 0.0;
  for (auto& p : probs) {
    if (p > 0.0 && p <= kSnap) {
      p = 0.0;
      changed = true;
    }
    total += p;
  }
  if (!changed) return dist;
  for (auto& p : probs) p /= total;
  if (note) *note = "float input snapped at 1e-12";
  return JointDistribution::real(dist.variables(), std::move(probs));
}

Names concat(const Names& a, const Names& b) {
  Names out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

void require_disjoint(const Names& a, const Names& b) {
  for (const auto& n : a) {
    if (std::find(b.begin(), b.end(), n) != b.end()) {
      throw Error(Errc::OverlappingSets, "variable '" + n + "' appears in two groups");
    }
  }
}

std::string fresh_name(const JointDistribution& dist, std::string base) {
  while (dist.has(base)) base += "'";
  return base;
}

size_t alphabet_product(const JointDistribution& dist, const Names& vars) {
  size_t n = 1;
  for (const auto& v : vars) n *= dist.variable(v).alphabet.size();
  return n;
}

// Label of a flattened outcome of `vars` (last variable fastest).
std::string tuple_label(const JointDistribution& dist, const Names& vars, size_t flat) {
  std::vector<std::string> parts(vars.size());
  bool single = true;
  for (size_t k = vars.size(); k-- > 0;) {
    const auto& alpha = dist.variable(vars[k]).alphabet;
    parts[k] = alpha[flat % alpha.size()];
    flat /= alpha.size();
    single = single && parts[k].size() == 1;
  }
  std::string out;
  for (size_t k = 0; k < parts.size(); ++k) {
    if (k > 0 && !single) out += ",";
    out += parts[k];
  }
  return out;
}

struct UnionFind {
  std::vector<size_t> parent;
  explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  size_t find(size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(size_t a, size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

size_t CommonRV::label_of(std::span<const size_t> outcome) const {
  for (size_t i = 0; i < outcomes.size(); ++i) {
    if (std::equal(outcomes[i].begin(), outcomes[i].end(), outcome.begin(), outcome.end())) return labeling[i];
  }
  throw Error(Errc::BadParams, "outcome has zero probability");
}

CommonRV gacs_korner(const JointDistribution& dist, const std::vector<Names>& groups) {
  if (groups.size() < 2) throw Error(Errc::BadParams, "need at least two variable groups");
  Names all;
  for (const auto& g : groups) {
    if (g.empty()) throw Error(Errc::BadParams, "empty variable group");
    require_disjoint(g, all);
    all = concat(all, g);
  }
  CommonRV c;
  c.vars = all;
  auto d = snap(dist, &c.entropy.note);
  auto m = marginalize(d, all);

  std::map<std::pair<size_t, std::vector<size_t>>, size_t> node;
  std::vector<std::vector<size_t>> cell_nodes;
  auto support = m.support();
  for (size_t cell : support) {
    auto o = m.outcome(cell);
    std::vector<size_t> ids;
    size_t off = 0;
    for (size_t g = 0; g < groups.size(); ++g) {
      std::vector<size_t> key(o.begin() + static_cast<long>(off), o.begin() + static_cast<long>(off + groups[g].size()));
      off += groups[g].size();
      ids.push_back(node.emplace(std::make_pair(g, std::move(key)), node.size()).first->second);
    }
    cell_nodes.push_back(std::move(ids));
    c.outcomes.push_back(std::move(o));
  }
  UnionFind uf(node.size());
  for (const auto& ids : cell_nodes) {
    for (size_t k = 1; k < ids.size(); ++k) uf.unite(ids[0], ids[k]);
  }
  std::map<size_t, size_t> label_of_root;
  for (size_t i = 0; i < support.size(); ++i) {
    size_t root = uf.find(cell_nodes[i][0]);
    size_t label = label_of_root.emplace(root, label_of_root.size()).first->second;
    c.labeling.push_back(label);
  }
  c.components = label_of_root.size();
  c.masses.assign(c.components, 0.0);
  if (m.is_exact()) {
    c.exact_masses.assign(c.components, Rational(0));
    for (size_t i = 0; i < support.size(); ++i) c.exact_masses[c.labeling[i]] += m.q(support[i]);
    for (size_t k = 0; k < c.components; ++k) c.masses[k] = c.exact_masses[k].get_d();
  } else {
    for (size_t i = 0; i < support.size(); ++i) c.masses[c.labeling[i]] += m.p(support[i]);
  }
  c.entropy.bits = entropy_of(c.masses);
  return c;
}

JointDistribution with_common(const JointDistribution& dist, const CommonRV& common, const std::string& name) {
  std::vector<size_t> pos;
  for (const auto& v : common.vars) pos.push_back(dist.index_of(v));
  Variable var{name, {}};
  for (size_t k = 0; k < std::max<size_t>(common.components, 1); ++k) var.alphabet.push_back(std::to_string(k));
  std::map<std::vector<size_t>, size_t> lookup;
  for (size_t i = 0; i < common.outcomes.size(); ++i) lookup[common.outcomes[i]] = common.labeling[i];
  return add_function_variable(dist, var, [&](std::span<const size_t> o) {
    std::vector<size_t> key;
    for (size_t p : pos) key.push_back(o[p]);
    auto it = lookup.find(key);
    return it == lookup.end() ? size_t{0} : it->second;
  });
}

bool is_saturable(const JointDistribution& dist, const Names& x, const Names& y) {
  auto d = snap(dist);
  auto c = gacs_korner(d, {x, y});
  auto name = fresh_name(d, "Q*");
  auto dd = with_common(d, c, name);
  if (dd.is_exact()) return is_markov_chain(dd, x, {name}, y).holds;
  return mutual_information(dd, x, y, {name}) <= 1e-9;
}

SufficientStatistic minimal_sufficient_statistic(const JointDistribution& dist, const Names& of, const Names& wrt) {
  if (of.empty() || wrt.empty()) throw Error(Errc::BadParams, "empty variable set");
  require_disjoint(of, wrt);
  SufficientStatistic ss;
  ss.of = of;
  ss.wrt = wrt;
  auto d = snap(dist, &ss.common.note);
  auto m = marginalize(d, concat(of, wrt));
  const size_t ny = alphabet_product(d, of), nx = alphabet_product(d, wrt);
  const bool exact = m.is_exact();

  std::vector<std::vector<Rational>> qrows;
  std::vector<std::vector<double>> rows;
  std::vector<size_t> members;  // positive outcomes of `of`
  std::vector<double> py;
  for (size_t yi = 0; yi < ny; ++yi) {
    Rational qy = 0;
    double total = 0.0;
    for (size_t xi = 0; xi < nx; ++xi) {
      total += m.p(yi * nx + xi);
      if (exact) qy += m.q(yi * nx + xi);
    }
    if (exact ? sgn(qy) == 0 : total <= 0.0) continue;
    members.push_back(yi);
    std::vector<double> row(nx);
    std::vector<Rational> qrow;
    for (size_t xi = 0; xi < nx; ++xi) {
      if (exact) {
        qrow.push_back(m.q(yi * nx + xi) / qy);
        row[xi] = qrow.back().get_d();
      } else {
        row[xi] = m.p(yi * nx + xi) / total;
      }
    }
    py.push_back(exact ? qy.get_d() : total);
    rows.push_back(std::move(row));
    qrows.push_back(std::move(qrow));
  }

  std::vector<size_t> rep;  // member index of each class representative
  std::vector<size_t> cls(members.size());
  for (size_t i = 0; i < members.size(); ++i) {
    size_t k = 0;
    for (; k < rep.size(); ++k) {
      size_t j = rep[k];
      bool same = true;
      for (size_t xi = 0; xi < nx && same; ++xi) {
        same = exact ? qrows[i][xi] == qrows[j][xi] : std::abs(rows[i][xi] - rows[j][xi]) <= kRowTol;
      }
      if (same) break;
    }
    if (k == rep.size()) rep.push_back(i);
    cls[i] = k;
  }
  ss.classes.resize(rep.size());
  ss.class_outcomes.resize(rep.size());
  ss.masses.assign(rep.size(), 0.0);
  std::vector<Rational> qmass(rep.size(), Rational(0));
  for (size_t i = 0; i < members.size(); ++i) {
    ss.classes[cls[i]].push_back(tuple_label(d, of, members[i]));
    ss.class_outcomes[cls[i]].push_back(members[i]);
    ss.masses[cls[i]] += py[i];
  }
  if (exact) {
    // exact class masses keep the entropies free of accumulated rounding
    auto my = marginal_exact(d, of);
    for (size_t i = 0; i < members.size(); ++i) qmass[cls[i]] += my[members[i]];
    for (size_t k = 0; k < rep.size(); ++k) ss.masses[k] = qmass[k].get_d();
  }
  for (size_t k : rep) ss.representatives.push_back(rows[k]);
  ss.common.bits = entropy_of(ss.masses);
  double hyq = 0.0;
  for (size_t i = 0; i < members.size(); ++i) {
    double pk = ss.masses[cls[i]];
    if (py[i] > 0.0) hyq += py[i] * std::log2(pk / py[i]);
  }
  ss.residual_private.bits = std::max(0.0, hyq);
  ss.sum_rule_gap = std::abs(entropy(d, of) - ss.common.bits - ss.residual_private.bits);
  return ss;
}

std::string component_class_name(ComponentClass c) {
  switch (c) {
    case ComponentClass::Minimum:
      return "minimum";
    case ComponentClass::Maximum:
      return "maximum";
    case ComponentClass::Both:
      return "minimum and maximum";
    case ComponentClass::Intermediate:
      return "intermediate";
  }
  return "unknown";
}

ComponentDecomposition component_decomposition(const JointDistribution& dist, const Names& x, const Names& y) {
  auto d = snap(dist);
  auto ss = minimal_sufficient_statistic(d, y, x);
  auto m = marginalize(d, concat(y, x));
  const size_t nx = alphabet_product(d, x);
  const size_t k = ss.classes.size();

  // Two classes are kept apart when some x' in either X-set tells their rows
  // apart; otherwise they merge (transitively).
  std::vector<std::set<size_t>> xsets(k);
  for (size_t c = 0; c < k; ++c) {
    for (size_t yi : ss.class_outcomes[c]) {
      for (size_t xi = 0; xi < nx; ++xi) {
        if (m.positive(yi * nx + xi)) xsets[c].insert(xi);
      }
    }
  }
  UnionFind uf(k);
  ComponentDecomposition cd;
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = i + 1; j < k; ++j) {
      bool distinguished = false;
      std::set<size_t> both = xsets[i];
      both.insert(xsets[j].begin(), xsets[j].end());
      for (size_t xi : both) {
        if (std::abs(ss.representatives[i][xi] - ss.representatives[j][xi]) > kRowTol) distinguished = true;
      }
      if (!distinguished && uf.find(i) != uf.find(j)) {
        uf.unite(i, j);
        ++cd.merges;
      }
    }
  }
  std::map<size_t, size_t> slot;
  std::vector<std::set<size_t>> comp_y, comp_x;
  for (size_t c = 0; c < k; ++c) {
    size_t s = slot.emplace(uf.find(c), slot.size()).first->second;
    if (s == comp_y.size()) {
      comp_y.emplace_back();
      comp_x.emplace_back();
    }
    comp_y[s].insert(ss.class_outcomes[c].begin(), ss.class_outcomes[c].end());
    comp_x[s].insert(xsets[c].begin(), xsets[c].end());
  }
  for (size_t s = 0; s < comp_y.size(); ++s) {
    ComponentDecomposition::Component comp;
    for (size_t xi : comp_x[s]) comp.xs.push_back(tuple_label(d, x, xi));
    for (size_t yi : comp_y[s]) comp.ys.push_back(tuple_label(d, y, yi));
    cd.sizes.push_back(comp.ys.size());
    cd.components.push_back(std::move(comp));
  }

  // ergodic components as sets of y outcomes
  auto gk = gacs_korner(d, {y, x});
  std::vector<std::set<size_t>> ergodic(gk.components);
  for (size_t i = 0; i < gk.outcomes.size(); ++i) {
    size_t yi = 0;
    for (size_t v = 0; v < y.size(); ++v) yi = yi * d.variable(y[v]).alphabet.size() + gk.outcomes[i][v];
    ergodic[gk.labeling[i]].insert(yi);
  }
  std::sort(ergodic.begin(), ergodic.end());
  auto mine = comp_y;
  std::sort(mine.begin(), mine.end());
  cd.matches_ergodic = ergodic == mine;

  cd.saturable = is_saturable(d, x, y);
  cd.private_part = ss.residual_private.bits;
  cd.h_y_given_x = conditional_entropy(d, y, x);
  bool minimum = std::all_of(cd.sizes.begin(), cd.sizes.end(), [](size_t s) { return s == 1; });
  if (minimum && cd.saturable) {
    cd.classification = ComponentClass::Both;
  } else if (minimum) {
    cd.classification = ComponentClass::Minimum;
  } else if (cd.saturable) {
    cd.classification = ComponentClass::Maximum;
  }
  return cd;
}

DoubleMarkovReport double_markov_reduce(const JointDistribution& dist, const Names& x, const Names& y,
                                        const Names& q) {
  auto d = snap(dist);
  auto a = is_markov_chain(d, x, y, q, 1e-9);
  auto b = is_markov_chain(d, y, x, q, 1e-9);
  if (!a.holds || !b.holds) {
    throw Error(Errc::NotDoublyMarkov, "X-Y-Q residual " + std::to_string(a.residual) + ", Y-X-Q residual " +
                                           std::to_string(b.residual));
  }
  DoubleMarkovReport r;
  r.q_prime = gacs_korner(d, {x, y});
  auto name = fresh_name(d, "Q'");
  auto dd = with_common(d, r.q_prime, name);
  r.h_given_x = conditional_entropy(dd, {name}, x);
  r.h_given_y = conditional_entropy(dd, {name}, y);
  r.xy_qprime_q = is_markov_chain(dd, concat(x, y), {name}, q, 1e-9);
  r.i_xy_q = mutual_information(dd, concat(x, y), q);
  r.attains = std::abs(r.i_xy_q - r.q_prime.entropy.bits) <= 1e-9;
  return r;
}

namespace {

AuxProblem ci_problem(const JointDistribution& dist, const Names& x, const Names& y) {
  require_disjoint(x, y);
  AuxProblem pb;
  pb.base = marginalize(dist, concat(x, y));
  pb.q_name = fresh_name(pb.base, "Q");
  pb.conditioning = concat(x, y);
  return pb;
}

// Deterministic starts: Q = X, Q = Y, Q = Q*, constant Q. Starts needing more
// values than |Q| are skipped.
std::vector<Conditional> ci_starts(const AuxProblem& pb, size_t nx, size_t ny) {
  const size_t qc = resolved_q_card(pb);
  std::vector<Conditional> out;
  auto copy_range = [&](size_t lo, size_t hi) {
    std::map<std::vector<size_t>, size_t> ids;
    auto w = deterministic_conditional(pb, [&](std::span<const size_t> o) {
      std::vector<size_t> key(o.begin() + static_cast<long>(lo), o.begin() + static_cast<long>(hi));
      return ids.emplace(key, ids.size()).first->second;
    });
    if (ids.size() <= qc) out.push_back(std::move(w));
  };
  copy_range(0, nx);
  copy_range(nx, nx + ny);
  Names xs(pb.conditioning.begin(), pb.conditioning.begin() + static_cast<long>(nx));
  Names ys(pb.conditioning.begin() + static_cast<long>(nx), pb.conditioning.end());
  auto gk = gacs_korner(pb.base, {xs, ys});
  if (gk.components <= qc) {
    out.push_back(deterministic_conditional(pb, [&](std::span<const size_t> o) { return gk.label_of(o); }));
  }
  out.push_back(deterministic_conditional(pb, [](std::span<const size_t>) { return size_t{0}; }));
  return out;
}

AuxOptions with_starts(AuxOptions opts, const AuxProblem& pb, size_t nx, size_t ny) {
  auto starts = ci_starts(pb, nx, ny);
  opts.warm_starts.insert(opts.warm_starts.begin(), starts.begin(), starts.end());
  return opts;
}

}  // namespace

WynerResult wyner_ci(const JointDistribution& dist, const Names& x, const Names& y, const AuxOptions& opts) {
  auto pb = ci_problem(dist, x, y);
  pb.q_card = opts.q_card;
  pb.objective = {{1.0, concat(x, y), {pb.q_name}, {}}};
  pb.constraints = {{x, {pb.q_name}, y}};
  WynerResult r;
  r.solution = solve(pb, with_starts(opts, pb, x.size(), y.size()));
  r.total_private.bits = entropy(dist, concat(x, y)) - r.solution.value.bits;
  r.total_private.note = "lower bound";
  r.solution.value.note = "upper bound";
  return r;
}

AuxSolution common_entropy(const JointDistribution& dist, const Names& x, const Names& y, const AuxOptions& opts) {
  auto pb = ci_problem(dist, x, y);
  pb.q_card = opts.q_card;
  pb.objective = {{1.0, {pb.q_name}, {}, {}}};
  pb.constraints = {{x, {pb.q_name}, y}};
  auto sol = solve(pb, with_starts(opts, pb, x.size(), y.size()));
  sol.value.note = "upper bound";
  return sol;
}

AuxSolution c1_measure(const JointDistribution& dist, const Names& x, const Names& y, const AuxOptions& opts) {
  auto pb = ci_problem(dist, x, y);
  pb.q_card = opts.q_card;
  Names q{pb.q_name};
  pb.objective = {{1.0, y, q, x}, {1.0, x, q, y}, {1.0, x, y, q}};
  auto sol = solve(pb, with_starts(opts, pb, x.size(), y.size()));
  sol.value.bits = std::max(0.0, sol.value.bits);
  sol.value.note = "upper bound";
  return sol;
}

MeasureValue hgr_maximal_correlation(const JointDistribution& dist, const Names& x, const Names& y,
                                     bool restrict_support) {
  require_disjoint(x, y);
  MeasureValue out;
  auto d = snap(dist, &out.note);
  auto m = marginalize(d, concat(x, y));
  const size_t nx = alphabet_product(d, x), ny = alphabet_product(d, y);
  std::vector<double> px(nx, 0.0), py(ny, 0.0);
  for (size_t i = 0; i < nx; ++i) {
    for (size_t j = 0; j < ny; ++j) {
      px[i] += m.p(i * ny + j);
      py[j] += m.p(i * ny + j);
    }
  }
  std::vector<size_t> xi, yi;
  for (size_t i = 0; i < nx; ++i) {
    if (px[i] > 0.0) xi.push_back(i);
  }
  for (size_t j = 0; j < ny; ++j) {
    if (py[j] > 0.0) yi.push_back(j);
  }
  if (!restrict_support && (xi.size() != nx || yi.size() != ny)) {
    throw Error(Errc::DegenerateMarginal, "a marginal outcome has zero probability");
  }
  if (xi.size() < 2 || yi.size() < 2) return out;
  if (gacs_korner(d, {x, y}).components >= 2) {
    out.bits = 1.0;
    return out;
  }
  Eigen::MatrixXd b(xi.size(), yi.size());
  for (size_t r = 0; r < xi.size(); ++r) {
    for (size_t c = 0; c < yi.size(); ++c) {
      b(static_cast<long>(r), static_cast<long>(c)) =
          m.p(xi[r] * ny + yi[c]) / std::sqrt(px[xi[r]] * py[yi[c]]);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b);
  double rho = svd.singularValues()(1);
  out.bits = std::clamp(rho, 0.0, std::nextafter(1.0, 0.0));
  return out;
}

std::vector<IbPoint> ib_curve(const JointDistribution& dist, const Names& of, const Names& about,
                              const std::vector<double>& betas, const IbOptions& opts) {
  require_disjoint(of, about);
  auto m = marginalize(dist, concat(of, about));
  const size_t nyall = alphabet_product(dist, of), nx = alphabet_product(dist, about);
  const size_t nq = nyall + 1;
  std::vector<double> py;
  std::vector<std::vector<double>> pxy;  // p(x | y) for positive y
  std::vector<double> px(nx, 0.0);
  for (size_t yi = 0; yi < nyall; ++yi) {
    double t = 0.0;
    for (size_t xi = 0; xi < nx; ++xi) t += m.p(yi * nx + xi);
    if (t <= 0.0) continue;
    std::vector<double> row(nx);
    for (size_t xi = 0; xi < nx; ++xi) {
      row[xi] = m.p(yi * nx + xi) / t;
      px[xi] += m.p(yi * nx + xi);
    }
    py.push_back(t);
    pxy.push_back(std::move(row));
  }
  const size_t ny = py.size();
  using Enc = std::vector<std::vector<double>>;

  auto stats = [&](const Enc& e, std::vector<double>& pq, std::vector<std::vector<double>>& pxq) {
    pq.assign(nq, 0.0);
    pxq.assign(nq, std::vector<double>(nx, 0.0));
    for (size_t y = 0; y < ny; ++y) {
      for (size_t q = 0; q < nq; ++q) {
        double w = py[y] * e[y][q];
        pq[q] += w;
        for (size_t x = 0; x < nx; ++x) pxq[q][x] += w * pxy[y][x];
      }
    }
    for (size_t q = 0; q < nq; ++q) {
      if (pq[q] > 0.0) {
        for (auto& v : pxq[q]) v /= pq[q];
      }
    }
  };
  auto measure = [&](const Enc& e) {
    std::vector<double> pq;
    std::vector<std::vector<double>> pxq;
    stats(e, pq, pxq);
    double rate = 0.0, rel = 0.0;
    for (size_t y = 0; y < ny; ++y) {
      for (size_t q = 0; q < nq; ++q) {
        if (e[y][q] > 0.0) rate += py[y] * e[y][q] * std::log2(e[y][q] / pq[q]);
      }
    }
    for (size_t q = 0; q < nq; ++q) {
      for (size_t x = 0; x < nx; ++x) {
        if (pxq[q][x] > 0.0) rel += pq[q] * pxq[q][x] * std::log2(pxq[q][x] / px[x]);
      }
    }
    return std::pair{std::max(0.0, rate), std::max(0.0, rel)};
  };
  auto iterate = [&](Enc e, double beta, bool& converged) {
    std::vector<double> pq;
    std::vector<std::vector<double>> pxq;
    converged = false;
    for (size_t it = 0; it < opts.max_iters; ++it) {
      stats(e, pq, pxq);
      double change = 0.0;
      Enc next(ny, std::vector<double>(nq, 0.0));
      for (size_t y = 0; y < ny; ++y) {
        std::vector<double> logw(nq, -INFINITY);
        double hi = -INFINITY;
        for (size_t q = 0; q < nq; ++q) {
          if (pq[q] <= 0.0) continue;
          double kl = 0.0;
          bool finite = true;
          for (size_t x = 0; x < nx; ++x) {
            if (pxy[y][x] <= 0.0) continue;
            if (pxq[q][x] <= 0.0) {
              finite = false;
              break;
            }
            kl += pxy[y][x] * std::log2(pxy[y][x] / pxq[q][x]);
          }
          if (!finite) continue;
          logw[q] = std::log2(pq[q]) - beta * kl;
          hi = std::max(hi, logw[q]);
        }
        if (!std::isfinite(hi)) {
          next[y] = e[y];
          continue;
        }
        double z = 0.0;
        for (size_t q = 0; q < nq; ++q) {
          next[y][q] = std::isfinite(logw[q]) ? std::exp2(logw[q] - hi) : 0.0;
          z += next[y][q];
        }
        for (size_t q = 0; q < nq; ++q) {
          next[y][q] /= z;
          change = std::max(change, std::abs(next[y][q] - e[y][q]));
        }
      }
      e.swap(next);
      if (change < opts.tol) {
        converged = true;
        break;
      }
    }
    return e;
  };

  std::vector<Enc> starts;
  Enc ident(ny, std::vector<double>(nq, 0.0));
  for (size_t y = 0; y < ny; ++y) ident[y][y] = 1.0;
  starts.push_back(ident);
  Enc constant(ny, std::vector<double>(nq, 0.0));
  for (size_t y = 0; y < ny; ++y) constant[y][0] = 1.0;
  starts.push_back(constant);
  for (size_t k = 0; k < opts.restarts; ++k) {
    auto rng = stream_rng(opts.seed, k);
    std::exponential_distribution<double> expo(1.0);
    Enc e(ny, std::vector<double>(nq));
    for (auto& row : e) {
      double z = 0.0;
      for (auto& v : row) z += v = expo(rng);
      for (auto& v : row) v /= z;
    }
    starts.push_back(std::move(e));
  }

  std::vector<IbPoint> points;
  for (double beta : betas) {
    IbPoint best;
    double best_l = INFINITY;
    for (const auto& s : starts) {
      bool conv = false;
      auto e = iterate(s, beta, conv);
      auto [rate, rel] = measure(e);
      double l = rate - beta * rel;
      if (l < best_l - 1e-12) {
        best_l = l;
        best = {beta, rate, rel, conv};
      }
    }
    points.push_back(best);
  }
  std::sort(points.begin(), points.end(), [](const IbPoint& a, const IbPoint& b) {
    return a.rate != b.rate ? a.rate < b.rate : a.beta < b.beta;
  });
  double envelope = 0.0;
  for (auto& p : points) {
    envelope = std::max(envelope, p.relevance);
    p.relevance = envelope;
  }
  return points;
}

}  // namespace pidlab
