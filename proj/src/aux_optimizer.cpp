#include "pidlab/aux_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>

#include "pidlab/error.hpp"
#include "pidlab/parallel.hpp"
#include "pidlab/random.hpp"

namespace pidlab {

std::string bound_kind_name(BoundKind k) {
  switch (k) {
    case BoundKind::Upper:
      return "upper";
    case BoundKind::Lower:
      return "lower";
    case BoundKind::Exact:
      return "exact";
    case BoundKind::ExactWithinClass:
      return "exact-within-class";
  }
  return "unknown";
}

namespace {

constexpr double kTiny = 1e-300;

// An entropy H(T, Q) over the support cells; t_of_cell maps a cell to its
// T-marginal index.
struct QSet {
  std::vector<uint32_t> t_of_cell;
  size_t t_size = 1;
  // coefficient per channel: [0] objective, [1 + j] constraint j
  std::vector<double> coef;
};

struct Compiled {
  size_t qc = 1;
  size_t rows = 0;
  std::vector<double> pv;
  std::vector<uint32_t> row_of;
  std::vector<double> row_mass;
  std::vector<std::vector<size_t>> row_outcome;  // conditioning symbol indices
  std::vector<std::vector<std::string>> row_labels;
  Names conditioning;
  std::vector<double> constant;  // per channel
  std::vector<QSet> sets;
  size_t channels = 1;
  double sign = 1.0;
};

struct SetKey {
  std::vector<size_t> vars;
  bool has_q;
  auto operator<=>(const SetKey&) const = default;
};

// Accumulates coef * H(names) into `acc` for one channel.
void add_entropy(std::map<SetKey, std::vector<double>>& acc, size_t channels, size_t channel, double coef,
                 const std::vector<size_t>& vars, bool has_q) {
  SetKey key{vars, has_q};
  std::sort(key.vars.begin(), key.vars.end());
  auto& v = acc[key];
  if (v.empty()) v.assign(channels, 0.0);
  v[channel] += coef;
}

struct Resolved {
  std::vector<size_t> vars;
  bool has_q = false;
};

Resolved resolve(const JointDistribution& base, const std::string& q_name, const Names& names) {
  Resolved r;
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) throw Error(Errc::BadProblem, "variable '" + n + "' repeated in a term");
    if (n == q_name) {
      r.has_q = true;
    } else if (base.has(n)) {
      r.vars.push_back(base.index_of(n));
    } else {
      throw Error(Errc::BadProblem, "term references unknown variable '" + n + "'");
    }
  }
  return r;
}

Resolved unite(const Resolved& a, const Resolved& b) {
  Resolved r = a;
  r.vars.insert(r.vars.end(), b.vars.begin(), b.vars.end());
  r.has_q = a.has_q || b.has_q;
  return r;
}

void require_disjoint(const Resolved& a, const Resolved& b) {
  if (a.has_q && b.has_q) throw Error(Errc::BadProblem, "Q appears in two arguments of a term");
  for (size_t x : a.vars) {
    if (std::find(b.vars.begin(), b.vars.end(), x) != b.vars.end()) {
      throw Error(Errc::BadProblem, "a variable appears in two arguments of a term");
    }
  }
}

void add_mi(std::map<SetKey, std::vector<double>>& acc, size_t channels, size_t channel, double coef,
            const Resolved& a, const Resolved& b, const Resolved& c) {
  require_disjoint(a, b);
  require_disjoint(a, c);
  require_disjoint(b, c);
  auto ac = unite(a, c), bc = unite(b, c), abc = unite(unite(a, b), c);
  add_entropy(acc, channels, channel, coef, ac.vars, ac.has_q);
  add_entropy(acc, channels, channel, coef, bc.vars, bc.has_q);
  add_entropy(acc, channels, channel, -coef, abc.vars, abc.has_q);
  add_entropy(acc, channels, channel, -coef, c.vars, c.has_q);
}

Compiled compile(const AuxProblem& pb, size_t qc) {
  const auto& base = pb.base;
  if (pb.objective.empty()) throw Error(Errc::BadProblem, "empty objective");
  Compiled cp;
  cp.qc = qc;
  cp.sign = pb.direction == Direction::Minimize ? 1.0 : -1.0;
  cp.channels = 1 + pb.constraints.size();
  cp.conditioning = pb.conditioning.empty() ? base.names() : pb.conditioning;
  std::vector<size_t> cond_idx;
  for (const auto& n : cp.conditioning) {
    if (n == pb.q_name || !base.has(n)) throw Error(Errc::BadProblem, "bad conditioning variable '" + n + "'");
    cond_idx.push_back(base.index_of(n));
  }

  auto support = base.support();
  std::map<std::vector<size_t>, uint32_t> row_index;
  for (size_t cell : support) {
    std::vector<size_t> key;
    for (size_t k : cond_idx) key.push_back(base.coordinate(cell, k));
    row_index.emplace(key, 0);
  }
  // rows follow table order of the conditioning outcome
  for (auto& [key, idx] : row_index) {
    idx = static_cast<uint32_t>(cp.row_outcome.size());
    cp.row_outcome.push_back(key);
    std::vector<std::string> labels;
    for (size_t k = 0; k < key.size(); ++k) labels.push_back(base.variables()[cond_idx[k]].alphabet[key[k]]);
    cp.row_labels.push_back(std::move(labels));
  }
  cp.rows = cp.row_outcome.size();
  cp.row_mass.assign(cp.rows, 0.0);
  for (size_t cell : support) {
    std::vector<size_t> key;
    for (size_t k : cond_idx) key.push_back(base.coordinate(cell, k));
    uint32_t r = row_index.at(key);
    cp.pv.push_back(base.p(cell));
    cp.row_of.push_back(r);
    cp.row_mass[r] += base.p(cell);
  }

  std::map<SetKey, std::vector<double>> acc;
  auto add_term = [&](size_t channel, const InfoTerm& t) {
    if (t.a.empty()) throw Error(Errc::BadProblem, "term with empty first argument");
    auto a = resolve(base, pb.q_name, t.a);
    auto c = resolve(base, pb.q_name, t.given);
    if (t.b.empty()) {
      require_disjoint(a, c);
      auto ac = unite(a, c);
      add_entropy(acc, cp.channels, channel, t.coef, ac.vars, ac.has_q);
      add_entropy(acc, cp.channels, channel, -t.coef, c.vars, c.has_q);
    } else {
      add_mi(acc, cp.channels, channel, t.coef, a, resolve(base, pb.q_name, t.b), c);
    }
  };
  for (const auto& t : pb.objective) add_term(0, t);
  for (size_t j = 0; j < pb.constraints.size(); ++j) {
    const auto& m = pb.constraints[j];
    if (m.a.empty() || m.b.empty() || m.c.empty()) throw Error(Errc::BadProblem, "Markov chain with an empty end");
    add_mi(acc, cp.channels, 1 + j, 1.0, resolve(base, pb.q_name, m.a), resolve(base, pb.q_name, m.c),
           resolve(base, pb.q_name, m.b));
  }

  cp.constant.assign(cp.channels, 0.0);
  for (const auto& [key, coefs] : acc) {
    if (std::all_of(coefs.begin(), coefs.end(), [](double c) { return c == 0.0; })) continue;
    if (!key.has_q) {
      if (key.vars.empty()) continue;
      Names names;
      for (size_t k : key.vars) names.push_back(base.variables()[k].name);
      double h = entropy(base, names);
      for (size_t ch = 0; ch < cp.channels; ++ch) cp.constant[ch] += coefs[ch] * h;
      continue;
    }
    QSet s;
    s.coef = coefs;
    std::vector<size_t> strides(key.vars.size(), 1);
    for (size_t k = key.vars.size(); k-- > 0;) {
      strides[k] = s.t_size;
      s.t_size *= base.variables()[key.vars[k]].alphabet.size();
    }
    for (size_t cell : support) {
      size_t t = 0;
      for (size_t k = 0; k < key.vars.size(); ++k) t += base.coordinate(cell, key.vars[k]) * strides[k];
      s.t_of_cell.push_back(static_cast<uint32_t>(t));
    }
    cp.sets.push_back(std::move(s));
  }
  return cp;
}

// Entropy of each Q-set under w (flattened rows x qc).
void set_entropies(const Compiled& cp, const std::vector<double>& w, std::vector<std::vector<double>>& m,
                   std::vector<double>& h) {
  const size_t qc = cp.qc;
  m.resize(cp.sets.size());
  h.assign(cp.sets.size(), 0.0);
  for (size_t s = 0; s < cp.sets.size(); ++s) {
    const auto& set = cp.sets[s];
    auto& ms = m[s];
    ms.assign(set.t_size * qc, 0.0);
    for (size_t v = 0; v < cp.pv.size(); ++v) {
      const double* row = &w[cp.row_of[v] * qc];
      double* out = &ms[set.t_of_cell[v] * qc];
      for (size_t q = 0; q < qc; ++q) out[q] += cp.pv[v] * row[q];
    }
    double acc = 0.0;
    for (double x : ms) {
      if (x > 0.0) acc -= x * std::log2(x);
    }
    h[s] = acc;
  }
}

std::vector<double> channel_values(const Compiled& cp, const std::vector<double>& h) {
  std::vector<double> out = cp.constant;
  for (size_t s = 0; s < cp.sets.size(); ++s) {
    for (size_t ch = 0; ch < cp.channels; ++ch) out[ch] += cp.sets[s].coef[ch] * h[s];
  }
  return out;
}

struct Point {
  double objective = 0.0;
  double residual = 0.0;
  std::vector<double> w;
};

Point score(const Compiled& cp, const std::vector<double>& w) {
  std::vector<std::vector<double>> m;
  std::vector<double> h;
  set_entropies(cp, w, m, h);
  auto vals = channel_values(cp, h);
  Point p;
  p.objective = vals[0];
  for (size_t ch = 1; ch < cp.channels; ++ch) p.residual = std::max(p.residual, vals[ch]);
  p.w = w;
  return p;
}

// Penalized objective and its gradient with respect to w.
double penalized(const Compiled& cp, const std::vector<double>& w, double lambda, std::vector<double>* grad) {
  std::vector<std::vector<double>> m;
  std::vector<double> h;
  set_entropies(cp, w, m, h);
  auto vals = channel_values(cp, h);
  double f = cp.sign * vals[0];
  for (size_t ch = 1; ch < cp.channels; ++ch) f += lambda * vals[ch];
  if (!grad) return f;
  const size_t qc = cp.qc;
  grad->assign(w.size(), 0.0);
  for (size_t s = 0; s < cp.sets.size(); ++s) {
    const auto& set = cp.sets[s];
    double weight = cp.sign * set.coef[0];
    for (size_t ch = 1; ch < cp.channels; ++ch) weight += lambda * set.coef[ch];
    if (weight == 0.0) continue;
    const auto& ms = m[s];
    for (size_t v = 0; v < cp.pv.size(); ++v) {
      const double* mrow = &ms[set.t_of_cell[v] * qc];
      double* g = &(*grad)[cp.row_of[v] * qc];
      double c = -weight * cp.pv[v];
      for (size_t q = 0; q < qc; ++q) g[q] += c * std::log2(std::max(mrow[q], kTiny));
    }
  }
  return f;
}

// Strict preference used for every reduction: objective, then residual, then
// the witness table.
bool better(const Compiled& cp, const Point& a, const Point& b) {
  double da = cp.sign * a.objective, db = cp.sign * b.objective;
  if (std::abs(da - db) > 1e-12 * (1.0 + std::abs(db))) return da < db;
  if (a.residual != b.residual) return a.residual < b.residual;
  return a.w < b.w;
}

void consider(const Compiled& cp, std::optional<Point>& best, Point p, double tol) {
  if (!(p.residual <= tol) || !std::isfinite(p.objective)) return;
  if (!std::all_of(p.w.begin(), p.w.end(), [](double v) { return std::isfinite(v); })) return;
  if (!best || better(cp, p, *best)) best = std::move(p);
}

std::vector<double> rounded(const Compiled& cp, const std::vector<double>& w) {
  std::vector<double> out(w.size(), 0.0);
  for (size_t r = 0; r < cp.rows; ++r) {
    const double* row = &w[r * cp.qc];
    size_t arg = static_cast<size_t>(std::max_element(row, row + cp.qc) - row);
    out[r * cp.qc + arg] = 1.0;
  }
  return out;
}

struct RunResult {
  std::optional<Point> best;
  size_t iterations = 0;
};

RunResult descend(const Compiled& cp, std::vector<double> w, const AuxOptions& opts, size_t restart) {
  RunResult rr;
  const size_t qc = cp.qc;
  consider(cp, rr.best, score(cp, w), opts.tol);
  if (qc == 1) return rr;
  // keep every entry positive so multiplicative steps can move off a vertex
  for (size_t r = 0; r < cp.rows; ++r) {
    for (size_t q = 0; q < qc; ++q) w[r * qc + q] = 0.999 * w[r * qc + q] + 0.001 / static_cast<double>(qc);
  }
  std::vector<double> grad, trial(w.size());
  double eta = 1.0;
  auto penalties = opts.penalties;
  if (cp.channels == 1) penalties = {0.0};
  for (double lambda : penalties) {
    double f = penalized(cp, w, lambda, &grad);
    size_t flat = 0;
    size_t it = 0;
    for (; it < opts.max_iters; ++it) {
      bool accepted = false;
      for (int halving = 0; halving < 40; ++halving) {
        for (size_t r = 0; r < cp.rows; ++r) {
          double scale = eta / std::max(cp.row_mass[r], kTiny);
          double hi = -INFINITY;
          for (size_t q = 0; q < qc; ++q) {
            double x = w[r * qc + q];
            double lv = x > 0.0 ? std::log(x) - scale * grad[r * qc + q] : -INFINITY;
            trial[r * qc + q] = lv;
            hi = std::max(hi, lv);
          }
          double z = 0.0;
          for (size_t q = 0; q < qc; ++q) {
            double v = std::isfinite(trial[r * qc + q]) ? std::exp(trial[r * qc + q] - hi) : 0.0;
            trial[r * qc + q] = v;
            z += v;
          }
          for (size_t q = 0; q < qc; ++q) {
            double v = trial[r * qc + q] / z;
            trial[r * qc + q] = v < 1e-280 ? 0.0 : v;
          }
        }
        double ft = penalized(cp, trial, lambda, nullptr);
        if (ft < f) {
          double gain = f - ft;
          w.swap(trial);
          f = penalized(cp, w, lambda, &grad);
          eta = std::min(eta * 1.5, 1e6);
          accepted = true;
          flat = gain <= 1e-13 * (1.0 + std::abs(f)) ? flat + 1 : 0;
          break;
        }
        eta *= 0.5;
      }
      if (!accepted || flat >= 5) break;
    }
    rr.iterations += it;
    Point p = score(cp, w);
    if (opts.trace) {
      *opts.trace << "restart " << restart << " lambda " << lambda << " objective " << p.objective << " residual "
                  << p.residual << " iters " << it << "\n";
    }
    consider(cp, rr.best, p, opts.tol);
  }
  consider(cp, rr.best, score(cp, rounded(cp, w)), opts.tol);
  return rr;
}

std::vector<double> flatten(const Compiled& cp, const Conditional& c) {
  if (c.size() != cp.rows) throw Error(Errc::BadProblem, "warm start has the wrong number of rows");
  std::vector<double> w(cp.rows * cp.qc, 0.0);
  for (size_t r = 0; r < cp.rows; ++r) {
    double z = 0.0;
    for (size_t q = 0; q < c[r].size(); ++q) {
      if (c[r][q] < 0.0) throw Error(Errc::BadProblem, "negative warm start entry");
      if (q >= cp.qc) {
        if (c[r][q] > 0.0) throw Error(Errc::BadProblem, "warm start uses more values than |Q|");
        continue;
      }
      w[r * cp.qc + q] = c[r][q];
      z += c[r][q];
    }
    if (z <= 0.0) throw Error(Errc::BadProblem, "warm start row has no mass");
    for (size_t q = 0; q < cp.qc; ++q) w[r * cp.qc + q] /= z;
  }
  return w;
}

Conditional unflatten(const Compiled& cp, const std::vector<double>& w) {
  Conditional c(cp.rows, std::vector<double>(cp.qc));
  for (size_t r = 0; r < cp.rows; ++r) {
    for (size_t q = 0; q < cp.qc; ++q) c[r][q] = w[r * cp.qc + q];
  }
  return c;
}

size_t default_q_card(size_t rows) { return std::min<size_t>(rows + 2, 8); }

AuxSolution make_solution(const Compiled& cp, const Point& p, BoundKind kind) {
  AuxSolution sol;
  sol.value.bits = p.objective;
  sol.witness = unflatten(cp, p.w);
  sol.rows = cp.row_labels;
  sol.conditioning = cp.conditioning;
  sol.residual = std::max(0.0, p.residual);
  sol.bound = kind;
  return sol;
}

}  // namespace

size_t conditioning_rows(const AuxProblem& problem) { return compile(problem, 1).rows; }

size_t resolved_q_card(const AuxProblem& problem) {
  return problem.q_card > 0 ? problem.q_card : default_q_card(conditioning_rows(problem));
}

AuxEvaluation evaluate(const AuxProblem& problem, const Conditional& w) {
  size_t qc = 1;
  for (const auto& row : w) qc = std::max(qc, row.size());
  auto cp = compile(problem, qc);
  auto flat = flatten(cp, w);
  std::vector<std::vector<double>> m;
  std::vector<double> h;
  set_entropies(cp, flat, m, h);
  auto vals = channel_values(cp, h);
  AuxEvaluation ev;
  ev.objective = vals[0];
  for (size_t ch = 1; ch < cp.channels; ++ch) {
    ev.constraint_values.push_back(vals[ch]);
    ev.residual = std::max(ev.residual, vals[ch]);
  }
  return ev;
}

AuxSolution solve(const AuxProblem& problem, const AuxOptions& opts) {
  size_t rows = conditioning_rows(problem);
  size_t qc = problem.q_card > 0 ? problem.q_card : default_q_card(rows);
  if (qc > 8 && !opts.allow_large_q) throw Error(Errc::BadProblem, "|Q| above 8 needs allow_large_q");
  auto cp = compile(problem, qc);

  std::vector<std::vector<double>> starts;
  for (const auto& ws : opts.warm_starts) starts.push_back(flatten(cp, ws));
  size_t warm = starts.size();
  for (size_t k = 0; k < opts.restarts; ++k) {
    auto rng = stream_rng(opts.seed, k);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> w(cp.rows * qc);
    for (size_t r = 0; r < cp.rows; ++r) {
      double z = 0.0;
      for (size_t q = 0; q < qc; ++q) {
        // sharpen the Dirichlet(1) draw a little so starts are spread out
        double v = std::pow(expo(rng), 2.0);
        w[r * qc + q] = v;
        z += v;
      }
      for (size_t q = 0; q < qc; ++q) w[r * qc + q] = z > 0 ? w[r * qc + q] / z : 1.0 / static_cast<double>(qc);
    }
    starts.push_back(std::move(w));
  }
  if (starts.empty()) starts.push_back(std::vector<double>(cp.rows * qc, 1.0 / static_cast<double>(qc)));

  std::vector<RunResult> runs(starts.size());
  parallel_for(starts.size(), [&](size_t i) { runs[i] = descend(cp, starts[i], opts, i); });

  std::optional<Point> best;
  size_t iterations = 0;
  for (auto& rr : runs) {
    iterations += rr.iterations;
    if (rr.best) consider(cp, best, std::move(*rr.best), opts.tol);
  }
  if (!best) throw Error(Errc::Infeasible, "no start reached a residual within tolerance");
  auto sol = make_solution(cp, *best, problem.direction == Direction::Minimize ? BoundKind::Upper : BoundKind::Lower);
  sol.restarts_used = starts.size() - warm;
  sol.iterations = iterations;
  return sol;
}

AuxSolution enumerate_deterministic(const AuxProblem& problem, size_t f_card_cap, double tol) {
  if (f_card_cap == 0) throw Error(Errc::BadProblem, "range cap must be positive");
  size_t rows = conditioning_rows(problem);
  size_t cap = std::min(f_card_cap, std::max<size_t>(rows, 1));
  // count restricted growth strings with at most `cap` blocks
  std::vector<double> ways(cap + 1, 0.0);
  ways[0] = 1.0;
  for (size_t i = 0; i < rows; ++i) {
    std::vector<double> next(cap + 1, 0.0);
    for (size_t used = 0; used <= cap; ++used) {
      if (ways[used] == 0.0) continue;
      next[used] += ways[used] * static_cast<double>(used);
      if (used < cap) next[used + 1] += ways[used];
    }
    ways = next;
  }
  double total = 0.0;
  for (double x : ways) total += x;
  if (total > 1e7) throw Error(Errc::TooLarge, "deterministic search exceeds 10^7 candidates");

  auto cp = compile(problem, cap);
  std::optional<Point> best;
  std::vector<size_t> rgs(rows, 0);
  std::vector<double> w(rows * cap, 0.0);
  std::function<void(size_t, size_t)> go = [&](size_t i, size_t used) {
    if (i == rows) {
      consider(cp, best, score(cp, w), tol);
      return;
    }
    for (size_t c = 0; c <= used && c < cap; ++c) {
      w[i * cap + c] = 1.0;
      go(i + 1, std::max(used, c + 1));
      w[i * cap + c] = 0.0;
    }
  };
  go(0, 0);
  if (!best) throw Error(Errc::Infeasible, "no deterministic map satisfies the constraints");
  auto sol = make_solution(cp, *best, BoundKind::ExactWithinClass);
  sol.iterations = static_cast<size_t>(total);
  return sol;
}

JointDistribution with_auxiliary(const AuxProblem& problem, const Conditional& w) {
  size_t qc = 1;
  for (const auto& row : w) qc = std::max(qc, row.size());
  auto cp = compile(problem, qc);
  auto flat = flatten(cp, w);
  std::map<std::vector<size_t>, size_t> row_of;
  for (size_t r = 0; r < cp.rows; ++r) row_of[cp.row_outcome[r]] = r;
  std::vector<size_t> cond_idx;
  for (const auto& n : cp.conditioning) cond_idx.push_back(problem.base.index_of(n));
  Variable q{problem.q_name, {}};
  for (size_t i = 0; i < qc; ++i) q.alphabet.push_back(std::to_string(i));
  return add_channel_variable_real(problem.base, q, [&](std::span<const size_t> o) {
    std::vector<size_t> key;
    for (size_t k : cond_idx) key.push_back(o[k]);
    auto it = row_of.find(key);
    if (it == row_of.end()) return std::vector<double>(qc, 1.0 / static_cast<double>(qc));
    return std::vector<double>(flat.begin() + static_cast<long>(it->second * qc),
                               flat.begin() + static_cast<long>((it->second + 1) * qc));
  });
}

Conditional deterministic_conditional(const AuxProblem& problem,
                                      const std::function<size_t(std::span<const size_t>)>& f) {
  auto cp = compile(problem, 1);
  std::vector<size_t> labels;
  size_t width = 1;
  for (const auto& key : cp.row_outcome) {
    labels.push_back(f(key));
    width = std::max(width, labels.back() + 1);
  }
  Conditional c(cp.rows, std::vector<double>(width, 0.0));
  for (size_t r = 0; r < cp.rows; ++r) c[r][labels[r]] = 1.0;
  return c;
}

}  // namespace pidlab
