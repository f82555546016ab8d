#include "pidlab/pid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include <Eigen/Dense>

#include "pidlab/common_info.hpp"
#include "pidlab/error.hpp"

namespace pidlab {

std::string measure_name(Measure m) {
  switch (m) {
    case Measure::I1:
      return "i1";
    case Measure::I2:
      return "i2";
    case Measure::I3:
      return "i3";
    case Measure::I4:
      return "i4";
    case Measure::I4Max:
      return "i4max";
    case Measure::C2GK:
      return "c2gk";
  }
  return "unknown";
}

Measure parse_measure(std::string_view name) {
  for (Measure m : {Measure::I1, Measure::I2, Measure::I3, Measure::I4, Measure::I4Max, Measure::C2GK}) {
    if (measure_name(m) == name) return m;
  }
  throw Error(Errc::UnimplementedMeasure, "no measure named '" + std::string(name) + "'");
}

namespace {

std::string fresh(const JointDistribution& d, std::string base) {
  while (d.has(base)) base += "'";
  return base;
}

JointDistribution triple(const JointDistribution& dist, const Roles& r) {
  if (r.x1 == r.x2 || r.x1 == r.y || r.x2 == r.y) throw Error(Errc::OverlappingSets, "roles must be distinct");
  return marginalize(dist, {r.x1, r.x2, r.y});
}

// Q equal to the dense index of the conditioning coordinates in [lo, hi).
std::optional<Conditional> copy_start(const AuxProblem& pb, std::vector<size_t> positions, size_t qc) {
  std::map<std::vector<size_t>, size_t> ids;
  auto w = deterministic_conditional(pb, [&](std::span<const size_t> o) {
    std::vector<size_t> key;
    for (size_t p : positions) key.push_back(o[p]);
    return ids.emplace(key, ids.size()).first->second;
  });
  if (ids.size() > qc) return std::nullopt;
  return w;
}

AuxProblem redundancy_problem(const JointDistribution& base, const Roles& r) {
  AuxProblem pb;
  pb.base = base;
  pb.q_name = fresh(base, "Q");
  pb.conditioning = base.names();
  pb.objective = {{1.0, {pb.q_name}, {r.y}, {}}};
  pb.constraints = {{{pb.q_name}, {r.x1}, {r.y}}, {{pb.q_name}, {r.x2}, {r.y}}};
  pb.direction = Direction::Maximize;
  return pb;
}

// Best deterministic Q = f(predictors) satisfying both chains, lifted to a
// start over the full conditioning.
struct DeterministicStart {
  double value = -1.0;
  std::optional<Conditional> start;
};

DeterministicStart deterministic_candidate(const AuxProblem& full, const Names& predictors, size_t qc) {
  DeterministicStart out;
  AuxProblem pb = full;
  pb.conditioning = predictors;
  try {
    auto rows = conditioning_rows(pb);
    auto det = enumerate_deterministic(pb, std::min(rows, qc));
    out.value = det.value.bits;
    std::map<std::vector<std::string>, size_t> label;
    for (size_t r = 0; r < det.rows.size(); ++r) {
      const auto& row = det.witness[r];
      label[det.rows[r]] = static_cast<size_t>(std::max_element(row.begin(), row.end()) - row.begin());
    }
    std::vector<size_t> cpos, vpos;
    for (const auto& n : predictors) {
      cpos.push_back(static_cast<size_t>(std::find(full.conditioning.begin(), full.conditioning.end(), n) -
                                         full.conditioning.begin()));
      vpos.push_back(full.base.index_of(n));
    }
    out.start = deterministic_conditional(full, [&](std::span<const size_t> o) {
      std::vector<std::string> key;
      for (size_t i = 0; i < cpos.size(); ++i) key.push_back(full.base.variables()[vpos[i]].alphabet[o[cpos[i]]]);
      return label.at(key);
    });
  } catch (const Error& e) {
    if (e.code() != Errc::TooLarge && e.code() != Errc::Infeasible) throw;
  }
  return out;
}

std::vector<Conditional> redundancy_starts(const AuxProblem& pb, const Roles& r, double* det_value) {
  const size_t qc = resolved_q_card(pb);
  const auto& names = pb.conditioning;
  auto pos = [&](const std::string& n) {
    return static_cast<size_t>(std::find(names.begin(), names.end(), n) - names.begin());
  };
  std::vector<Conditional> starts;
  std::vector<Names> groups{{r.x1}, {r.x2}};
  // Bell(10) maps at most
  Names pair{r.x1, r.x2};
  AuxProblem on_pair = pb;
  on_pair.conditioning = pair;
  if (conditioning_rows(on_pair) <= 10) groups.push_back(pair);
  for (const auto& g : groups) {
    auto det = deterministic_candidate(pb, g, qc);
    if (det.start) starts.push_back(*det.start);
    if (det_value) *det_value = std::max(*det_value, det.value);
  }
  for (const auto& n : {r.x1, r.x2, r.y}) {
    if (auto w = copy_start(pb, {pos(n)}, qc)) starts.push_back(std::move(*w));
  }
  auto gk = gacs_korner(pb.base, {{r.x1}, {r.x2}});
  if (gk.components <= qc) {
    std::vector<size_t> order{pos(r.x1), pos(r.x2)};
    starts.push_back(deterministic_conditional(pb, [&](std::span<const size_t> o) {
      std::vector<size_t> key{o[order[0]], o[order[1]]};
      return gk.label_of(key);
    }));
  }
  starts.push_back(deterministic_conditional(pb, [](std::span<const size_t>) { return size_t{0}; }));
  return starts;
}

}  // namespace

MeasureValue i_cap_1(const JointDistribution& dist, const Roles& roles) {
  auto d = triple(dist, roles);
  auto gk = gacs_korner(d, {{roles.x1}, {roles.x2}});
  auto name = fresh(d, "Q*");
  auto dd = with_common(d, gk, name);
  MeasureValue v;
  v.bits = std::max(0.0, mutual_information(dd, {name}, {roles.y}));
  v.note = gk.entropy.note;
  return v;
}

RedundancySolution i_cap_2(const JointDistribution& dist, const PidOptions& opts) {
  const auto& r = opts.roles;
  auto d = triple(dist, r);
  RedundancySolution out;
  out.deterministic = 0.0;
  bool have = false;
  // solving in both predictor orders makes the value exactly symmetric
  for (bool swapped : {false, true}) {
    auto base = swapped ? marginalize(d, {r.x2, r.x1, r.y}) : d;
    auto pb = redundancy_problem(base, r);
    pb.q_card = opts.aux.q_card;
    auto aux = opts.aux;
    auto starts = redundancy_starts(pb, r, &out.deterministic);
    aux.warm_starts.insert(aux.warm_starts.begin(), starts.begin(), starts.end());
    auto sol = solve(pb, aux);
    if (!have || sol.value.bits > out.solution.value.bits) {
      out.solution = std::move(sol);
      have = true;
    }
  }
  out.disagreement = std::abs(out.solution.value.bits - out.deterministic) > 1e-3;
  out.solution.value.bits = std::max(out.solution.value.bits, out.deterministic);
  out.solution.value.note = "lower bound";
  return out;
}

UniqueSolution ui_2(const JointDistribution& dist, int which, const PidOptions& opts) {
  if (which != 1 && which != 2) throw Error(Errc::BadParams, "predictor index must be 1 or 2");
  const auto& r = opts.roles;
  auto d = triple(dist, r);
  auto pb = redundancy_problem(d, r);
  pb.q_card = opts.aux.q_card;
  const auto& xw = which == 1 ? r.x1 : r.x2;
  pb.objective = {{1.0, {xw}, {r.y}, {pb.q_name}}};
  pb.direction = Direction::Minimize;
  auto aux = opts.aux;
  auto starts = redundancy_starts(pb, r, nullptr);
  aux.warm_starts.insert(aux.warm_starts.begin(), starts.begin(), starts.end());
  UniqueSolution out;
  out.solution = solve(pb, aux);
  out.solution.value.bits = std::max(0.0, out.solution.value.bits);
  out.solution.value.note = "upper bound";
  auto withq = with_auxiliary(pb, out.solution.witness);
  double lhs = mutual_information(withq, {r.y}, {r.x1}) + mutual_information(withq, {r.x2}, {r.y}, {pb.q_name});
  double rhs = mutual_information(withq, {r.y}, {r.x2}) + mutual_information(withq, {r.x1}, {r.y}, {pb.q_name});
  out.symmetry_gap = std::abs(lhs - rhs);
  return out;
}

MeasureValue c_cap_2(const JointDistribution& dist, const Roles& roles) {
  auto d = triple(dist, roles);
  auto gk = gacs_korner(d, {{roles.x1}, {roles.x2}});
  auto name = fresh(d, "Q'");
  auto dd = with_common(d, gk, name);
  auto c = gacs_korner(dd, {{name}, {roles.y}});
  return c.entropy;
}

namespace {

struct Projection {
  double weighted = 0.0;
  double certificate = 0.0;
};

struct MixtureFit {
  double divergence = 0.0;
  double gap = 0.0;
};

// min over lambda in the simplex of D(target || sum_j lambda_j hull_j), in
// bits. Multiplicative (EM) updates with periodic Newton steps on the current
// support; the certificate is the Frank-Wolfe gap.
MixtureFit fit_mixture(const std::vector<double>& target, const std::vector<std::vector<double>>& hull, double tol,
                       size_t iters) {
  const size_t k = hull.size(), ny = target.size();
  std::vector<double> lambda(k, 1.0 / static_cast<double>(k)), mix(ny), ratio(k);
  auto refresh = [&](const std::vector<double>& l) {
    std::fill(mix.begin(), mix.end(), 0.0);
    for (size_t j = 0; j < k; ++j) {
      for (size_t y = 0; y < ny; ++y) mix[y] += l[j] * hull[j][y];
    }
    double f = 0.0;
    for (size_t y = 0; y < ny; ++y) {
      if (target[y] <= 0.0) continue;
      if (mix[y] <= 0.0) return static_cast<double>(INFINITY);
      f += target[y] * std::log(target[y] / mix[y]);
    }
    return f;
  };
  double f = refresh(lambda);
  double gap = INFINITY;
  for (size_t it = 0; it < iters; ++it) {
    double hi = 0.0;
    for (size_t j = 0; j < k; ++j) {
      double s = 0.0;
      for (size_t y = 0; y < ny; ++y) {
        if (target[y] > 0.0) s += target[y] * hull[j][y] / mix[y];
      }
      ratio[j] = s;
      hi = std::max(hi, s);
    }
    gap = std::max(0.0, (hi - 1.0) / std::log(2.0));
    if (gap <= tol) break;
    bool stepped = false;
    if (it % 20 == 19) {
      std::vector<size_t> on;
      for (size_t j = 0; j < k; ++j) {
        if (lambda[j] > 1e-13) on.push_back(j);
      }
      const size_t m = on.size();
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m + 1), static_cast<Eigen::Index>(m + 1));
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m + 1));
      for (size_t a = 0; a < m; ++a) {
        for (size_t b = 0; b < m; ++b) {
          double h = 0.0;
          for (size_t y = 0; y < ny; ++y) {
            if (target[y] > 0.0) h += target[y] * hull[on[a]][y] * hull[on[b]][y] / (mix[y] * mix[y]);
          }
          kkt(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = h;
        }
        kkt(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(m)) = 1.0;
        kkt(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(a)) = 1.0;
        rhs(static_cast<Eigen::Index>(a)) = ratio[on[a]];
      }
      Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
      double tmax = 1.0;
      for (size_t a = 0; a < m; ++a) {
        double dl = sol(static_cast<Eigen::Index>(a));
        if (dl < 0.0) tmax = std::min(tmax, -lambda[on[a]] / dl);
      }
      std::vector<double> trial(k);
      for (double t = tmax; t > 1e-12; t *= 0.5) {
        trial = lambda;
        for (size_t a = 0; a < m; ++a) trial[on[a]] = std::max(0.0, trial[on[a]] + t * sol(static_cast<Eigen::Index>(a)));
        double z = 0.0;
        for (double v : trial) z += v;
        for (auto& v : trial) v /= z;
        double ft = refresh(trial);
        if (ft < f) {
          lambda = trial;
          f = ft;
          stepped = true;
          break;
        }
      }
      if (!stepped) f = refresh(lambda);
    }
    if (!stepped) {
      double z = 0.0;
      for (size_t j = 0; j < k; ++j) {
        // regrow weights a Newton step removed while their ratio says otherwise
        if (lambda[j] == 0.0 && ratio[j] > 1.0) lambda[j] = 1e-9;
        z += lambda[j] *= ratio[j];
      }
      for (auto& l : lambda) l /= z;
      f = refresh(lambda);
    }
  }
  return {std::max(0.0, f / std::log(2.0)), gap};
}

// sum_a p(a) min over the hull of {p(y|b)} of D(p(y|a) || .)
Projection project(const std::vector<std::vector<double>>& pay, const std::vector<std::vector<double>>& pby,
                   const PidOptions& opts) {
  const size_t ny = pay.empty() ? 0 : pay[0].size();
  std::vector<std::vector<double>> hull;
  for (const auto& row : pby) {
    double t = 0.0;
    for (double v : row) t += v;
    if (t <= 0.0) continue;
    std::vector<double> c(ny);
    for (size_t y = 0; y < ny; ++y) c[y] = row[y] / t;
    hull.push_back(std::move(c));
  }
  Projection out;
  for (const auto& row : pay) {
    double pa = 0.0;
    for (double v : row) pa += v;
    if (pa <= 0.0) continue;
    std::vector<double> target(ny);
    for (size_t y = 0; y < ny; ++y) target[y] = row[y] / pa;
    auto fit = fit_mixture(target, hull, opts.projection_tol, opts.projection_iters);
    out.weighted += pa * fit.divergence;
    out.certificate = std::max(out.certificate, fit.gap);
  }
  return out;
}

}  // namespace

ProjectionResult i_cap_3(const JointDistribution& dist, const PidOptions& opts) {
  const auto& r = opts.roles;
  auto d = triple(dist, r);
  const size_t n1 = d.variables()[0].alphabet.size(), n2 = d.variables()[1].alphabet.size(),
               ny = d.variables()[2].alphabet.size();
  std::vector<std::vector<double>> p1(n1, std::vector<double>(ny, 0.0)), p2(n2, std::vector<double>(ny, 0.0));
  for (size_t c : d.support()) {
    auto o = d.outcome(c);
    p1[o[0]][o[2]] += d.p(c);
    p2[o[1]][o[2]] += d.p(c);
  }
  auto a = project(p1, p2, opts);
  auto b = project(p2, p1, opts);
  ProjectionResult out;
  out.ui1 = a.weighted;
  out.ui2 = b.weighted;
  out.certificate = std::max(a.certificate, b.certificate);
  if (out.certificate > 1e-6) {
    throw Error(Errc::NonConvergence, "projection certificate gap " + std::to_string(out.certificate));
  }
  double i1 = mutual_information(d, {r.x1}, {r.y}), i2 = mutual_information(d, {r.x2}, {r.y});
  out.redundancy.bits = std::max(0.0, std::min(i1 - out.ui1, i2 - out.ui2));
  return out;
}

namespace {

// Joint distributions over (x1, x2, y) with both pairwise marginals fixed.
class Polytope {
 public:
  Polytope(const JointDistribution& d) {
    n1_ = d.variables()[0].alphabet.size();
    n2_ = d.variables()[1].alphabet.size();
    ny_ = d.variables()[2].alphabet.size();
    p1_.assign(n1_ * ny_, 0.0);
    p2_.assign(n2_ * ny_, 0.0);
    py_.assign(ny_, 0.0);
    orig_.assign(size(), 0.0);
    for (size_t c : d.support()) {
      auto o = d.outcome(c);
      p1_[o[0] * ny_ + o[2]] += d.p(c);
      p2_[o[1] * ny_ + o[2]] += d.p(c);
      py_[o[2]] += d.p(c);
      orig_[at(o[0], o[1], o[2])] += d.p(c);
    }
  }

  size_t size() const { return n1_ * n2_ * ny_; }
  size_t at(size_t a, size_t b, size_t y) const { return (a * n2_ + b) * ny_ + y; }
  const std::vector<double>& original() const { return orig_; }

  // X1 and X2 conditionally independent given Y.
  std::vector<double> product() const {
    std::vector<double> q(size(), 0.0);
    for (size_t a = 0; a < n1_; ++a) {
      for (size_t b = 0; b < n2_; ++b) {
        for (size_t y = 0; y < ny_; ++y) {
          if (py_[y] > 0.0) q[at(a, b, y)] = p1_[a * ny_ + y] * p2_[b * ny_ + y] / py_[y];
        }
      }
    }
    return q;
  }

  // I_q(X1 X2 ; Y) with the Y marginal taken from p.
  double joint_information(const std::vector<double>& q, std::vector<double>* grad) const {
    std::vector<double> q12(n1_ * n2_, 0.0);
    for (size_t ab = 0; ab < n1_ * n2_; ++ab) {
      for (size_t y = 0; y < ny_; ++y) q12[ab] += q[ab * ny_ + y];
    }
    double f = 0.0;
    if (grad) grad->assign(size(), 0.0);
    for (size_t ab = 0; ab < n1_ * n2_; ++ab) {
      for (size_t y = 0; y < ny_; ++y) {
        double v = q[ab * ny_ + y];
        if (v <= 0.0) continue;
        double l = std::log2(v / q12[ab]);
        f += v * (l - std::log2(py_[y]));
        if (grad) (*grad)[ab * ny_ + y] = l;
      }
    }
    return f;
  }

  // Iterative proportional fitting of each Y slice to both marginals.
  void fit(std::vector<double>& q) const {
    std::vector<double> s1(n1_), s2(n2_);
    for (size_t y = 0; y < ny_; ++y) {
      for (int sweep = 0; sweep < 500; ++sweep) {
        std::fill(s1.begin(), s1.end(), 0.0);
        for (size_t a = 0; a < n1_; ++a) {
          for (size_t b = 0; b < n2_; ++b) s1[a] += q[at(a, b, y)];
        }
        for (size_t a = 0; a < n1_; ++a) {
          double f = s1[a] > 0.0 ? p1_[a * ny_ + y] / s1[a] : 0.0;
          for (size_t b = 0; b < n2_; ++b) q[at(a, b, y)] *= f;
        }
        std::fill(s2.begin(), s2.end(), 0.0);
        for (size_t a = 0; a < n1_; ++a) {
          for (size_t b = 0; b < n2_; ++b) s2[b] += q[at(a, b, y)];
        }
        double err = 0.0;
        for (size_t b = 0; b < n2_; ++b) err = std::max(err, std::abs(s2[b] - p2_[b * ny_ + y]));
        if (err <= 1e-15) break;
        for (size_t b = 0; b < n2_; ++b) {
          double f = s2[b] > 0.0 ? p2_[b * ny_ + y] / s2[b] : 0.0;
          for (size_t a = 0; a < n1_; ++a) q[at(a, b, y)] *= f;
        }
      }
    }
  }

  // Entropic mirror steps followed by refitting; returns the best value seen.
  double descend(std::vector<double> q, double sign, size_t iters, size_t& used) const {
    std::vector<double> grad, trial(size());
    double f = sign * joint_information(q, &grad);
    double best = f;
    double eta = 1.0;
    size_t flat = 0;
    for (size_t it = 0; it < iters; ++it) {
      ++used;
      bool accepted = false;
      for (int h = 0; h < 50; ++h) {
        double hi = -INFINITY;
        for (size_t i = 0; i < size(); ++i) {
          trial[i] = q[i] > 0.0 ? std::log(q[i]) - eta * sign * grad[i] : -INFINITY;
          hi = std::max(hi, trial[i]);
        }
        for (size_t i = 0; i < size(); ++i) trial[i] = std::isfinite(trial[i]) ? std::exp(trial[i] - hi) : 0.0;
        fit(trial);
        double ft = sign * joint_information(trial, nullptr);
        if (ft < f) {
          double gain = f - ft;
          q.swap(trial);
          f = sign * joint_information(q, &grad);
          best = std::min(best, f);
          eta = std::min(eta * 1.5, 1e6);
          accepted = true;
          flat = gain < 1e-14 ? flat + 1 : 0;
          break;
        }
        eta *= 0.5;
      }
      if (!accepted || flat >= 10) break;
    }
    return sign * best;
  }

 private:
  size_t n1_ = 0, n2_ = 0, ny_ = 0;
  std::vector<double> p1_, p2_, py_, orig_;
};

}  // namespace

PolytopeResult i_cap_4(const JointDistribution& dist, bool maximize, const PidOptions& opts) {
  const auto& r = opts.roles;
  auto d = triple(dist, r);
  Polytope poly(d);
  double i1 = mutual_information(d, {r.x1}, {r.y}), i2 = mutual_information(d, {r.x2}, {r.y});
  double i12 = mutual_information(d, {r.x1, r.x2}, {r.y});
  PolytopeResult out;
  out.maximize = maximize;
  double sign = maximize ? -1.0 : 1.0;
  auto start_p = poly.original(), start_prod = poly.product();
  double at_prod = poly.joint_information(start_prod, nullptr);
  double best = i12;
  for (const auto* s : {&start_prod, &start_p}) {
    double v = poly.descend(*s, sign, opts.polytope_iters, out.iterations);
    best = maximize ? std::max(best, v) : std::min(best, v);
  }
  if (maximize) {
    best = std::max(best, i12);
  } else {
    // p and the conditionally independent coupling are both feasible
    best = std::min({best, i12, at_prod});
    best = std::max(best, std::max(i1, i2));
  }
  out.joint = best;
  out.unique1 = best - i2;
  out.redundancy.bits = i1 + i2 - best;
  out.redundancy.note = maximize ? "maximizing variant" : "";
  return out;
}

PidResult decompose(const JointDistribution& dist, Measure measure, const PidOptions& opts) {
  const auto& r = opts.roles;
  auto d = triple(dist, r);
  double i1 = mutual_information(d, {r.x1}, {r.y}), i2 = mutual_information(d, {r.x2}, {r.y});
  double i12 = mutual_information(d, {r.x1, r.x2}, {r.y});
  PidResult out;
  out.measure = measure_name(measure);
  out.total = i12;
  switch (measure) {
    case Measure::I1:
      out.redundancy = i_cap_1(d, r);
      break;
    case Measure::I2: {
      auto s = i_cap_2(d, opts);
      out.redundancy = s.solution.value;
      if (s.disagreement) out.note = "solver and deterministic search differ by more than 1e-3 bits";
      break;
    }
    case Measure::I3:
      out.redundancy = i_cap_3(d, opts).redundancy;
      break;
    case Measure::I4:
    case Measure::I4Max: {
      bool mx = measure == Measure::I4Max;
      out.redundancy = i_cap_4(d, mx, opts).redundancy;
      if (opts.i4_both) out.alternate_redundancy = i_cap_4(d, !mx, opts).redundancy.bits;
      break;
    }
    case Measure::C2GK:
      out.redundancy = c_cap_2(d, r);
      break;
  }
  double red = out.redundancy.bits;
  out.unique1.bits = i1 - red;
  out.unique2.bits = i2 - red;
  out.synergy.bits = i12 - red - out.unique1.bits - out.unique2.bits;
  out.consistency_residual =
      std::max({std::abs(i12 - red - out.unique1.bits - out.unique2.bits - out.synergy.bits),
                std::abs(i1 - red - out.unique1.bits), std::abs(i2 - red - out.unique2.bits)});
  return out;
}

Bounds bounds_check(const JointDistribution& dist, const Roles& r) {
  auto d = triple(dist, r);
  Bounds b;
  b.lower = -std::min({mutual_information(d, {r.x1}, {r.y}, {r.x2}), mutual_information(d, {r.x2}, {r.y}, {r.x1}),
                       mutual_information(d, {r.x1}, {r.x2}, {r.y})});
  b.upper = std::min({mutual_information(d, {r.x1}, {r.y}), mutual_information(d, {r.x2}, {r.y}),
                      mutual_information(d, {r.x1}, {r.x2})});
  b.co_information = co_information(d, {r.x1}, {r.x2}, {r.y});
  b.holds = b.lower - 1e-9 <= b.co_information && b.co_information <= b.upper + 1e-9;
  return b;
}

DiDecomposition di_decompose(const JointDistribution& dist, Measure measure, const PidOptions& opts) {
  size_t n = time_horizon(dist);
  DiDecomposition out;
  out.directed_information = directed_information(dist).total;
  double sum = 0.0;
  for (size_t i = 1; i <= n; ++i) {
    Names xs, ys;
    for (size_t k = 1; k <= i; ++k) xs.push_back("X" + std::to_string(k));
    for (size_t k = 1; k < i; ++k) ys.push_back("Y" + std::to_string(k));
    std::string target = "Y" + std::to_string(i);
    Names keep = xs;
    keep.insert(keep.end(), ys.begin(), ys.end());
    keep.push_back(target);
    auto sub = marginalize(dist, keep);
    sub = merge_variables(sub, xs, "past X");
    if (ys.empty()) {
      sub = add_function_variable(sub, {"past Y", {"-"}}, [](std::span<const size_t>) { return size_t{0}; });
    } else {
      sub = merge_variables(sub, ys, "past Y");
    }
    PidOptions step_opts = opts;
    step_opts.roles = {"past X", "past Y", target};
    DiStep step;
    step.step = i;
    step.result = decompose(sub, measure, step_opts);
    step.conditional_total = mutual_information(sub, {"past X"}, {target}, {"past Y"});
    sum += step.conditional_total;
    out.steps.push_back(std::move(step));
  }
  out.gap = std::abs(sum - out.directed_information);
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", std::abs(v) < 5e-13 ? 0.0 : v);
  return buf;
}

}  // namespace

std::string render_pi_diagram(const PidResult& res, DiagramFormat format) {
  std::ostringstream os;
  if (format == DiagramFormat::Text) {
    os << "measure " << res.measure << "\n";
    os << "  {1,2}  redundant    " << fmt(res.redundancy.bits) << "\n";
    os << "  {1}    unique X1    " << fmt(res.unique1.bits) << "\n";
    os << "  {2}    unique X2    " << fmt(res.unique2.bits) << "\n";
    os << "  {12}   synergistic  " << fmt(res.synergy.bits) << "\n";
    os << "  total               " << fmt(res.total) << "\n";
    return os.str();
  }
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"420\" height=\"300\" viewBox=\"0 0 420 300\">\n";
  os << "  <style>text{font-family:sans-serif;font-size:14px;text-anchor:middle}</style>\n";
  os << "  <title>PI diagram (" << res.measure << ")</title>\n";
  os << "  <ellipse cx=\"210\" cy=\"150\" rx=\"200\" ry=\"135\" fill=\"#f3efe0\" stroke=\"#333\"/>\n";
  os << "  <ellipse cx=\"160\" cy=\"165\" rx=\"95\" ry=\"75\" fill=\"#8fb8de\" fill-opacity=\"0.6\" stroke=\"#333\"/>\n";
  os << "  <ellipse cx=\"260\" cy=\"165\" rx=\"95\" ry=\"75\" fill=\"#e39b7b\" fill-opacity=\"0.6\" stroke=\"#333\"/>\n";
  os << "  <text x=\"210\" y=\"50\">{12} " << fmt(res.synergy.bits) << "</text>\n";
  os << "  <text x=\"115\" y=\"170\">{1} " << fmt(res.unique1.bits) << "</text>\n";
  os << "  <text x=\"305\" y=\"170\">{2} " << fmt(res.unique2.bits) << "</text>\n";
  os << "  <text x=\"210\" y=\"170\">{1,2}</text>\n";
  os << "  <text x=\"210\" y=\"188\">" << fmt(res.redundancy.bits) << "</text>\n";
  os << "  <text x=\"210\" y=\"280\">I(X1X2;Y) = " << fmt(res.total) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace pidlab
