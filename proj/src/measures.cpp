#include "pidlab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <set>

#include "pidlab/error.hpp"

namespace pidlab {

namespace {

struct Projection {
  std::vector<size_t> idx;
  std::vector<size_t> strides;
  size_t size = 1;
};

Projection project(const JointDistribution& dist, const Names& vars) {
  Projection pr;
  for (const auto& n : vars) pr.idx.push_back(dist.index_of(n));
  pr.strides.assign(pr.idx.size(), 1);
  for (size_t k = pr.idx.size(); k-- > 0;) {
    pr.strides[k] = pr.size;
    pr.size *= dist.variables()[pr.idx[k]].alphabet.size();
  }
  return pr;
}

size_t target(const JointDistribution& dist, const Projection& pr, size_t cell) {
  size_t t = 0;
  for (size_t k = 0; k < pr.idx.size(); ++k) t += dist.coordinate(cell, pr.idx[k]) * pr.strides[k];
  return t;
}

Names join(const Names& a, const Names& b) {
  Names out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

void require_disjoint(const std::vector<const Names*>& sets) {
  std::set<std::string> seen;
  for (const auto* s : sets) {
    std::set<std::string> local(s->begin(), s->end());
    for (const auto& n : local) {
      if (!seen.insert(n).second) throw Error(Errc::OverlappingSets, "variable '" + n + "' appears in two sets");
    }
  }
}

}  // namespace

std::vector<double> marginal_probs(const JointDistribution& dist, const Names& vars) {
  if (dist.is_exact()) {
    auto ex = marginal_exact(dist, vars);
    std::vector<double> out;
    out.reserve(ex.size());
    for (const auto& r : ex) out.push_back(r.get_d());
    return out;
  }
  auto pr = project(dist, vars);
  std::vector<double> out(pr.size, 0.0);
  for (size_t c = 0; c < dist.size(); ++c) {
    if (dist.p(c) > 0.0) out[target(dist, pr, c)] += dist.p(c);
  }
  return out;
}

std::vector<Rational> marginal_exact(const JointDistribution& dist, const Names& vars) {
  if (!dist.is_exact()) throw Error(Errc::BadParams, "exact marginal requested on a float distribution");
  auto pr = project(dist, vars);
  std::vector<Rational> out(pr.size, Rational(0));
  for (size_t c = 0; c < dist.size(); ++c) {
    if (sgn(dist.q(c)) != 0) out[target(dist, pr, c)] += dist.q(c);
  }
  return out;
}

double entropy_of(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double entropy(const JointDistribution& dist, const Names& vars) {
  if (vars.empty()) return 0.0;
  auto m = marginal_probs(dist, vars);
  return entropy_of(m);
}

double conditional_entropy(const JointDistribution& dist, const Names& vars, const Names& given) {
  require_disjoint({&vars, &given});
  return entropy(dist, join(vars, given)) - entropy(dist, given);
}

double mutual_information(const JointDistribution& dist, const Names& a, const Names& b, const Names& given) {
  if (a.empty() || b.empty()) throw Error(Errc::BadParams, "mutual information needs nonempty sets");
  require_disjoint({&a, &b, &given});
  return entropy(dist, join(a, given)) + entropy(dist, join(b, given)) -
         entropy(dist, join(join(a, b), given)) - entropy(dist, given);
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error(Errc::SupportMismatch, "distributions over different alphabets");
  double d = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) throw Error(Errc::SupportMismatch, "p has mass where q has none");
    d += p[i] * std::log2(p[i] / q[i]);
  }
  return d;
}

double kl_divergence(const JointDistribution& p, const JointDistribution& q) {
  if (p.variables() != q.variables()) throw Error(Errc::SupportMismatch, "distributions over different alphabets");
  if (p.is_exact() && q.is_exact()) {
    for (size_t c = 0; c < p.size(); ++c) {
      if (sgn(p.q(c)) > 0 && sgn(q.q(c)) == 0) throw Error(Errc::SupportMismatch, "p has mass where q has none");
    }
  }
  return kl_divergence(p.probs(), q.probs());
}

double co_information(const JointDistribution& dist, const Names& a, const Names& b, const Names& c) {
  if (c.empty()) throw Error(Errc::BadParams, "co-information needs three nonempty sets");
  require_disjoint({&a, &b, &c});
  return mutual_information(dist, a, b) - mutual_information(dist, a, b, c);
}

MarkovCheck is_markov_chain(const JointDistribution& dist, const Names& x, const Names& y, const Names& z,
                            double tol) {
  require_disjoint({&x, &y, &z});
  // Walk every (x,y,z) cell of the marginal table, reconstructing sub-indices.
  size_t nx = 1, ny = 1, nz = 1;
  for (const auto& n : x) nx *= dist.variable(n).alphabet.size();
  for (const auto& n : y) ny *= dist.variable(n).alphabet.size();
  for (const auto& n : z) nz *= dist.variable(n).alphabet.size();
  MarkovCheck out;
  if (dist.is_exact()) {
    auto m3 = marginal_exact(dist, join(join(x, y), z));
    auto mxy = marginal_exact(dist, join(x, y));
    auto myz = marginal_exact(dist, join(y, z));
    auto my = y.empty() ? std::vector<Rational>{Rational(1)} : marginal_exact(dist, y);
    bool ok = true;
    for (size_t i = 0; i < nx; ++i) {
      for (size_t j = 0; j < ny; ++j) {
        for (size_t k = 0; k < nz; ++k) {
          Rational lhs = my[j] * m3[(i * ny + j) * nz + k];
          Rational rhs = mxy[i * ny + j] * myz[j * nz + k];
          if (lhs != rhs) {
            ok = false;
            out.residual = std::max(out.residual, std::abs(Rational(lhs - rhs).get_d()));
          }
        }
      }
    }
    out.holds = ok;
    return out;
  }
  auto m3 = marginal_probs(dist, join(join(x, y), z));
  auto mxy = marginal_probs(dist, join(x, y));
  auto myz = marginal_probs(dist, join(y, z));
  auto my = y.empty() ? std::vector<double>{1.0} : marginal_probs(dist, y);
  for (size_t i = 0; i < nx; ++i) {
    for (size_t j = 0; j < ny; ++j) {
      for (size_t k = 0; k < nz; ++k) {
        double lhs = my[j] * m3[(i * ny + j) * nz + k];
        double rhs = mxy[i * ny + j] * myz[j * nz + k];
        out.residual = std::max(out.residual, std::abs(lhs - rhs));
      }
    }
  }
  out.holds = out.residual <= tol;
  return out;
}

size_t time_horizon(const JointDistribution& dist) {
  static const std::regex label("^([XY])([0-9]+)$");
  std::set<size_t> xs, ys;
  for (const auto& v : dist.variables()) {
    std::smatch m;
    if (!std::regex_match(v.name, m, label)) {
      throw Error(Errc::BadTimeLabels, "variable '" + v.name + "' is not of the form X<i> or Y<i>");
    }
    size_t t = std::stoul(m[2].str());
    (m[1].str() == "X" ? xs : ys).insert(t);
  }
  if (xs.empty() || xs != ys) throw Error(Errc::BadTimeLabels, "X and Y time indices differ");
  size_t n = xs.size();
  if (*xs.begin() != 1 || *xs.rbegin() != n) throw Error(Errc::BadTimeLabels, "time indices must be 1..N");
  return n;
}

DirectedInformation directed_information(const JointDistribution& dist) {
  DirectedInformation di;
  di.horizon = time_horizon(dist);
  Names xpast, ypast;
  for (size_t i = 1; i <= di.horizon; ++i) {
    xpast.push_back("X" + std::to_string(i));
    double term = mutual_information(dist, xpast, {"Y" + std::to_string(i)}, ypast);
    di.steps.push_back(term);
    di.total += term;
    ypast.push_back("Y" + std::to_string(i));
  }
  return di;
}

}  // namespace pidlab
