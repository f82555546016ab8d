#include <doctest.h>

#include <cmath>
#include <functional>

#include "pidlab/canonical.hpp"
#include "pidlab/common_info.hpp"
#include "pidlab/error.hpp"
#include "pidlab/random.hpp"

using namespace pidlab;

namespace {

double h(std::initializer_list<double> ps) {
  double s = 0;
  for (double p : ps) s -= p > 0 ? p * std::log2(p) : 0;
  return s;
}

AuxOptions quick() {
  AuxOptions o;
  o.restarts = 2;
  o.max_iters = 100;
  return o;
}

JointDistribution pair(std::vector<std::pair<std::vector<std::string>, Rational>> cells) {
  return from_outcomes({{"X", {"0", "1"}}, {"Y", {"0", "1"}}}, cells);
}

JointDistribution same_bit() { return pair({{{"0", "0"}, Rational(1, 2)}, {{"1", "1"}, Rational(1, 2)}}); }

JointDistribution independent_bits() {
  return pair({{{"0", "0"}, Rational(1, 4)},
               {{"0", "1"}, Rational(1, 4)},
               {{"1", "0"}, Rational(1, 4)},
               {{"1", "1"}, Rational(1, 4)}});
}

JointDistribution dsbs() {
  return pair({{{"0", "0"}, Rational(2, 5)},
               {{"0", "1"}, Rational(1, 10)},
               {{"1", "0"}, Rational(1, 10)},
               {{"1", "1"}, Rational(2, 5)}});
}

// Largest H(f(X)) over labelings f of X for which some g has f(X) = g(Y) a.s.
double common_function_oracle(const JointDistribution& d) {
  const size_t nx = d.variable("X").alphabet.size(), ny = d.variable("Y").alphabet.size();
  std::vector<double> px(nx, 0.0);
  for (size_t c : d.support()) px[d.coordinate(c, 0)] += d.p(c);
  double best = 0.0;
  std::vector<size_t> f(nx, 0);
  std::function<void(size_t, size_t)> go = [&](size_t i, size_t used) {
    if (i == nx) {
      std::vector<long> g(ny, -1);
      for (size_t c : d.support()) {
        long fx = static_cast<long>(f[d.coordinate(c, 0)]);
        long& gy = g[d.coordinate(c, 1)];
        if (gy >= 0 && gy != fx) return;
        gy = fx;
      }
      std::vector<double> mass(used, 0.0);
      for (size_t x = 0; x < nx; ++x) mass[f[x]] += px[x];
      best = std::max(best, entropy_of(mass));
      return;
    }
    for (size_t c = 0; c <= used; ++c) {
      f[i] = c;
      go(i + 1, std::max(used, c + 1));
    }
  };
  go(0, 0);
  return best;
}

}  // namespace

TEST_CASE("gacs-korner on the named examples") {
  auto rdn = canonical("RDN");
  CHECK(gacs_korner(rdn, {{"X1"}, {"X2"}}).entropy.bits == doctest::Approx(1.0));
  CHECK(gacs_korner(canonical("AND"), {{"X1"}, {"X2"}}).entropy.bits == 0.0);
  auto ex5 = gacs_korner(canonical("EX5"), {{"X"}, {"Y"}});
  CHECK(ex5.components == 2);
  CHECK(ex5.entropy.bits == doctest::Approx(h({31.0 / 32, 1.0 / 32})).epsilon(1e-12));
  CHECK(ex5.exact_masses[0] == Rational(31, 32));
  auto three = gacs_korner(rdn, {{"X1"}, {"X2"}, {"Y"}});
  CHECK(three.entropy.bits == doctest::Approx(1.0));
  CHECK_THROWS_AS(gacs_korner(rdn, {{"X1"}}), Error);
}

TEST_CASE("gacs-korner matches exhaustive common-function search") {
  int mismatches = 0, tried = 0;
  for (uint64_t k = 0; tried < 100; ++k) {
    auto rng = stream_rng(901, k);
    auto d = random_distribution(rng, {{3, 3}, {}, 0.5});
    if (d.support().size() > 8) continue;
    ++tried;
    if (std::abs(gacs_korner(d, {{"X"}, {"Y"}}).entropy.bits - common_function_oracle(d)) > 1e-12) ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("gacs-korner bound and monotonicity in the number of groups") {
  for (uint64_t k = 0; k < 60; ++k) {
    auto rng = stream_rng(902, k);
    auto d = random_distribution(rng, {{2, 3, 2}, {"A", "B", "C"}, 0.5});
    double two = gacs_korner(d, {{"A"}, {"B"}}).entropy.bits;
    double three = gacs_korner(d, {{"A"}, {"B"}, {"C"}}).entropy.bits;
    CHECK(three <= two + 1e-12);
    CHECK(two <= mutual_information(d, {"A"}, {"B"}) + 1e-12);
    CHECK(three <= mutual_information(d, {"B"}, {"C"}) + 1e-12);
    CHECK(three <= mutual_information(d, {"A"}, {"C"}) + 1e-12);
  }
}

TEST_CASE("saturability") {
  CHECK(is_saturable(same_bit(), {"X"}, {"Y"}));
  CHECK(is_saturable(independent_bits(), {"X"}, {"Y"}));
  CHECK_FALSE(is_saturable(canonical("COPY"), {"X1"}, {"X2"}));
  CHECK_FALSE(is_saturable(dsbs(), {"X"}, {"Y"}));
}

TEST_CASE("example 5 sufficient statistics") {
  auto d = canonical("EX5");
  auto sy = minimal_sufficient_statistic(d, {"Y"}, {"X"});
  CHECK(sy.classes.size() == 3);
  CHECK(sy.common.bits == doctest::Approx(h({18.0 / 32, 1.0 / 32, 13.0 / 32})).epsilon(1e-12));
  CHECK(sy.common.bits == doctest::Approx(1.151).epsilon(2e-3));
  CHECK(sy.residual_private.bits == 0.0);
  auto sx = minimal_sufficient_statistic(d, {"X"}, {"Y"});
  REQUIRE(sx.classes.size() == 3);
  CHECK(sx.classes[0] == std::vector<std::string>{"1", "3"});
  CHECK(sx.masses[0] == doctest::Approx(21.0 / 32));
  CHECK(sx.common.bits == doctest::Approx(h({21.0 / 32, 5.0 / 16, 1.0 / 32})).epsilon(1e-12));
  CHECK(sx.common.bits < entropy(d, {"X"}));
  CHECK(sx.sum_rule_gap < 1e-12);
}

TEST_CASE("example 6 flips with the perturbation") {
  auto eq = minimal_sufficient_statistic(canonical("EX6"), {"Y"}, {"X"});
  CHECK(eq.common.bits == doctest::Approx(h({3.0 / 8, 5.0 / 8})).epsilon(1e-12));
  auto d = canonical("EX6", Rational(1, 16), Rational(1, 32));
  auto ne = minimal_sufficient_statistic(d, {"Y"}, {"X"});
  CHECK(ne.residual_private.bits == 0.0);
  CHECK(ne.common.bits == entropy(d, {"Y"}));
}

TEST_CASE("component decompositions") {
  auto ex5 = component_decomposition(canonical("EX5"), {"X"}, {"Y"});
  CHECK(ex5.sizes == std::vector<size_t>{1, 1, 1});
  CHECK(ex5.classification == ComponentClass::Minimum);
  CHECK(ex5.merges == 0);
  auto same = component_decomposition(same_bit(), {"X"}, {"Y"});
  CHECK(same.saturable);
  CHECK(same.matches_ergodic);
  CHECK(same.classification == ComponentClass::Both);
  CHECK(same.private_part == doctest::Approx(same.h_y_given_x));
  auto ex6 = component_decomposition(canonical("EX6"), {"X"}, {"Y"});
  CHECK(ex6.classification == ComponentClass::Intermediate);
  CHECK(*std::max_element(ex6.sizes.begin(), ex6.sizes.end()) > 1);
  auto indep = component_decomposition(independent_bits(), {"X"}, {"Y"});
  CHECK(indep.classification == ComponentClass::Maximum);
  CHECK(indep.private_part == doctest::Approx(indep.h_y_given_x));
}

TEST_CASE("double markov reduction") {
  auto ex5 = canonical("EX5");
  auto withq = add_function_variable(ex5, {"Q", {"0"}}, [](std::span<const size_t>) { return size_t{0}; });
  auto r = double_markov_reduce(withq, {"X"}, {"Y"}, {"Q"});
  CHECK(r.xy_qprime_q.holds);
  CHECK(r.h_given_x == 0.0);
  CHECK(r.h_given_y == 0.0);
  CHECK_FALSE(r.attains);
  auto gk = gacs_korner(ex5, {{"X"}, {"Y"}});
  auto star = with_common(ex5, gk, "Q");
  auto s = double_markov_reduce(star, {"X"}, {"Y"}, {"Q"});
  CHECK(s.attains);
  CHECK(s.i_xy_q == doctest::Approx(gk.entropy.bits));
  CHECK_THROWS_AS(double_markov_reduce(canonical("XOR"), {"X1"}, {"X2"}, {"Y"}), Error);
}

TEST_CASE("wyner common information") {
  CHECK(wyner_ci(independent_bits(), {"X"}, {"Y"}, quick()).solution.value.bits ==
        doctest::Approx(0.0).epsilon(1e-6));
  auto same = wyner_ci(same_bit(), {"X"}, {"Y"}, quick());
  CHECK(same.solution.value.bits == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(same.total_private.bits == doctest::Approx(0.0).epsilon(1e-6));
  auto d = dsbs();
  double i = mutual_information(d, {"X"}, {"Y"});
  CHECK(i == doctest::Approx(1 - h({0.2, 0.8})));
  auto w = wyner_ci(d, {"X"}, {"Y"}, quick());
  CHECK(w.solution.residual <= 1e-6);
  CHECK(gacs_korner(d, {{"X"}, {"Y"}}).entropy.bits <= i);
  CHECK(i <= w.solution.value.bits + 1e-6);
  auto ss = minimal_sufficient_statistic(d, {"Y"}, {"X"});
  CHECK(w.solution.value.bits <= ss.common.bits + 1e-6);
}

TEST_CASE("common entropy and the saturability gap") {
  CHECK(common_entropy(independent_bits(), {"X"}, {"Y"}, quick()).value.bits == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(common_entropy(same_bit(), {"X"}, {"Y"}, quick()).value.bits == doctest::Approx(1.0).epsilon(1e-6));
  auto copy = canonical("COPY");
  auto g = common_entropy(copy, {"X1"}, {"X2"}, quick());
  auto w = wyner_ci(copy, {"X1"}, {"X2"}, quick());
  CHECK(g.value.bits >= mutual_information(copy, {"X1"}, {"X2"}) - 1e-6);
  CHECK(g.value.bits >= w.solution.value.bits - 1e-6);

  CHECK(c1_measure(same_bit(), {"X"}, {"Y"}, quick()).value.bits == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(c1_measure(independent_bits(), {"X"}, {"Y"}, quick()).value.bits == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(c1_measure(copy, {"X1"}, {"X2"}, quick()).value.bits > 1e-3);
}

TEST_CASE("maximal correlation") {
  CHECK(hgr_maximal_correlation(independent_bits(), {"X"}, {"Y"}).bits == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(hgr_maximal_correlation(canonical("RDN"), {"X1"}, {"X2"}).bits == 1.0);
  auto d = from_outcomes({{"X", {"0", "1"}}, {"Y", {"0", "1"}}},
                         {{{"0", "0"}, Rational(9, 20)},
                          {{"0", "1"}, Rational(1, 20)},
                          {{"1", "0"}, Rational(1, 20)},
                          {{"1", "1"}, Rational(9, 20)}});
  // oracle: power iteration on B^T B, then deflate the top singular pair
  double b[2][2];
  double px[2] = {0.5, 0.5}, py[2] = {0.5, 0.5};
  double p[2][2] = {{0.45, 0.05}, {0.05, 0.45}};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) b[i][j] = p[i][j] / std::sqrt(px[i] * py[j]);
  }
  double u[2] = {std::sqrt(px[0]), std::sqrt(px[1])}, v[2] = {std::sqrt(py[0]), std::sqrt(py[1])};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) b[i][j] -= u[i] * v[j];
  }
  double w[2] = {1.0, 0.3};
  double sigma = 0;
  for (int it = 0; it < 200; ++it) {
    double t[2] = {b[0][0] * w[0] + b[0][1] * w[1], b[1][0] * w[0] + b[1][1] * w[1]};
    double s[2] = {b[0][0] * t[0] + b[1][0] * t[1], b[0][1] * t[0] + b[1][1] * t[1]};
    double n = std::hypot(s[0], s[1]);
    w[0] = s[0] / n;
    w[1] = s[1] / n;
    sigma = std::sqrt(n);
  }
  CHECK(sigma == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(hgr_maximal_correlation(d, {"X"}, {"Y"}).bits == doctest::Approx(sigma).epsilon(1e-6));
  auto ex5 = canonical("EX5");
  CHECK(hgr_maximal_correlation(ex5, {"X"}, {"Y"}).bits == 1.0);
  CHECK(hgr_maximal_correlation(canonical("AND"), {"X1"}, {"Y"}).bits < 1.0);
  auto padded = from_outcomes({{"X", {"0", "1", "2"}}, {"Y", {"0", "1"}}},
                              {{{"0", "0"}, Rational(1, 2)}, {{"1", "1"}, Rational(1, 2)}});
  CHECK(hgr_maximal_correlation(padded, {"X"}, {"Y"}).bits == 1.0);
  CHECK_THROWS_AS(hgr_maximal_correlation(padded, {"X"}, {"Y"}, false), Error);
}

TEST_CASE("maximal correlation is one exactly on decomposable pairs") {
  for (uint64_t k = 0; k < 80; ++k) {
    auto rng = stream_rng(903, k);
    auto d = random_distribution(rng, {{3, 3}, {}, 0.45});
    double rho = hgr_maximal_correlation(d, {"X"}, {"Y"}).bits;
    bool decomposable = gacs_korner(d, {{"X"}, {"Y"}}).entropy.bits > 0;
    CHECK(rho <= 1.0);
    CHECK((rho == 1.0) == decomposable);
  }
}

TEST_CASE("information bottleneck extremes") {
  auto ex5 = canonical("EX5");
  auto curve = ib_curve(ex5, {"Y"}, {"X"}, {0.01, 1.0, 4.0, 200.0});
  REQUIRE(curve.size() == 4);
  CHECK(curve.front().rate == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(curve.front().relevance == doctest::Approx(0.0).epsilon(1e-6));
  double ixy = mutual_information(ex5, {"X"}, {"Y"});
  CHECK(curve.back().relevance == doctest::Approx(ixy).epsilon(1e-4));
  CHECK(curve.back().rate == doctest::Approx(1.151).epsilon(2e-3));
  for (size_t i = 1; i < curve.size(); ++i) {
    CHECK(curve[i].rate >= curve[i - 1].rate);
    CHECK(curve[i].relevance >= curve[i - 1].relevance);
  }
  for (const auto& p : curve) CHECK(p.relevance <= ixy + 1e-9);
  for (const auto& p : ib_curve(independent_bits(), {"Y"}, {"X"}, {0.5, 5.0, 50.0})) {
    CHECK(p.relevance == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("theorem 1 sum rule on random distributions") {
  for (uint64_t k = 0; k < 50; ++k) {
    auto rng = stream_rng(904, k);
    auto d = random_distribution(rng, {{3, 3}, {}, 0.3});
    auto ss = minimal_sufficient_statistic(d, {"Y"}, {"X"});
    CHECK(ss.sum_rule_gap < 1e-12);
    CHECK(ss.common.bits >= mutual_information(d, {"X"}, {"Y"}) - 1e-12);
  }
}
