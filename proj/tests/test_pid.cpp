#include <doctest.h>

#include <cmath>

#include "pidlab/canonical.hpp"
#include "pidlab/error.hpp"
#include "pidlab/pid.hpp"
#include "pidlab/random.hpp"

using namespace pidlab;

namespace {

double h(std::initializer_list<double> ps) {
  double s = 0.0;
  for (double p : ps) {
    if (p > 0) s -= p * std::log2(p);
  }
  return s;
}

void check_atoms(const PidResult& r, double red, double u1, double u2, double syn, double eps) {
  CHECK(r.redundancy.bits == doctest::Approx(red).epsilon(eps).scale(1));
  CHECK(r.unique1.bits == doctest::Approx(u1).epsilon(eps).scale(1));
  CHECK(r.unique2.bits == doctest::Approx(u2).epsilon(eps).scale(1));
  CHECK(r.synergy.bits == doctest::Approx(syn).epsilon(eps).scale(1));
  CHECK(r.consistency_residual <= 1e-9);
}

}  // namespace

TEST_CASE("measure names round-trip") {
  for (auto m : {Measure::I1, Measure::I2, Measure::I3, Measure::I4, Measure::I4Max, Measure::C2GK}) {
    CHECK(parse_measure(measure_name(m)) == m);
  }
  CHECK_THROWS_AS(parse_measure("i5"), Error);
}

TEST_CASE("and gate") {
  auto d = canonical("AND");
  // I(Xi;Y) = H(Y) - 1/2 H(Y|Xi=0) with Y ~ (3/4, 1/4)
  double iy = h({0.75, 0.25}) - 0.5;
  CHECK(decompose(d, Measure::I1).redundancy.bits == 0.0);
  for (auto m : {Measure::I3, Measure::I4}) {
    auto r = decompose(d, m);
    check_atoms(r, iy, 0.0, 0.0, 0.5, 5e-3);
  }
  auto p3 = i_cap_3(d);
  CHECK(p3.certificate <= 1e-9);
}

TEST_CASE("copy gate") {
  auto d = canonical("COPY");
  double i12 = mutual_information(d, {"X1"}, {"X2"});
  CHECK(i12 == doctest::Approx(0.252).epsilon(1e-3).scale(1));
  auto r2 = decompose(d, Measure::I2);
  CHECK(r2.synergy.bits == doctest::Approx(-i12).epsilon(1e-3).scale(1));
  for (auto m : {Measure::I3, Measure::I4}) {
    auto r = decompose(d, m);
    double hx = entropy(d, {"X1"});
    check_atoms(r, i12, hx - i12, hx - i12, 0.0, 1e-3);
  }
}

TEST_CASE("canonical atom vectors") {
  struct Case {
    const char* name;
    double a[4];
  };
  for (const Case& c : {Case{"UNQ", {0, 1, 1, 0}}, Case{"RDN", {1, 0, 0, 0}}, Case{"XOR", {0, 0, 0, 1}},
                        Case{"RDNUNQXOR", {1, 1, 1, 1}}}) {
    CAPTURE(c.name);
    auto d = canonical(c.name);
    for (auto m : {Measure::I3, Measure::I4}) {
      check_atoms(decompose(d, m), c.a[0], c.a[1], c.a[2], c.a[3], 1e-3);
    }
  }
}

TEST_CASE("example 4 has zero co-information") {
  auto d = canonical("EX4");
  CHECK(mutual_information(d, {"X1", "X2"}, {"Y"}) == 2.0);
  auto b = bounds_check(d);
  CHECK(b.co_information == 0.0);
  CHECK(b.holds);
}

TEST_CASE("maximizing variant can go negative") {
  auto d = canonical("AND");
  auto lo = i_cap_4(d, false);
  auto hi = i_cap_4(d, true);
  CHECK(hi.joint >= lo.joint - 1e-9);
  CHECK(hi.redundancy.bits <= lo.redundancy.bits + 1e-9);
  auto r = decompose(d, Measure::I4);
  REQUIRE(r.alternate_redundancy);
  CHECK(*r.alternate_redundancy == doctest::Approx(hi.redundancy.bits));
}

TEST_CASE("unique information from the auxiliary program") {
  auto d = canonical("UNQ");
  auto u = ui_2(d, 1);
  CHECK(u.solution.value.bits == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(u.symmetry_gap <= 1e-3);
  CHECK_THROWS_AS(ui_2(d, 3), Error);
}

TEST_CASE("common part of the common part") {
  CHECK(c_cap_2(canonical("RDN")).bits == doctest::Approx(1.0));
  CHECK(c_cap_2(canonical("XOR")).bits == 0.0);
  CHECK(c_cap_2(canonical("COPY")).bits == 0.0);
}

TEST_CASE("redundancy properties on random distributions") {
  PidOptions quick;
  quick.aux.restarts = 1;
  quick.aux.max_iters = 120;
  quick.i4_both = false;
  for (uint64_t k = 0; k < 12; ++k) {
    CAPTURE(k);
    auto rng = stream_rng(2024, k);
    auto d = random_distribution(rng, {{2, 2, 2}, {"X1", "X2", "Y"}, k % 2 ? 0.3 : 0.0});
    double i1 = mutual_information(d, {"X1"}, {"Y"}), i2 = mutual_information(d, {"X2"}, {"Y"});
    auto r1 = i_cap_1(d).bits;
    auto r2 = i_cap_2(d, quick).solution.value.bits;
    // the common part of X1 and X2 is feasible for the auxiliary program
    CHECK(r1 <= r2 + 1e-6);
    CHECK(r2 <= std::min(i1, i2) + 1e-6);
    for (auto m : {Measure::I3, Measure::I4}) {
      auto r = decompose(d, m, quick);
      CHECK(r.redundancy.bits >= -1e-9);
      CHECK(r.unique1.bits >= -1e-6);
      CHECK(r.unique2.bits >= -1e-6);
      CHECK(r.synergy.bits >= -1e-6);
    }
    CHECK(bounds_check(d).holds);
  }
}

TEST_CASE("independent predictors can still share auxiliary redundancy") {
  // Q = [X1 = X2 = 0] satisfies both chains for AND: X1 = 0 fixes Y and X1 = 1 fixes Q.
  auto d = canonical("AND");
  double expected = h({0.75, 0.25}) - 0.75 * h({1.0 / 3, 2.0 / 3});
  auto s = i_cap_2(d);
  CHECK(mutual_information(d, {"X1"}, {"X2"}) == 0.0);
  CHECK(s.solution.value.bits == doctest::Approx(expected).epsilon(1e-6));
  CHECK(s.deterministic == doctest::Approx(expected).epsilon(1e-9));
  CHECK(s.solution.residual <= 1e-6);
  CHECK_FALSE(s.disagreement);
}

TEST_CASE("auxiliary redundancy can exceed predictor information under X1 - Y - X2") {
  // p(y) p(x1|y) p(x2|y) with an exact vertex of the doubly constrained channel
  auto d = from_outcomes({{"X1", {"0", "1"}}, {"X2", {"0", "1"}}, {"Y", {"0", "1"}}},
                         {{{"0", "0", "0"}, Rational(8, 57)},
                          {{"0", "1", "0"}, Rational(4, 57)},
                          {{"1", "0", "0"}, Rational(2, 57)},
                          {{"1", "1", "0"}, Rational(1, 57)},
                          {{"0", "0", "1"}, Rational(8, 57)},
                          {{"0", "1", "1"}, Rational(16, 57)},
                          {{"1", "0", "1"}, Rational(2, 19)},
                          {{"1", "1", "1"}, Rational(4, 19)}});
  REQUIRE(is_markov_chain(d, {"X1"}, {"Y"}, {"X2"}).holds);
  // p(Q = 0 | x1, x2, y)
  const Rational r[2][2][2] = {{{0, 0}, {Rational(4, 9), Rational(2, 9)}},
                               {{Rational(15, 23), Rational(7, 23)}, {1, 1}}};
  auto dq = add_channel_variable(d, {"Q", {"0", "1"}}, [&](std::span<const size_t> o) {
    Rational z = r[o[0]][o[1]][o[2]];
    return std::vector<Rational>{z, 1 - z};
  });
  CHECK(is_markov_chain(dq, {"Q"}, {"X1"}, {"Y"}).holds);
  CHECK(is_markov_chain(dq, {"Q"}, {"X2"}, {"Y"}).holds);
  double iq = mutual_information(dq, {"Q"}, {"Y"});
  CHECK(iq > mutual_information(d, {"X1"}, {"X2"}) + 1e-3);
  CHECK(i_cap_2(d).solution.value.bits >= iq - 1e-4);
}

TEST_CASE("directed information splits per step") {
  // Y_i copies X_i for two steps of i.i.d. fair bits
  auto d = from_outcomes({{"X1", {"0", "1"}}, {"X2", {"0", "1"}}, {"Y1", {"0", "1"}}, {"Y2", {"0", "1"}}},
                         {{{"0", "0", "0", "0"}, Rational(1, 4)},
                          {{"0", "1", "0", "1"}, Rational(1, 4)},
                          {{"1", "0", "1", "0"}, Rational(1, 4)},
                          {{"1", "1", "1", "1"}, Rational(1, 4)}});
  auto di = di_decompose(d, Measure::I3);
  REQUIRE(di.steps.size() == 2);
  CHECK(di.directed_information == doctest::Approx(2.0));
  CHECK(di.gap <= 1e-9);
  for (const auto& s : di.steps) {
    CHECK(s.conditional_total == doctest::Approx(s.result.unique1.bits + s.result.synergy.bits));
  }
}

TEST_CASE("diagram rendering") {
  auto r = decompose(canonical("RDN"), Measure::I1);
  auto text = render_pi_diagram(r, DiagramFormat::Text);
  CHECK(text.find("redundant    1.000000") != std::string::npos);
  auto svg = render_pi_diagram(r, DiagramFormat::Svg);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
}
