#include <doctest.h>

#include <cmath>

#include "pidlab/axioms.hpp"
#include "pidlab/error.hpp"

using namespace pidlab;

namespace {

bool holds(const AxiomReport& r, Property p) { return r.entry(p).status == PropertyStatus::HoldsOnCorpus; }

}  // namespace

TEST_CASE("property names") {
  CHECK(all_properties().size() == 12);
  CHECK(property_name(Property::PMuc) == "PMuc");
  CHECK(status_name(PropertyStatus::Violated) == "violated");
}

TEST_CASE("gacs-korner redundancy: basic rows hold, strong monotonicity and identity fail") {
  AxiomOptions o;
  o.random_trials = 40;
  o.seed = 3;
  auto r = axiom_harness(Measure::I1, o);
  CHECK(r.skipped.empty());
  for (auto p : {Property::GP, Property::S, Property::I, Property::M}) CHECK(holds(r, p));
  for (auto p : {Property::SM, Property::LP, Property::Id}) {
    CAPTURE(property_name(p));
    const auto& e = r.entry(p);
    REQUIRE(e.status == PropertyStatus::Violated);
    REQUIRE(e.counterexample);
    CHECK(e.counterexample->gap > r.tol);
    CHECK(e.worst_gap == e.counterexample->gap);
  }

  // replay the counterexamples
  const auto& id = *r.entry(Property::Id).counterexample;
  CHECK(conditional_entropy(id.dist, {"Y"}, {"X1", "X2"}) == 0.0);
  double red = i_cap_1(id.dist).bits;
  CHECK(std::abs(red - mutual_information(id.dist, {"X1"}, {"X2"})) == doctest::Approx(id.gap));

  const auto& sm = *r.entry(Property::SM).counterexample;
  CHECK(is_markov_chain(sm.dist, {"X1"}, {"X2"}, {"Y"}).holds);
  CHECK(i_cap_1(sm.dist).bits < mutual_information(sm.dist, {"X1"}, {"Y"}) - r.tol);

  const auto& lp = *r.entry(Property::LP).counterexample;
  CHECK(decompose(lp.dist, Measure::I1).synergy.bits < -r.tol);
}

TEST_CASE("projection redundancy satisfies the basic rows") {
  AxiomOptions o;
  o.random_trials = 40;
  auto r = axiom_harness(Measure::I3, o);
  CHECK(r.skipped.empty());
  for (auto p : {Property::GP, Property::S, Property::I, Property::M, Property::SM, Property::LP, Property::Id}) {
    CAPTURE(property_name(p));
    CHECK(holds(r, p));
    CHECK(r.entry(p).checked >= 40);
  }
}

TEST_CASE("auxiliary redundancy violates local positivity and identity on copy") {
  AxiomOptions o;
  o.corpus = {"XOR", "COPY", "RDN"};
  o.random_trials = 2;
  auto r = axiom_harness(Measure::I2, o);
  for (auto p : {Property::GP, Property::S, Property::I, Property::M, Property::SM}) CHECK(holds(r, p));
  for (auto p : {Property::LP, Property::Id}) {
    const auto& e = r.entry(p);
    REQUIRE(e.counterexample);
    CHECK(e.counterexample->instance == "COPY");
    CHECK(e.worst_gap == doctest::Approx(mutual_information(e.counterexample->dist, {"X1"}, {"X2"})).epsilon(1e-3));
  }
}

TEST_CASE("harness is deterministic") {
  AxiomOptions o;
  o.corpus = {"AND"};
  o.random_trials = 10;
  o.seed = 11;
  auto a = axiom_harness(Measure::I4, o);
  auto b = axiom_harness(Measure::I4, o);
  for (size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(a.entries[i].worst_gap == b.entries[i].worst_gap);
    CHECK(a.entries[i].checked == b.entries[i].checked);
  }
}
