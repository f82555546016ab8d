#include <doctest.h>

#include <cmath>

#include "pidlab/aux_optimizer.hpp"
#include "pidlab/canonical.hpp"
#include "pidlab/error.hpp"
#include "pidlab/random.hpp"

using namespace pidlab;

namespace {

double h2(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

AuxOptions quick() {
  AuxOptions o;
  o.restarts = 3;
  o.max_iters = 150;
  return o;
}

// max I(Q;Y) subject to Q - X1 - Y and Q - X2 - Y
AuxProblem redundancy_problem(const JointDistribution& d) {
  AuxProblem pb;
  pb.base = d;
  pb.objective = {{1.0, {"Q"}, {"Y"}, {}}};
  pb.constraints = {{{"Q"}, {"X1"}, {"Y"}}, {{"Q"}, {"X2"}, {"Y"}}};
  pb.direction = Direction::Maximize;
  return pb;
}

// max H(Q) over deterministic Q with Q - X - Y and Q - Y - X
AuxProblem common_problem(const JointDistribution& d) {
  AuxProblem pb;
  pb.base = d;
  pb.objective = {{1.0, {"Q"}, {}, {}}};
  pb.constraints = {{{"Q"}, {"X"}, {"Y"}}, {{"Q"}, {"Y"}, {"X"}}};
  pb.direction = Direction::Maximize;
  return pb;
}

}  // namespace

TEST_CASE("redundant bit is recovered") {
  auto pb = redundancy_problem(canonical("RDN"));
  auto sol = solve(pb, quick());
  CHECK(sol.value.bits == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(sol.residual <= 1e-6);
  CHECK(sol.bound == BoundKind::Lower);
  auto ev = evaluate(pb, sol.witness);
  CHECK(ev.objective == doctest::Approx(sol.value.bits));
}

TEST_CASE("xor carries no redundant information") {
  auto pb = redundancy_problem(canonical("XOR"));
  auto sol = solve(pb, quick());
  CHECK(sol.value.bits == doctest::Approx(0.0).epsilon(1e-5));
  auto det = enumerate_deterministic(pb, 4);
  CHECK(det.value.bits == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(det.bound == BoundKind::ExactWithinClass);
}

TEST_CASE("single-valued Q is trivial") {
  auto pb = redundancy_problem(canonical("AND"));
  pb.q_card = 1;
  auto sol = solve(pb, quick());
  CHECK(sol.value.bits == doctest::Approx(0.0).epsilon(1e-12));
  for (const auto& row : sol.witness) CHECK(row == std::vector<double>{1.0});
}

TEST_CASE("independent pair needs no common variable") {
  auto d = from_outcomes({{"X", {"0", "1"}}, {"Y", {"0", "1"}}},
                         {{{"0", "0"}, Rational(1, 4)},
                          {{"0", "1"}, Rational(1, 4)},
                          {{"1", "0"}, Rational(1, 4)},
                          {{"1", "1"}, Rational(1, 4)}});
  // Wyner: min I(XY;Q) subject to X - Q - Y
  AuxProblem pb;
  pb.base = d;
  pb.objective = {{1.0, {"X", "Y"}, {"Q"}, {}}};
  pb.constraints = {{{"X"}, {"Q"}, {"Y"}}};
  auto sol = solve(pb, quick());
  CHECK(sol.value.bits == doctest::Approx(0.0).epsilon(1e-4));
  CHECK(sol.bound == BoundKind::Upper);
}

TEST_CASE("deterministic search finds the common part of example 5") {
  auto pb = common_problem(canonical("EX5"));
  auto det = enumerate_deterministic(pb, 7);
  CHECK(det.value.bits == doctest::Approx(h2(1.0 / 32)).epsilon(1e-9));
  CHECK(det.residual <= 1e-9);
}

TEST_CASE("warm start at the optimum is kept") {
  auto pb = redundancy_problem(canonical("RDN"));
  auto copy_x1 = deterministic_conditional(pb, [](std::span<const size_t> o) { return o[0]; });
  auto ev = evaluate(pb, copy_x1);
  CHECK(ev.objective == doctest::Approx(1.0));
  CHECK(ev.residual <= 1e-12);
  auto opts = quick();
  opts.restarts = 0;
  opts.warm_starts = {copy_x1};
  auto sol = solve(pb, opts);
  CHECK(sol.value.bits >= 1.0 - 1e-9);
}

TEST_CASE("solver is deterministic and dominates the deterministic search") {
  for (uint64_t seed = 0; seed < 4; ++seed) {
    auto rng = stream_rng(77, seed);
    auto d = random_distribution(rng, {{2, 2, 2}});
    auto pb = redundancy_problem(d);
    auto det = enumerate_deterministic(pb, 4);
    auto opts = quick();
    opts.warm_starts = {det.witness};
    auto a = solve(pb, opts);
    auto b = solve(pb, opts);
    CHECK(a.value.bits == b.value.bits);
    CHECK(a.witness == b.witness);
    CHECK(a.value.bits >= det.value.bits - 1e-9);
    CHECK(a.value.bits <= mutual_information(d, {"X1"}, {"Y"}) + 1e-9);
    CHECK(a.value.bits <= mutual_information(d, {"X2"}, {"Y"}) + 1e-9);
  }
}

TEST_CASE("malformed problems are rejected") {
  auto pb = redundancy_problem(canonical("AND"));
  pb.objective = {{1.0, {"Z"}, {"Y"}, {}}};
  CHECK_THROWS_AS(solve(pb, quick()), Error);
  pb.objective = {};
  CHECK_THROWS_AS(solve(pb, quick()), Error);
  pb = redundancy_problem(canonical("AND"));
  pb.q_card = 9;
  CHECK_THROWS_AS(solve(pb, quick()), Error);
  CHECK(resolved_q_card(redundancy_problem(canonical("AND"))) == 6);
}

TEST_CASE("auxiliary variable is appended") {
  auto pb = redundancy_problem(canonical("RDN"));
  auto w = deterministic_conditional(pb, [](std::span<const size_t> o) { return o[0]; });
  auto d = with_auxiliary(pb, w);
  CHECK(d.has("Q"));
  CHECK(mutual_information(d, {"Q"}, {"Y"}) == doctest::Approx(1.0));
}
