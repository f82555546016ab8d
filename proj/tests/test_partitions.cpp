#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <functional>
#include <random>

#include "pidlab/canonical.hpp"
#include "pidlab/error.hpp"
#include "pidlab/partition.hpp"

using namespace pidlab;

namespace {

// Every partition of {0..n-1} as a restricted growth string.
std::vector<std::vector<size_t>> all_labelings(size_t n) {
  std::vector<std::vector<size_t>> out;
  std::vector<size_t> rgs(n, 0);
  std::function<void(size_t, size_t)> go = [&](size_t i, size_t used) {
    if (i == n) {
      out.push_back(rgs);
      return;
    }
    for (size_t c = 0; c <= used; ++c) {
      rgs[i] = c;
      go(i + 1, std::max(used, c + 1));
    }
  };
  go(0, 0);
  return out;
}

Partition random_partition(std::mt19937_64& rng, const GroundPtr& g) {
  std::uniform_int_distribution<size_t> k(1, g->size());
  size_t blocks = k(rng);
  std::uniform_int_distribution<size_t> pick(0, blocks - 1);
  std::vector<size_t> lab(g->size());
  for (auto& l : lab) l = pick(rng);
  return Partition(g, lab);
}

// Finest common coarsening by exhaustive search.
Partition brute_meet(const Partition& a, const Partition& b) {
  std::vector<Partition> common;
  for (const auto& lab : all_labelings(a.ground()->size())) {
    Partition z(a.ground(), lab);
    if (refines(a, z) && refines(b, z)) common.push_back(z);
  }
  for (const auto& z : common) {
    if (std::all_of(common.begin(), common.end(), [&](const Partition& o) { return refines(z, o); })) return z;
  }
  FAIL("no finest common coarsening");
  return a;
}

}  // namespace

TEST_CASE("example 1 lattice and knowledge operators") {
  auto g = ground_from_text({"w1w4|w2|w3", "w1w2|w3|w4"});
  auto x = parse_partition("w1w4|w2|w3", g);
  auto y = parse_partition("w1w2|w3|w4", g);
  CHECK_FALSE(refines(x, y));
  CHECK(format(join(x, y)) == "w1|w2|w3|w4");
  CHECK(format(meet(x, y)) == "w1w2w4|w3");
  auto e = parse_event("w1w2", g);
  CHECK(format(knows(x, e)) == "w2");
  CHECK(format(knows(y, e)) == "w1w2");
  CHECK(common_knowledge(x, y, e).empty());
  auto e2 = parse_event("{w1,w2,w4}", g);
  CHECK(common_knowledge(x, y, e2) == e2);
  auto all = Event::all(g);
  CHECK(common_knowledge(x, y, all) == all);
  CHECK(knows(x, all) == all);
}

TEST_CASE("example 2 private complement colorings") {
  auto x = parse_partition("w1w3|w4w5|w6w7|w8w9|w10w2|w11w13|w14w15|w12w16");
  auto y = parse_partition("w1w2|w3w4|w5w6|w7w8|w9w10|w11w12|w13w14|w15w16", x.ground());
  auto start = std::chrono::steady_clock::now();
  auto res = private_complement(x, y);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(secs < 10.0);
  CHECK(res.chromatic_number == 3);
  CHECK_FALSE(res.truncated);
  // C5 and C3 components: 30 * 6 proper 3-labelings, divided by 3! relabelings
  CHECK(res.structures.size() == 30);
  auto a = parse_partition("w1w2w7w8w11w12|w3w4w9w10w15w16|w5w6w13w14", x.ground());
  auto b = parse_partition("w1w2w5w6w11w12|w3w4w7w8w13w14|w9w10w15w16", x.ground());
  CHECK(std::find(res.structures.begin(), res.structures.end(), a) != res.structures.end());
  CHECK(std::find(res.structures.begin(), res.structures.end(), b) != res.structures.end());
  for (const auto& z : res.structures) {
    CHECK(join(z, x) == join(y, x));
    CHECK(z.num_blocks() == 3);
  }
}

TEST_CASE("private complement with singleton x") {
  auto g = GroundSet::numbered(4);
  auto res = private_complement(Partition::singletons(g), parse_partition("w1w2|w3|w4", g));
  CHECK(res.chromatic_number == 1);
  REQUIRE(res.structures.size() == 1);
  CHECK(res.structures[0] == Partition::whole(g));
}

TEST_CASE("example 3 private relative structures") {
  auto x = parse_partition("w1w2|w3|w4w5|w6");
  auto y = parse_partition("w1|w2w3|w4|w5w6", x.ground());
  CHECK(format(join(x, y)) == "w1|w2|w3|w4|w5|w6");
  CHECK(format(meet(x, y)) == "w1w2w3|w4w5w6");
  auto res = private_relative(x, y);
  auto z1 = parse_partition("w1w4|w2w3w5w6", x.ground());
  auto z2 = parse_partition("w1w5w6|w2w3w4", x.ground());
  CHECK(res.structures.size() == 2);
  CHECK(std::find(res.structures.begin(), res.structures.end(), z1) != res.structures.end());
  CHECK(std::find(res.structures.begin(), res.structures.end(), z2) != res.structures.end());
  for (const auto& z : res.structures) {
    CHECK(join(z, meet(x, y)) == y);
    CHECK(join(z, x) == join(y, x));
    CHECK(meet(z, x).num_blocks() == 1);
  }
  auto same = private_relative(y, y);
  REQUIRE(same.structures.size() == 1);
  CHECK(same.structures[0].num_blocks() == 1);
}

TEST_CASE("private relative guards the ground size") {
  auto g = GroundSet::numbered(13);
  auto p = Partition::singletons(g);
  CHECK_THROWS_AS(private_relative(p, p), Error);
}

TEST_CASE("induced partitions of the AND support") {
  auto andg = canonical("AND");
  CHECK(format(induced_partition(andg, "X1")) == "w1w2|w3w4");
  CHECK(format(induced_partition(andg, "X2")) == "w1w3|w2w4");
  auto xr = canonical("XOR");
  CHECK(meet(induced_partition(xr, "X1"), induced_partition(xr, "X2")).num_blocks() == 1);
  auto rdn = canonical("RDN");
  auto constant = marginalize(rdn, {"X1", "X2"});
  CHECK(induced_partition(constant, "X1").num_blocks() == 2);
}

TEST_CASE("ground mismatch is reported") {
  auto a = Partition::singletons(GroundSet::numbered(3));
  auto b = Partition::singletons(GroundSet::numbered(4));
  CHECK_THROWS_AS(join(a, b), Error);
  CHECK_THROWS_AS(refines(a, b), Error);
}

TEST_CASE("lattice laws on random partitions") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    std::uniform_int_distribution<size_t> n(1, 8);
    auto g = GroundSet::numbered(n(rng));
    auto p = random_partition(rng, g);
    auto q = random_partition(rng, g);
    auto r = random_partition(rng, g);
    CHECK(meet(p, q) == meet(q, p));
    CHECK(join(p, q) == join(q, p));
    CHECK(meet(meet(p, q), r) == meet(p, meet(q, r)));
    CHECK(join(join(p, q), r) == join(p, join(q, r)));
    CHECK(meet(p, p) == p);
    CHECK(join(p, p) == p);
    CHECK(meet(p, join(p, q)) == p);
    CHECK(join(p, meet(p, q)) == p);
    CHECK(refines(p, meet(p, q)));
    CHECK(refines(join(p, q), p));
    // knowledge operators on a random event
    std::vector<bool> m(g->size());
    for (size_t i = 0; i < m.size(); ++i) m[i] = (rng() & 1) != 0;
    Event e(g, m);
    CHECK(knows(p, e).subset_of(e));
    CHECK(common_knowledge(p, q, e).subset_of(knows(p, e).intersect(knows(q, e))));
    // round trip through text
    CHECK(parse_partition(format(p), g) == p);
  }
}

TEST_CASE("meet agrees with brute-force coarsening search") {
  std::mt19937_64 rng(5);
  int mismatches = 0;
  for (int t = 0; t < 100; ++t) {
    std::uniform_int_distribution<size_t> n(1, 6);
    auto g = GroundSet::numbered(n(rng));
    auto p = random_partition(rng, g);
    auto q = random_partition(rng, g);
    if (!(meet(p, q) == brute_meet(p, q))) ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("relative structures are at least as fine as the chromatic bound") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 60; ++t) {
    std::uniform_int_distribution<size_t> n(2, 7);
    auto g = GroundSet::numbered(n(rng));
    auto x = random_partition(rng, g);
    auto y = random_partition(rng, g);
    auto rel = private_relative(x, y);
    auto comp = private_complement(x, y);
    REQUIRE_FALSE(rel.structures.empty());
    size_t least = rel.structures[0].num_blocks();
    for (const auto& z : rel.structures) least = std::min(least, z.num_blocks());
    CHECK(least >= comp.chromatic_number);
    for (const auto& z : comp.structures) CHECK(join(z, x) == join(y, x));
  }
}

TEST_CASE("chromatic number of small graphs") {
  CHECK(chromatic_number({}) == 0);
  CHECK(chromatic_number({{}, {}}) == 1);
  Graph c5{{1, 4}, {0, 2}, {1, 3}, {2, 4}, {3, 0}};
  CHECK(chromatic_number(c5) == 3);
  Graph k4{{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
  CHECK(chromatic_number(k4) == 4);
  bool trunc = false;
  CHECK(enumerate_colorings(c5, 3, 10, &trunc).size() == 5);
  CHECK_FALSE(trunc);
  CHECK(enumerate_colorings(c5, 3, 4, &trunc).size() == 4);
  CHECK(trunc);
}
