#include "pidlab/random.hpp"

#include "pidlab/error.hpp"

namespace pidlab {

std::mt19937_64 stream_rng(uint64_t seed, uint64_t index) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), static_cast<uint32_t>(index),
                    static_cast<uint32_t>(index >> 32), 0x9e3779b9u};
  return std::mt19937_64(seq);
}

JointDistribution random_distribution(std::mt19937_64& rng, const RandomSpec& spec) {
  if (spec.sizes.empty()) throw Error(Errc::BadParams, "no variables requested");
  Names names = spec.names;
  if (names.empty()) {
    if (spec.sizes.size() == 3) {
      names = {"X1", "X2", "Y"};
    } else if (spec.sizes.size() == 2) {
      names = {"X", "Y"};
    } else {
      for (size_t i = 0; i < spec.sizes.size(); ++i) names.push_back("V" + std::to_string(i + 1));
    }
  }
  if (names.size() != spec.sizes.size()) throw Error(Errc::BadParams, "names and sizes differ in length");
  std::vector<Variable> vars;
  size_t n = 1;
  for (size_t i = 0; i < names.size(); ++i) {
    Variable v{names[i], {}};
    for (size_t s = 0; s < spec.sizes[i]; ++s) v.alphabet.push_back(std::to_string(s));
    n *= spec.sizes[i];
    vars.push_back(std::move(v));
  }
  std::uniform_int_distribution<unsigned> w(1, std::max(1u, spec.max_weight));
  std::bernoulli_distribution drop(spec.zero_fraction);
  std::vector<Rational> table(n);
  Rational total(0);
  for (auto& t : table) {
    unsigned x = w(rng);
    t = drop(rng) ? Rational(0) : Rational(x);
    total += t;
  }
  if (total == 0) {
    std::uniform_int_distribution<size_t> pick(0, n - 1);
    table[pick(rng)] = 1;
    total = 1;
  }
  for (auto& t : table) t /= total;
  return JointDistribution::exact(std::move(vars), std::move(table));
}

}  // namespace pidlab
