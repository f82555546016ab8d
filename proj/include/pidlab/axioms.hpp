#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pidlab/distribution.hpp"
#include "pidlab/pid.hpp"

namespace pidlab {

enum class Property { GP, S, I, M, SM, LP, Id, TM, PM, TMu, PMu, PMuc };

std::string property_name(Property p);
const std::vector<Property>& all_properties();

enum class PropertyStatus { HoldsOnCorpus, Violated };
std::string status_name(PropertyStatus s);

/// A replayable violation: evaluate the measure on `dist` with `roles`.
struct Counterexample {
  std::string instance;
  JointDistribution dist;
  Roles roles;
  /// Amount by which the property fails, in bits.
  double gap = 0.0;
  std::string detail;
};

struct PropertyEntry {
  Property property = Property::GP;
  PropertyStatus status = PropertyStatus::HoldsOnCorpus;
  size_t checked = 0;
  /// Largest violation seen (0 when every check passed).
  double worst_gap = 0.0;
  std::optional<Counterexample> counterexample;
};

struct AxiomReport {
  std::string measure;
  size_t corpus_instances = 0;
  size_t random_trials = 0;
  uint64_t seed = 0;
  double tol = 0.0;
  std::vector<PropertyEntry> entries;
  /// Instances skipped because the measure failed on them, with reasons.
  std::vector<std::string> skipped;

  const PropertyEntry& entry(Property p) const;
};

struct AxiomOptions {
  Names corpus{"XOR", "AND", "COPY", "UNQ", "RDN", "RDNUNQXOR", "EX4", "EX11"};
  size_t random_trials = 200;
  uint64_t seed = 1;
  /// 0 picks a per-measure default matching the measure's precision.
  double tol = 0.0;
  PidOptions pid;
};

double default_axiom_tol(Measure m);

/// Checks every property on each corpus instance and on seeded random
/// distributions (alphabets of 2 or 3). Hypotheses are built by composition:
/// copies and functions of X2 for (I), (M) and (SM), Y = X1X2 for (Id), and
/// one split symbol for the refinements behind (TM) and (PM). Expects
/// variables X1, X2 and Y.
AxiomReport axiom_harness(Measure measure, const AxiomOptions& opts = {});

}  // namespace pidlab
