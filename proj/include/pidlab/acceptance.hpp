#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pidlab {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  /// Computed and expected values, one "name: computed vs expected" per line.
  std::vector<std::string> lines;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  /// Read distributions and partition files from here instead of the
  /// built-in corpus.
  std::optional<std::filesystem::path> corpus_dir;
  uint64_t seed = 1;
  /// Restrict to these criteria (1-11); empty runs all.
  std::vector<int> only;
};

/// Runs the reproduction suite. Failures are recorded, never thrown.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

/// "PASS  3  title" or "FAIL  3  title".
std::string summary_line(const CriterionResult& r);

}  // namespace pidlab
