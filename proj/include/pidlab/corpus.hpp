#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pidlab/distribution.hpp"
#include "pidlab/partition.hpp"

namespace pidlab {

struct CorpusEntry {
  /// File stem, e.g. "and" or "ex6b".
  std::string stem;
  /// Argument accepted by canonical().
  std::string canonical_name;
};

/// Every distribution the corpus ships, in emission order.
const std::vector<CorpusEntry>& corpus_entries();

/// The partition examples ("ex1", "ex2", "ex3") as file text.
const std::vector<std::pair<std::string, std::string>>& partition_examples();

/// Writes <stem>.json for every entry and <name>.partitions for every
/// partition example. Output is byte-stable. Throws IoError.
std::vector<std::filesystem::path> emit_corpus(const std::filesystem::path& dir);

/// Loads <dir>/<stem>.json when dir is set, otherwise builds the entry.
JointDistribution corpus_distribution(const std::string& stem,
                                      const std::optional<std::filesystem::path>& dir = std::nullopt);

/// Two partitions on a shared ground set and an optional event, read from
/// lines "X = ...", "Y = ..." and "E = ...". '#' starts a comment.
struct PartitionFile {
  GroundPtr ground;
  Partition x;
  Partition y;
  std::optional<Event> event;
};

PartitionFile parse_partition_file(const std::string& text);
PartitionFile load_partition_file(const std::filesystem::path& path);

/// Loads <dir>/<name>.partitions when dir is set, otherwise the built-in text.
PartitionFile corpus_partitions(const std::string& name,
                                const std::optional<std::filesystem::path>& dir = std::nullopt);

}  // namespace pidlab
