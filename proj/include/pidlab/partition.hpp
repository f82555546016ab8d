#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "pidlab/distribution.hpp"

namespace pidlab {

/// Ordered list of distinct state labels.
class GroundSet {
 public:
  explicit GroundSet(std::vector<std::string> labels);

  size_t size() const { return labels_.size(); }
  const std::string& label(size_t i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  /// Throws ParseError for unknown labels.
  size_t index_of(std::string_view label) const;

  bool operator==(const GroundSet& other) const { return labels_ == other.labels_; }

  /// w1..wn
  static std::shared_ptr<const GroundSet> numbered(size_t n, std::string_view prefix = "w");

 private:
  std::vector<std::string> labels_;
};

using GroundPtr = std::shared_ptr<const GroundSet>;

class Event {
 public:
  Event(GroundPtr ground, std::vector<bool> members);
  static Event of(GroundPtr ground, const std::vector<size_t>& elements);
  static Event all(GroundPtr ground);

  const GroundPtr& ground() const { return ground_; }
  bool contains(size_t w) const { return members_[w]; }
  const std::vector<bool>& members() const { return members_; }
  std::vector<size_t> elements() const;
  bool empty() const;
  bool subset_of(const Event& other) const;
  Event intersect(const Event& other) const;

  bool operator==(const Event& other) const;

 private:
  GroundPtr ground_;
  std::vector<bool> members_;
};

/// A partition of a ground set. Blocks are numbered in order of their least
/// element, so two equal partitions compare equal structurally.
class Partition {
 public:
  Partition(GroundPtr ground, const std::vector<size_t>& block_of);
  static Partition from_blocks(GroundPtr ground, const std::vector<std::vector<size_t>>& blocks);
  static Partition singletons(GroundPtr ground);
  static Partition whole(GroundPtr ground);

  const GroundPtr& ground() const { return ground_; }
  size_t num_blocks() const { return num_blocks_; }
  size_t block_of(size_t w) const { return block_of_[w]; }
  const std::vector<size_t>& labels() const { return block_of_; }
  std::vector<std::vector<size_t>> blocks() const;
  Event block_event(size_t w) const;

  bool operator==(const Partition& other) const;

 private:
  GroundPtr ground_;
  std::vector<size_t> block_of_;
  size_t num_blocks_ = 0;
};

/// Throws GroundMismatch unless both live on equal ground sets.
void require_same_ground(const GroundPtr& a, const GroundPtr& b);

/// Ground = support cells (labelled w1..wn in table order); blocks group
/// support cells by the value of `var`. Throws EmptySupport.
Partition induced_partition(const JointDistribution& dist, const std::string& var);

/// True iff every block of `finer` lies inside some block of `coarser`.
bool refines(const Partition& finer, const Partition& coarser);
/// Coarsest common refinement.
Partition join(const Partition& a, const Partition& b);
/// Finest common coarsening, computed as connected components of the graph on
/// the atoms of join(a, b) in which two atoms are adjacent when they share a
/// block of a or of b.
Partition meet(const Partition& a, const Partition& b);

/// K_p(E): states at which the holder of p knows E.
Event knows(const Partition& p, const Event& e);
/// C(E) under the meet of the two partitions.
Event common_knowledge(const Partition& a, const Partition& b, const Event& e);

struct ColoringResult {
  size_t chromatic_number = 0;
  /// Each minimal coloring turned into a partition of the ground set.
  std::vector<Partition> structures;
  bool truncated = false;
};

/// Undirected simple graph as adjacency lists.
using Graph = std::vector<std::vector<size_t>>;
/// Exact chromatic number by branch and bound.
size_t chromatic_number(const Graph& g);
/// Proper colorings with exactly k colors, one per partition of the vertices.
std::vector<std::vector<size_t>> enumerate_colorings(const Graph& g, size_t k, size_t cap, bool* truncated);

/// Private information structures of y relative to x obtained from minimal
/// colorings of the block-conflict graph of y.
ColoringResult private_complement(const Partition& x, const Partition& y, size_t enumerate_cap = 256);

struct RelativeResult {
  std::vector<Partition> structures;
  bool truncated = false;
};

/// Maximally coarse Z with Z v (x ^ y) = y. Throws GroundTooLarge above 12
/// states.
RelativeResult private_relative(const Partition& x, const Partition& y, size_t enumerate_cap = 256);

/// Parses "w1w4|w2|w3". Labels are letter runs followed by digit runs; commas
/// and spaces between labels are also accepted. When `ground` is null the
/// ground set is the labels that appear, in natural order.
Partition parse_partition(std::string_view text, GroundPtr ground = nullptr);
/// Parses "w1w2", "{w1,w2}" or "-" (empty).
Event parse_event(std::string_view text, GroundPtr ground);
/// Collects the labels in natural order (prefix, then numeric suffix).
GroundPtr ground_from_text(const std::vector<std::string>& texts);

std::string format(const Partition& p);
std::string format(const Event& e);

}  // namespace pidlab
