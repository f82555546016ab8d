#include "pidlab/partition.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "pidlab/error.hpp"

namespace pidlab {

GroundSet::GroundSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw Error(Errc::EmptySupport, "ground set is empty");
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) throw Error(Errc::ParseError, "duplicate state label '" + l + "'");
  }
}

size_t GroundSet::index_of(std::string_view label) const {
  for (size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  throw Error(Errc::ParseError, "unknown state label '" + std::string(label) + "'");
}

GroundPtr GroundSet::numbered(size_t n, std::string_view prefix) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (size_t i = 1; i <= n; ++i) labels.push_back(std::string(prefix) + std::to_string(i));
  return std::make_shared<const GroundSet>(std::move(labels));
}

void require_same_ground(const GroundPtr& a, const GroundPtr& b) {
  if (a == b) return;
  if (!a || !b || !(*a == *b)) throw Error(Errc::GroundMismatch, "partitions live on different ground sets");
}

// ---------------------------------------------------------------- Event

Event::Event(GroundPtr ground, std::vector<bool> members) : ground_(std::move(ground)), members_(std::move(members)) {
  if (members_.size() != ground_->size()) throw Error(Errc::GroundMismatch, "event size differs from ground set");
}

Event Event::of(GroundPtr ground, const std::vector<size_t>& elements) {
  std::vector<bool> m(ground->size(), false);
  for (size_t w : elements) m.at(w) = true;
  return Event(std::move(ground), std::move(m));
}

Event Event::all(GroundPtr ground) {
  size_t n = ground->size();
  return Event(std::move(ground), std::vector<bool>(n, true));
}

std::vector<size_t> Event::elements() const {
  std::vector<size_t> out;
  for (size_t w = 0; w < members_.size(); ++w) {
    if (members_[w]) out.push_back(w);
  }
  return out;
}

bool Event::empty() const { return std::none_of(members_.begin(), members_.end(), [](bool b) { return b; }); }

bool Event::subset_of(const Event& other) const {
  require_same_ground(ground_, other.ground_);
  for (size_t w = 0; w < members_.size(); ++w) {
    if (members_[w] && !other.members_[w]) return false;
  }
  return true;
}

Event Event::intersect(const Event& other) const {
  require_same_ground(ground_, other.ground_);
  std::vector<bool> m(members_.size());
  for (size_t w = 0; w < m.size(); ++w) m[w] = members_[w] && other.members_[w];
  return Event(ground_, std::move(m));
}

bool Event::operator==(const Event& other) const {
  return (ground_ == other.ground_ || *ground_ == *other.ground_) && members_ == other.members_;
}

// ---------------------------------------------------------------- Partition

Partition::Partition(GroundPtr ground, const std::vector<size_t>& block_of) : ground_(std::move(ground)) {
  if (block_of.size() != ground_->size()) throw Error(Errc::GroundMismatch, "labeling size differs from ground set");
  // relabel so blocks are numbered by their least element
  std::map<size_t, size_t> relabel;
  block_of_.resize(block_of.size());
  for (size_t w = 0; w < block_of.size(); ++w) {
    auto [it, fresh] = relabel.try_emplace(block_of[w], relabel.size());
    block_of_[w] = it->second;
  }
  num_blocks_ = relabel.size();
}

Partition Partition::from_blocks(GroundPtr ground, const std::vector<std::vector<size_t>>& blocks) {
  constexpr size_t unset = static_cast<size_t>(-1);
  std::vector<size_t> lab(ground->size(), unset);
  for (size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) throw Error(Errc::ParseError, "empty block");
    for (size_t w : blocks[b]) {
      if (w >= lab.size()) throw Error(Errc::GroundMismatch, "block element outside the ground set");
      if (lab[w] != unset) throw Error(Errc::ParseError, "state '" + ground->label(w) + "' is in two blocks");
      lab[w] = b;
    }
  }
  for (size_t w = 0; w < lab.size(); ++w) {
    if (lab[w] == unset) throw Error(Errc::ParseError, "state '" + ground->label(w) + "' is not covered");
  }
  return Partition(std::move(ground), lab);
}

Partition Partition::singletons(GroundPtr ground) {
  std::vector<size_t> lab(ground->size());
  std::iota(lab.begin(), lab.end(), size_t{0});
  return Partition(std::move(ground), lab);
}

Partition Partition::whole(GroundPtr ground) {
  std::vector<size_t> lab(ground->size(), 0);
  return Partition(std::move(ground), lab);
}

std::vector<std::vector<size_t>> Partition::blocks() const {
  std::vector<std::vector<size_t>> out(num_blocks_);
  for (size_t w = 0; w < block_of_.size(); ++w) out[block_of_[w]].push_back(w);
  return out;
}

Event Partition::block_event(size_t w) const {
  std::vector<bool> m(block_of_.size());
  for (size_t v = 0; v < m.size(); ++v) m[v] = block_of_[v] == block_of_[w];
  return Event(ground_, std::move(m));
}

bool Partition::operator==(const Partition& other) const {
  return (ground_ == other.ground_ || *ground_ == *other.ground_) && block_of_ == other.block_of_;
}

// ---------------------------------------------------------------- lattice

Partition induced_partition(const JointDistribution& dist, const std::string& var) {
  size_t v = dist.index_of(var);
  auto supp = dist.support();
  if (supp.empty()) throw Error(Errc::EmptySupport, "distribution has empty support");
  auto ground = GroundSet::numbered(supp.size());
  std::vector<size_t> lab;
  lab.reserve(supp.size());
  for (size_t c : supp) lab.push_back(dist.coordinate(c, v));
  return Partition(ground, lab);
}

bool refines(const Partition& finer, const Partition& coarser) {
  require_same_ground(finer.ground(), coarser.ground());
  std::vector<size_t> image(finer.num_blocks(), static_cast<size_t>(-1));
  for (size_t w = 0; w < finer.ground()->size(); ++w) {
    size_t& im = image[finer.block_of(w)];
    if (im == static_cast<size_t>(-1)) {
      im = coarser.block_of(w);
    } else if (im != coarser.block_of(w)) {
      return false;
    }
  }
  return true;
}

Partition join(const Partition& a, const Partition& b) {
  require_same_ground(a.ground(), b.ground());
  std::vector<size_t> lab(a.ground()->size());
  for (size_t w = 0; w < lab.size(); ++w) lab[w] = a.block_of(w) * b.num_blocks() + b.block_of(w);
  return Partition(a.ground(), lab);
}

Partition meet(const Partition& a, const Partition& b) {
  require_same_ground(a.ground(), b.ground());
  Partition atoms = join(a, b);
  size_t n = atoms.num_blocks();
  // atoms sharing a block of a (or of b) are adjacent
  Graph g(n);
  auto link = [&](const Partition& p) {
    std::vector<std::set<size_t>> members(p.num_blocks());
    for (size_t w = 0; w < p.ground()->size(); ++w) members[p.block_of(w)].insert(atoms.block_of(w));
    for (const auto& s : members) {
      for (auto i = s.begin(); i != s.end(); ++i) {
        for (auto j = std::next(i); j != s.end(); ++j) {
          g[*i].push_back(*j);
          g[*j].push_back(*i);
        }
      }
    }
  };
  link(a);
  link(b);
  std::vector<size_t> comp(n, static_cast<size_t>(-1));
  size_t ncomp = 0;
  for (size_t s = 0; s < n; ++s) {
    if (comp[s] != static_cast<size_t>(-1)) continue;
    std::vector<size_t> stack{s};
    comp[s] = ncomp;
    while (!stack.empty()) {
      size_t u = stack.back();
      stack.pop_back();
      for (size_t v : g[u]) {
        if (comp[v] == static_cast<size_t>(-1)) {
          comp[v] = ncomp;
          stack.push_back(v);
        }
      }
    }
    ++ncomp;
  }
  std::vector<size_t> lab(a.ground()->size());
  for (size_t w = 0; w < lab.size(); ++w) lab[w] = comp[atoms.block_of(w)];
  return Partition(a.ground(), lab);
}

Event knows(const Partition& p, const Event& e) {
  require_same_ground(p.ground(), e.ground());
  std::vector<bool> inside(p.num_blocks(), true);
  for (size_t w = 0; w < p.ground()->size(); ++w) {
    if (!e.contains(w)) inside[p.block_of(w)] = false;
  }
  std::vector<bool> m(p.ground()->size());
  for (size_t w = 0; w < m.size(); ++w) m[w] = inside[p.block_of(w)];
  return Event(p.ground(), std::move(m));
}

Event common_knowledge(const Partition& a, const Partition& b, const Event& e) { return knows(meet(a, b), e); }

// ---------------------------------------------------------------- coloring

namespace {

// Vertices sorted by decreasing degree; ties by index.
std::vector<size_t> degree_order(const Graph& g) {
  std::vector<size_t> order(g.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t u, size_t v) { return g[u].size() > g[v].size(); });
  return order;
}

bool colorable(const Graph& g, const std::vector<size_t>& order, size_t k) {
  std::vector<size_t> color(g.size(), k);
  std::function<bool(size_t, size_t)> go = [&](size_t i, size_t used) -> bool {
    if (i == order.size()) return true;
    size_t u = order[i];
    // a fresh color is interchangeable with any other fresh one
    size_t limit = std::min(k, used + 1);
    for (size_t c = 0; c < limit; ++c) {
      bool ok = true;
      for (size_t v : g[u]) {
        if (color[v] == c) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      color[u] = c;
      if (go(i + 1, std::max(used, c + 1))) return true;
      color[u] = k;
    }
    return false;
  };
  return go(0, 0);
}

}  // namespace

size_t chromatic_number(const Graph& g) {
  if (g.empty()) return 0;
  auto order = degree_order(g);
  for (size_t k = 1; k <= g.size(); ++k) {
    if (colorable(g, order, k)) return k;
  }
  return g.size();
}

std::vector<std::vector<size_t>> enumerate_colorings(const Graph& g, size_t k, size_t cap, bool* truncated) {
  std::vector<std::vector<size_t>> out;
  if (truncated) *truncated = false;
  size_t n = g.size();
  // Restricted growth in vertex-index order gives one labeling per partition.
  std::vector<size_t> color(n, k);
  bool stop = false;
  std::function<void(size_t, size_t)> go = [&](size_t u, size_t used) {
    if (stop) return;
    if (n - u < k - std::min(k, used)) return;  // cannot use every color any more
    if (u == n) {
      if (used != k) return;
      if (out.size() == cap) {
        if (truncated) *truncated = true;
        stop = true;
        return;
      }
      out.push_back(color);
      return;
    }
    size_t limit = std::min(k, used + 1);
    for (size_t c = 0; c < limit && !stop; ++c) {
      bool ok = true;
      for (size_t v : g[u]) {
        if (v < u && color[v] == c) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      color[u] = c;
      go(u + 1, std::max(used, c + 1));
      color[u] = k;
    }
  };
  go(0, 0);
  return out;
}

ColoringResult private_complement(const Partition& x, const Partition& y, size_t enumerate_cap) {
  require_same_ground(x.ground(), y.ground());
  size_t ny = y.num_blocks();
  Graph g(ny);
  {
    std::vector<std::set<size_t>> touching(x.num_blocks());
    for (size_t w = 0; w < x.ground()->size(); ++w) touching[x.block_of(w)].insert(y.block_of(w));
    std::set<std::pair<size_t, size_t>> edges;
    for (const auto& s : touching) {
      for (auto i = s.begin(); i != s.end(); ++i) {
        for (auto j = std::next(i); j != s.end(); ++j) edges.emplace(*i, *j);
      }
    }
    for (auto [u, v] : edges) {
      g[u].push_back(v);
      g[v].push_back(u);
    }
  }
  ColoringResult res;
  res.chromatic_number = chromatic_number(g);
  auto colorings = enumerate_colorings(g, res.chromatic_number, enumerate_cap, &res.truncated);
  for (const auto& col : colorings) {
    std::vector<size_t> lab(x.ground()->size());
    for (size_t w = 0; w < lab.size(); ++w) lab[w] = col[y.block_of(w)];
    res.structures.emplace_back(x.ground(), lab);
  }
  return res;
}

RelativeResult private_relative(const Partition& x, const Partition& y, size_t enumerate_cap) {
  require_same_ground(x.ground(), y.ground());
  if (x.ground()->size() > 12) throw Error(Errc::GroundTooLarge, "private_relative needs at most 12 states");
  Partition w = meet(x, y);
  // Z v W = Y forces Y to refine Z, so only coarsenings of Y qualify.
  size_t nb = y.num_blocks();
  auto qualifies = [&](const std::vector<size_t>& rgs) {
    std::vector<size_t> lab(x.ground()->size());
    for (size_t s = 0; s < lab.size(); ++s) lab[s] = rgs[y.block_of(s)];
    return join(Partition(x.ground(), lab), w) == y;
  };
  std::vector<std::vector<size_t>> found;
  std::vector<size_t> rgs(nb, 0);
  std::function<void(size_t, size_t)> go = [&](size_t i, size_t used) {
    if (i == nb) {
      if (qualifies(rgs)) found.push_back(rgs);
      return;
    }
    for (size_t c = 0; c <= used && c < nb; ++c) {
      rgs[i] = c;
      go(i + 1, std::max(used, c + 1));
    }
  };
  go(0, 0);
  RelativeResult res;
  for (const auto& z : found) {
    size_t k = *std::max_element(z.begin(), z.end()) + 1;
    // any strictly coarser qualifier would survive merging some pair of blocks
    bool maximal = true;
    for (size_t a = 0; a < k && maximal; ++a) {
      for (size_t b = a + 1; b < k && maximal; ++b) {
        auto merged = z;
        for (auto& c : merged) {
          if (c == b) c = a;
        }
        if (qualifies(merged)) maximal = false;
      }
    }
    if (!maximal) continue;
    if (res.structures.size() == enumerate_cap) {
      res.truncated = true;
      break;
    }
    std::vector<size_t> lab(x.ground()->size());
    for (size_t s = 0; s < lab.size(); ++s) lab[s] = z[y.block_of(s)];
    res.structures.emplace_back(x.ground(), lab);
  }
  return res;
}

// ---------------------------------------------------------------- text

namespace {

std::vector<std::string> split_labels(std::string_view text) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < text.size()) {
    unsigned char ch = static_cast<unsigned char>(text[i]);
    if (std::isspace(ch) || ch == ',' || ch == '{' || ch == '}') {
      ++i;
      continue;
    }
    if (!std::isalpha(ch)) throw Error(Errc::ParseError, "unexpected character '" + std::string(1, text[i]) + "'");
    size_t start = i;
    while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

std::vector<std::string_view> split_bars(std::string_view text) {
  std::vector<std::string_view> out;
  size_t start = 0;
  for (size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '|') {
      out.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

bool natural_less(const std::string& a, const std::string& b) {
  auto split = [](const std::string& s) {
    size_t k = s.size();
    while (k > 0 && std::isdigit(static_cast<unsigned char>(s[k - 1]))) --k;
    std::string prefix = s.substr(0, k);
    unsigned long long num = k < s.size() ? std::stoull(s.substr(k)) : 0;
    return std::make_pair(prefix, num);
  };
  return split(a) < split(b);
}

}  // namespace

GroundPtr ground_from_text(const std::vector<std::string>& texts) {
  std::set<std::string> labels;
  for (const auto& t : texts) {
    for (auto part : split_bars(t)) {
      if (part == "-") continue;
      for (auto& l : split_labels(part)) labels.insert(l);
    }
  }
  std::vector<std::string> sorted(labels.begin(), labels.end());
  std::sort(sorted.begin(), sorted.end(), natural_less);
  return std::make_shared<const GroundSet>(std::move(sorted));
}

Partition parse_partition(std::string_view text, GroundPtr ground) {
  if (!ground) ground = ground_from_text({std::string(text)});
  std::vector<std::vector<size_t>> blocks;
  for (auto part : split_bars(text)) {
    auto labels = split_labels(part);
    if (labels.empty()) throw Error(Errc::ParseError, "empty block in '" + std::string(text) + "'");
    std::vector<size_t> block;
    for (const auto& l : labels) block.push_back(ground->index_of(l));
    blocks.push_back(std::move(block));
  }
  return Partition::from_blocks(std::move(ground), blocks);
}

Event parse_event(std::string_view text, GroundPtr ground) {
  std::string_view t = text;
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
  if (t == "-" || t == "{}") return Event(ground, std::vector<bool>(ground->size(), false));
  std::vector<size_t> elems;
  for (const auto& l : split_labels(t)) elems.push_back(ground->index_of(l));
  return Event::of(std::move(ground), elems);
}

std::string format(const Partition& p) {
  std::string out;
  for (const auto& block : p.blocks()) {
    if (!out.empty()) out += '|';
    for (size_t w : block) out += p.ground()->label(w);
  }
  return out;
}

std::string format(const Event& e) {
  auto elems = e.elements();
  if (elems.empty()) return "-";
  std::string out;
  for (size_t w : elems) out += e.ground()->label(w);
  return out;
}

}  // namespace pidlab
