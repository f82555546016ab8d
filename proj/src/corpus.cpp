#include "pidlab/corpus.hpp"

#include <map>
#include <sstream>

#include "pidlab/canonical.hpp"
#include "pidlab/dist_io.hpp"
#include "pidlab/error.hpp"

namespace pidlab {

const std::vector<CorpusEntry>& corpus_entries() {
  static const std::vector<CorpusEntry> entries{
      {"xor", "XOR"},           {"and", "AND"}, {"copy", "COPY"},
      {"unq", "UNQ"},           {"rdn", "RDN"}, {"rdnunqxor", "RDNUNQXOR"},
      {"ex4", "EX4"},           {"ex5", "EX5"}, {"ex6", "EX6(1/16,1/16)"},
      {"ex6b", "EX6(1/16,1/32)"}, {"ex11", "EX11(1/32,1/64)"},
  };
  return entries;
}

const std::vector<std::pair<std::string, std::string>>& partition_examples() {
  static const std::vector<std::pair<std::string, std::string>> files{
      {"ex1",
       "# two agents on four states\n"
       "X = w1w4|w2|w3\n"
       "Y = w1w2|w3|w4\n"
       "E = w1w2\n"},
      {"ex2",
       "# sixteen states; Y pairs consecutive states\n"
       "X = w1w3|w4w5|w6w7|w8w9|w10w2|w11w13|w14w15|w12w16\n"
       "Y = w1w2|w3w4|w5w6|w7w8|w9w10|w11w12|w13w14|w15w16\n"},
      {"ex3",
       "X = w1w2|w3|w4w5|w6\n"
       "Y = w1|w2w3|w4|w5w6\n"},
  };
  return files;
}

std::vector<std::filesystem::path> emit_corpus(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> out;
  for (const auto& e : corpus_entries()) {
    auto path = dir / (e.stem + ".json");
    write_text(path, distribution_to_json(canonical(e.canonical_name)).dump(2) + "\n");
    out.push_back(path);
  }
  for (const auto& [name, text] : partition_examples()) {
    auto path = dir / (name + ".partitions");
    write_text(path, text);
    out.push_back(path);
  }
  return out;
}

JointDistribution corpus_distribution(const std::string& stem, const std::optional<std::filesystem::path>& dir) {
  if (dir) return load_distribution(*dir / (stem + ".json"));
  for (const auto& e : corpus_entries()) {
    if (e.stem == stem) return canonical(e.canonical_name);
  }
  throw Error(Errc::UnknownName, "no corpus entry '" + stem + "'");
}

PartitionFile parse_partition_file(const std::string& text) {
  std::map<std::string, std::string> fields;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": expected KEY = VALUE");
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    std::string key = trim(line.substr(0, eq));
    if (key != "X" && key != "Y" && key != "E") {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (!fields.emplace(key, trim(line.substr(eq + 1))).second) {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }
  if (!fields.count("X") || !fields.count("Y")) throw Error(Errc::ParseError, "both X and Y are required");
  auto ground = ground_from_text({fields["X"], fields["Y"]});
  PartitionFile pf{ground, parse_partition(fields["X"], ground), parse_partition(fields["Y"], ground), std::nullopt};
  if (fields.count("E")) pf.event = parse_event(fields["E"], ground);
  return pf;
}

PartitionFile load_partition_file(const std::filesystem::path& path) {
  try {
    return parse_partition_file(read_text(path));
  } catch (const Error& e) {
    if (e.code() != Errc::ParseError) throw;
    throw Error(Errc::ParseError, path.string() + ": " + e.what());
  }
}

PartitionFile corpus_partitions(const std::string& name, const std::optional<std::filesystem::path>& dir) {
  if (dir) return load_partition_file(*dir / (name + ".partitions"));
  for (const auto& [n, text] : partition_examples()) {
    if (n == name) return parse_partition_file(text);
  }
  throw Error(Errc::UnknownName, "no partition example '" + name + "'");
}

}  // namespace pidlab
