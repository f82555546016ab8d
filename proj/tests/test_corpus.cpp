#include <doctest.h>

#include <filesystem>

#include "pidlab/corpus.hpp"
#include "pidlab/dist_io.hpp"
#include "pidlab/error.hpp"

using namespace pidlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("pidlab_corpus_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("emitted corpus round-trips and is byte-stable") {
  auto a = scratch("a"), b = scratch("b");
  auto files = emit_corpus(a);
  emit_corpus(b);
  CHECK(files.size() == corpus_entries().size() + partition_examples().size());
  for (const auto& f : files) {
    CAPTURE(f);
    CHECK(read_text(f) == read_text(b / f.filename()));
  }
  for (const auto& e : corpus_entries()) {
    CAPTURE(e.stem);
    auto loaded = corpus_distribution(e.stem, a);
    auto built = corpus_distribution(e.stem);
    CHECK(loaded.is_exact());
    CHECK(distribution_to_json(loaded).dump(2) == distribution_to_json(built).dump(2));
    // save the loaded copy again
    auto again = scratch("again_" + e.stem);
    fs::create_directories(again);
    write_text(again / "d.json", distribution_to_json(loaded).dump(2) + "\n");
    CHECK(read_text(again / "d.json") == read_text(a / (e.stem + ".json")));
    fs::remove_all(again);
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("partition files") {
  auto ex1 = corpus_partitions("ex1");
  CHECK(ex1.ground->size() == 4);
  REQUIRE(ex1.event);
  CHECK(format(*ex1.event) == "w1w2");
  CHECK(format(ex1.x) == "w1w4|w2|w3");
  CHECK(corpus_partitions("ex2").ground->size() == 16);
  CHECK_FALSE(corpus_partitions("ex3").event);

  CHECK_THROWS_AS(parse_partition_file("X = w1|w2\n"), Error);
  CHECK_THROWS_AS(parse_partition_file("X = w1|w2\nY = w1w2\nZ = w1\n"), Error);
  CHECK_THROWS_AS(parse_partition_file("X = w1|w2\nX = w1w2\nY = w1w2\n"), Error);
  CHECK_THROWS_AS(corpus_partitions("ex9"), Error);
  CHECK_THROWS_AS(corpus_distribution("nope"), Error);
  auto pf = parse_partition_file("  # comment\nX = w1|w2 # trailing\n\nY = w1w2\n");
  CHECK(format(pf.y) == "w1w2");
}
