#include <doctest.h>

#include <atomic>
#include <stdexcept>

#include "oracles.hpp"
#include "ragsmith/common/jsonl.hpp"
#include "ragsmith/common/kv_config.hpp"
#include "ragsmith/common/parallel.hpp"
#include "ragsmith/common/text.hpp"

using namespace ragsmith;

TEST_CASE("tokenize lowercases and splits on non-alphanumerics") {
  CHECK(text::tokenize("Set_Clock-Latency 2.5ns!") ==
        std::vector<std::string>{"set", "clock", "latency", "2", "5ns"});
  CHECK(text::tokenize("  \t\n").empty());
  CHECK(text::tokenize("Größe der Zelle") == std::vector<std::string>{"größe", "der", "zelle"});
}

TEST_CASE("utf8 helpers count code points") {
  const std::string s = "aé€😀b";
  CHECK(text::utf8_length(s) == 5);
  CHECK(text::utf8_substr(s, 1, 4) == "é€😀");
  CHECK(text::utf8_prefix(s, 2) == "aé");
  CHECK(text::utf8_prefix(s, 50) == s);
  const auto b = text::utf8_boundaries(s);
  REQUIRE(b.size() == 6);
  CHECK(b.back() == s.size());
}

TEST_CASE("trim and blank") {
  CHECK(text::trim("  x y \n") == "x y");
  CHECK(text::is_blank(" \t\r\n"));
  CHECK_FALSE(text::is_blank(" a "));
}

TEST_CASE("fnv1a64 and hex64 are stable") {
  CHECK(text::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(text::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(text::hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("render_placeholders substitutes once and leaves unknown keys") {
  const auto out = text::render_placeholders("{{a}} and {{b}} and {{c}}", {{"a", "{{b}}"}, {"b", "B"}});
  CHECK(out == "{{b}} and B and {{c}}");
}

TEST_CASE("split and join round trip") {
  const auto parts = text::split("a,b,,c", ',');
  CHECK(parts == std::vector<std::string>{"a", "b", "", "c"});
  CHECK(text::join(parts, ",") == "a,b,,c");
}

TEST_CASE("jsonl write then read") {
  oracle::TempDir dir("jsonl");
  const auto file = dir / "sub/records.jsonl";
  jsonl::write(file, {{{"k", 1}}, {{"k", "é"}}});
  auto records = jsonl::read(file);
  REQUIRE(records.size() == 2);
  CHECK(records[0]["k"] == 1);
  CHECK(records[1]["k"] == "é");
  jsonl::append(file, {{"k", 3}});
  CHECK(jsonl::read(file).size() == 3);
  CHECK_FALSE(std::filesystem::exists(file.string() + ".tmp"));
}

TEST_CASE("jsonl reports the bad line") {
  oracle::TempDir dir("jsonl");
  const auto file = dir / "bad.jsonl";
  jsonl::write_text_atomically(file, "{\"a\":1}\n\n{oops\n");
  CHECK_THROWS_WITH_AS(jsonl::read(file), doctest::Contains("bad.jsonl:3:"), std::runtime_error);
}

TEST_CASE("key value config") {
  auto kv = KeyValueConfig::parse("# comment\n a = 1 \nb=two words\n\na = 3\n");
  CHECK(kv.get_int("a", 0) == 3);
  CHECK(kv.get_or("b", "") == "two words");
  CHECK(kv.get_double("missing", 1.5) == 1.5);
  CHECK_FALSE(kv.get("missing").has_value());
  CHECK_THROWS(KeyValueConfig::parse("no equals sign here"));
}

TEST_CASE("parallel_for visits every index once and rethrows") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) {
    CHECK(h.load() == 1);
  }
  CHECK_THROWS_AS(parallel_for(10, 3,
                               [](std::size_t i) {
                                 if (i == 7) {
                                   throw std::runtime_error("boom");
                                 }
                               }),
                  std::runtime_error);
}
