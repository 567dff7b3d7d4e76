// Copyright 2026 The taxeval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracle/oracle.hpp"
#include "support.hpp"
#include "taxeval/corpus.hpp"
#include "taxeval/error.hpp"

using namespace taxeval;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Edit edit(std::size_t s, std::size_t e, std::string repl, std::string type = "") {
  return {s, e, tokenize(repl), std::move(type)};
}

std::size_t edits_cost(const std::vector<Edit>& edits) {
  std::size_t c = 0;
  for (const auto& e : edits) c += std::max(e.end - e.start, e.replacement.size());
  return c;
}

}  // namespace

TEST_CASE("tokenize and join") {
  CHECK(tokenize("  He  go\tto school ") == Tokens{"He", "go", "to", "school"});
  CHECK(tokenize("").empty());
  CHECK(join(Tokens{"a", "b"}) == "a b");
  CHECK(join(Tokens{}).empty());
}

TEST_CASE("apply_edits") {
  const Tokens src = tokenize("He go to school");
  const std::vector<Edit> one = {edit(1, 2, "goes")};
  CHECK(join(apply_edits(src, one)) == "He goes to school");
  const std::vector<Edit> mixed = {edit(0, 0, "Yesterday"), edit(1, 2, "went"), edit(3, 4, "")};
  CHECK(join(apply_edits(src, mixed)) == "Yesterday He went to");
  CHECK(apply_edits(src, {}) == src);
}

TEST_CASE("check_edits rejects malformed lists") {
  const Tokens src = tokenize("a b c d");
  CHECK_THROWS_AS(check_edits(src, std::vector<Edit>{edit(3, 5, "x")}), EditError);
  CHECK_THROWS_AS(check_edits(src, std::vector<Edit>{edit(2, 1, "x")}), EditError);
  CHECK_THROWS_AS(check_edits(src, std::vector<Edit>{edit(1, 2, "b")}), EditError);
  CHECK_THROWS_AS(check_edits(src, std::vector<Edit>{edit(2, 2, "")}), EditError);
  CHECK_THROWS_AS(check_edits(src, std::vector<Edit>{edit(2, 3, "x"), edit(0, 1, "y")}), EditError);
  CHECK_THROWS_AS(check_edits(src, std::vector<Edit>{edit(0, 2, "x"), edit(1, 3, "y")}), EditError);
  CHECK_THROWS_AS(check_edits(src, std::vector<Edit>{edit(1, 1, "x"), edit(1, 1, "y")}), EditError);
  CHECK_NOTHROW(check_edits(src, std::vector<Edit>{edit(1, 1, "x"), edit(1, 2, "y")}));
  CHECK_NOTHROW(check_edits(src, std::vector<Edit>{edit(0, 1, "x"), edit(1, 2, "y")}));
}

TEST_CASE("extract_edits examples") {
  auto ex = [](const char* a, const char* b) { return extract_edits(tokenize(a), tokenize(b)); };
  CHECK(ex("He go to school", "He goes to school") == std::vector<Edit>{edit(1, 2, "goes")});
  CHECK(ex("a b c", "a b c").empty());
  // Brute-force minimum over all alignments of these sequences is 2; the
  // substitution and the insertion are adjacent and merge into one edit.
  CHECK(oracle::min_alignment_cost(tokenize("I isn't ready"), tokenize("I 'm not ready")) == 2);
  CHECK(ex("I isn't ready", "I 'm not ready") == std::vector<Edit>{edit(1, 2, "'m not")});
  CHECK(ex("", "a b") == std::vector<Edit>{edit(0, 0, "a b")});
  CHECK(ex("a b", "") == std::vector<Edit>{edit(0, 2, "")});
  CHECK(ex("x a b", "a b") == std::vector<Edit>{edit(0, 1, "")});
  CHECK(ex("a b c d", "a x c y") == std::vector<Edit>{edit(1, 2, "x"), edit(3, 4, "y")});
}

TEST_CASE("extracted edits are cost-minimal and reproduce the target") {
  std::mt19937_64 rng(11);
  const std::vector<std::string> vocab = {"a", "b", "c"};
  for (int trial = 0; trial < 400; ++trial) {
    Tokens a, b;
    for (std::size_t i = testing::pick(rng, 7); i > 0; --i) a.push_back(vocab[testing::pick(rng, 3)]);
    for (std::size_t i = testing::pick(rng, 7); i > 0; --i) b.push_back(vocab[testing::pick(rng, 3)]);
    CAPTURE(join(a));
    CAPTURE(join(b));
    const auto edits = extract_edits(a, b);
    CHECK(apply_edits(a, edits) == b);
    CHECK(oracle::apply_right_to_left(a, edits) == b);
    CHECK(edits_cost(edits) == oracle::min_alignment_cost(a, b));
    for (std::size_t i = 1; i < edits.size(); ++i) CHECK(edits[i].start > edits[i - 1].end);
  }
}

TEST_CASE("decompose") {
  MultiEditSentence s{"s1", tokenize("He go to school yesterday and buy a apple"),
                      {edit(1, 2, "went"), edit(6, 7, "bought"), edit(7, 8, "an")}};
  const auto inst = decompose(s);
  REQUIRE(inst.size() == 3);
  for (const auto& i : inst) {
    CHECK(join(i.target) == "He went to school yesterday and bought an apple");
    CHECK(extract_edits(i.source, i.target).size() == 1);
  }
  CHECK(join(inst[2].source) == "He went to school yesterday and bought a apple");
  CHECK(inst[2].edit.same_change(edit(7, 8, "an")));
  CHECK(inst[0].id == "s1-e1");

  SUBCASE("one edit keeps the original source") {
    MultiEditSentence one{"s2", tokenize("He go"), {edit(1, 2, "goes", "R:VERB:SVA")}};
    const auto d = decompose(one);
    REQUIRE(d.size() == 1);
    CHECK(d[0].source == one.source);
    CHECK(d[0].edit.type_hint == "R:VERB:SVA");
  }
  SUBCASE("re-indexing after length-changing edits") {
    MultiEditSentence t{"s3", tokenize("a b c d e"), {edit(0, 2, ""), edit(3, 4, "x y")}};
    const auto d = decompose(t);
    REQUIRE(d.size() == 2);
    CHECK(join(d[1].source) == "c d e");
    CHECK(d[1].edit.same_change(edit(1, 2, "x y")));
    CHECK(join(d[0].source) == "a b c x y e");
    CHECK(d[0].edit.same_change(edit(0, 2, "")));
  }
  CHECK_THROWS_AS(decompose(MultiEditSentence{"s4", tokenize("a b"), {}}), EditError);
}

TEST_CASE("decompose_all skips noop sentences and counts") {
  std::mt19937_64 rng(3);
  std::size_t edits = 0;
  auto sentences = parse_m2(testing::synthetic_m2(rng, 20, 1, 4, &edits));
  sentences.push_back({"noop", tokenize("fine"), {}});
  DecomposeStats stats;
  const auto inst = decompose_all(sentences, &stats);
  CHECK(inst.size() == edits);
  CHECK(stats.sentences == 21);
  CHECK(stats.noop_sentences == 1);
  CHECK(stats.instances == edits);
  CHECK(stats.rejected_edits == 0);
}

TEST_CASE("M2 parsing") {
  const auto golden = slurp(testing::source_dir() / "tests" / "data" / "golden.m2");
  const auto s = parse_m2(golden);
  REQUIRE(s.size() == 5);
  CHECK(s[0].id == "s1");
  CHECK(s[1].edits.empty());
  CHECK(s[2].edits[0].replacement == Tokens{"'m", "not"});
  CHECK(s[2].edits[1].replacement.empty());
  CHECK(s[3].edits[1].start == 2);
  CHECK(s[3].edits[1].end == 2);
  CHECK(s[0].edits[2].type_hint == "R:DET");
  CHECK(render_m2(s) == golden);
  CHECK(parse_m2(render_m2(s)) == s);

  SUBCASE("annotator selection") {
    const auto text = slurp(testing::source_dir() / "tests" / "data" / "multi_annotator.m2");
    const auto a0 = parse_m2(text);
    const auto a1 = parse_m2(text, M2Options{1});
    CHECK(a0[0].edits.size() == 2);
    CHECK(a0[1].edits.empty());
    CHECK(a1[0].edits.size() == 3);
    CHECK(a1[1].edits.size() == 1);
    CHECK(join(apply_edits(a1[0].source, a1[0].edits)) == "The children played outside happily");
  }
  SUBCASE("-NONE- replacement is a deletion") {
    const auto d = parse_m2("S a b\nA 0 1|||U:DET|||-NONE-|||REQUIRED|||-NONE-|||0\n");
    CHECK(d[0].edits[0].replacement.empty());
  }
  SUBCASE("CRLF input") {
    CHECK(parse_m2("S a b\r\nA 0 1|||R|||c|||REQUIRED|||-NONE-|||0\r\n\r\n")[0].edits.size() == 1);
  }
}

TEST_CASE("M2 errors carry the offending line") {
  auto line_of = [](const char* text) -> std::size_t {
    try {
      parse_m2(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("S a b\nA 0 1|||R|||c|||REQUIRED|||0\n") == 2);
  CHECK(line_of("S a b\nA x 1|||R|||c|||REQUIRED|||-NONE-|||0\n") == 2);
  CHECK(line_of("S a b\n\nS c\nA 0 4|||R|||c|||REQUIRED|||-NONE-|||0\n") == 4);
  CHECK(line_of("A 0 1|||R|||c|||REQUIRED|||-NONE-|||0\n") == 1);
  CHECK(line_of("S a b\nX junk\n") == 2);
  CHECK(line_of("S a b c\nA 0 2|||R|||x|||REQUIRED|||-NONE-|||0\nA 1 3|||R|||y|||REQUIRED|||-NONE-|||0\n") == 1);
}

TEST_CASE("native corpus round trip and validation") {
  const auto taxonomies = testing::shipped_taxonomies();
  std::mt19937_64 rng(5);
  const Corpus c = testing::synthetic_corpus(rng, 2, taxonomies);
  const std::string text = save_corpus(c);
  CHECK(load_corpus(text, taxonomies) == c);
  CHECK(load_corpus(text) == c);
  CHECK(save_corpus(load_corpus(text)) == text);

  auto with_gold = [&](const char* tax, const char* label) {
    auto doc = nlohmann::json::parse(text);
    doc["instances"][0]["gold"][tax] = label;
    return doc.dump();
  };
  CHECK_THROWS_AS(load_corpus(with_gold("POL73", "Z9"), taxonomies), ValidationError);
  CHECK_NOTHROW(load_corpus(with_gold("BRY17", "R:NOUN:NUM"), taxonomies));
  CHECK_NOTHROW(load_corpus(with_gold("BRY17", "Other"), taxonomies));

  auto doc = nlohmann::json::parse(text);
  doc["instances"][0]["gold"].erase("FEI23");
  CHECK_THROWS_AS(load_corpus(doc.dump(), taxonomies), ValidationError);
  CHECK_NOTHROW(load_corpus(doc.dump()));

  doc = nlohmann::json::parse(text);
  doc["instances"][1]["id"] = doc["instances"][0]["id"];
  CHECK_THROWS_AS(load_corpus(doc.dump()), ValidationError);

  doc = nlohmann::json::parse(text);
  doc["instances"][0]["target"] = "something else entirely";
  CHECK_THROWS(load_corpus(doc.dump()));

  doc = nlohmann::json::parse(text);
  doc["instances"][0].erase("edit");
  CHECK_THROWS_AS(load_corpus(doc.dump()), SchemaError);
  CHECK_THROWS_AS(load_corpus("[]"), SchemaError);
}

TEST_CASE("label histogram over a 487-instance corpus") {
  const auto taxonomies = testing::shipped_taxonomies();
  std::mt19937_64 rng(487);
  const Corpus c = testing::synthetic_corpus(rng, 487, taxonomies);
  const Corpus loaded = load_corpus(save_corpus(c), taxonomies);
  CHECK(loaded.instances.size() == 487);
  for (const auto& t : taxonomies) {
    std::size_t total = 0;
    for (const auto& [label, n] : label_histogram(loaded, t.id())) {
      CHECK((label == "Other" || t.is_leaf(label)));
      total += n;
    }
    CHECK(total == 487);
  }
}
