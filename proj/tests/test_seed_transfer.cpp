#include "doctest.h"

#include <algorithm>
#include <sstream>

#include "clts/seed_transfer.hpp"
#include "test_util.hpp"

using namespace clts;
using testutil::thrown_message;

namespace {

Vocabulary vocab_of(std::vector<std::string> terms) {
  std::sort(terms.begin(), terms.end());  // real vocabularies are always sorted
  const int n = static_cast<int>(terms.size());
  return Vocabulary::from_terms(std::move(terms), std::vector<int>(n, 1), {1, 1}, n);
}

WeightMatrix dense_weights(const std::vector<std::vector<double>>& w) {
  std::vector<double> bias(w.size(), 0.0);
  return WeightMatrix::from_dense(w, bias, static_cast<int>(w[0].size()), 1.0);
}

}  // namespace

TEST_SUITE("seed_transfer") {

TEST_CASE("seeds are the top positive weights per class") {
  // class-0 column weights (3, 1, 0, -2) over terms (a, b, c, d)
  Vocabulary v = vocab_of({"a", "b", "c", "d"});
  WeightMatrix w = dense_weights({{3, 1, 0, -2}, {-1, 0, 2, 4}});
  SeedSet s = extract_seeds(w, v, 4, 2);
  REQUIRE(s.per_class == 2);
  REQUIRE(s.per_class_seeds[0].size() == 2);
  CHECK(s.per_class_seeds[0][0].term == "a");
  CHECK(s.per_class_seeds[0][1].term == "b");
  CHECK(s.per_class_seeds[1][0].term == "d");
  CHECK(s.per_class_seeds[1][1].term == "c");
}

TEST_CASE("seed entries carry the full per-class weight column") {
  Vocabulary v = vocab_of({"a", "b"});
  WeightMatrix w = dense_weights({{3, 0}, {-1, 2}});
  SeedSet s = extract_seeds(w, v, 2, 2);
  CHECK(s.per_class_seeds[0][0].weights == std::vector<double>{3, -1});
  CHECK(s.per_class_seeds[1][0].weights == std::vector<double>{0, 2});
}

TEST_CASE("ties between equal weights break lexicographically") {
  Vocabulary v = vocab_of({"m", "z", "k"});  // sorted to k, m, z
  WeightMatrix w = dense_weights({{1.0, 1.0, 1.0}, {0, 0, 0.5}});
  SeedSet s = extract_seeds(w, v, 4, 2);
  CHECK(s.per_class_seeds[0][0].term == "k");
  CHECK(s.per_class_seeds[0][1].term == "m");
}

TEST_CASE("zero weights yield empty seed lists and the short-class counter") {
  Vocabulary v = vocab_of({"a", "b"});
  WeightMatrix w = dense_weights({{0, 0}, {0, 0}});
  SeedSet s = extract_seeds(w, v, 4, 2);
  CHECK(s.per_class_seeds[0].empty());
  CHECK(s.per_class_seeds[1].empty());
  CHECK(s.classes_short == 2);
  CHECK(s.distinct_terms().empty());
}

TEST_CASE("a term selected by several classes is charged once") {
  Vocabulary v = vocab_of({"a", "b"});
  WeightMatrix w = dense_weights({{5, 1}, {4, 0}});
  SeedSet s = extract_seeds(w, v, 2, 2);  // one seed per class, both pick "a"
  CHECK(s.per_class_seeds[0][0].term == "a");
  CHECK(s.per_class_seeds[1][0].term == "a");
  CHECK(s.distinct_terms() == std::vector<std::string>{"a"});
}

TEST_CASE("indivisible budgets flag the floor division") {
  Vocabulary v = vocab_of({"a", "b", "c"});
  WeightMatrix w = dense_weights({{3, 2, 1}, {1, 2, 3}});
  SeedSet s = extract_seeds(w, v, 7, 2);
  CHECK(s.per_class == 3);
  CHECK(s.budget_not_divisible);
}

TEST_CASE("extraction validates its shape preconditions") {
  Vocabulary v = vocab_of({"a", "b"});
  WeightMatrix w = dense_weights({{1, 0}, {0, 1}});
  CHECK(thrown_message([&] { extract_seeds(w, v, 1, 2); }) != "");   // budget < K
  CHECK(thrown_message([&] { extract_seeds(w, v, 4, 3); }) != "");   // K mismatch
  Vocabulary v3 = vocab_of({"a", "b", "c"});
  CHECK(thrown_message([&] { extract_seeds(w, v3, 4, 2); }) != "");  // column mismatch
}

TEST_CASE("translation copies the source column through the dictionary") {
  Vocabulary v = vocab_of({"wonderful"});
  WeightMatrix w = dense_weights({{0.8}, {-0.1}});
  SeedSet s = extract_seeds(w, v, 2, 2);
  BilingualDictionary dict;
  dict.add("wonderful", "magnifique");
  TranslatedSeedSet t = translate_seeds(s, dict);
  REQUIRE(t.entries.size() == 1);
  CHECK(t.entries[0].source == "wonderful");
  CHECK(t.entries[0].targets == std::vector<std::string>{"magnifique"});
  CHECK(t.entries[0].weights == std::vector<double>{0.8, -0.1});
  CHECK(t.entries[0].provenance == Provenance::dictionary);
  CHECK(t.identity_count() == 0);
}

TEST_CASE("multi-translation entries fan out with a shared weight column") {
  Vocabulary v = vocab_of({"shares"});
  WeightMatrix w = dense_weights({{1.2}, {0.0}});
  SeedSet s = extract_seeds(w, v, 2, 2);
  BilingualDictionary dict;
  dict.add("shares", "comparte");
  dict.add("shares", "acciones");
  TranslatedSeedSet t = translate_seeds(s, dict);
  REQUIRE(t.entries.size() == 1);
  CHECK(t.entries[0].targets == std::vector<std::string>{"acciones", "comparte"});
  CHECK(t.entries[0].weights == std::vector<double>{1.2, 0.0});
}

TEST_CASE("dictionary misses fall back to the term itself") {
  Vocabulary v = vocab_of({"🤗"});
  WeightMatrix w = dense_weights({{1.0}, {0.0}});
  SeedSet s = extract_seeds(w, v, 2, 2);
  TranslatedSeedSet t = translate_seeds(s, BilingualDictionary{});
  REQUIRE(t.entries.size() == 1);
  CHECK(t.entries[0].targets == std::vector<std::string>{"🤗"});
  CHECK(t.entries[0].provenance == Provenance::identity);
  CHECK(t.identity_count() == 1);
}

TEST_CASE("a seed shared by two classes translates once") {
  Vocabulary v = vocab_of({"a", "b"});
  WeightMatrix w = dense_weights({{5, 1}, {4, 0}});
  SeedSet s = extract_seeds(w, v, 2, 2);
  TranslatedSeedSet t = translate_seeds(s, BilingualDictionary{});
  CHECK(t.entries.size() == 1);
}

TEST_CASE("teacher matrix columns copy, accumulate, and drop") {
  Vocabulary target = vocab_of({"alpha", "beta"});

  SUBCASE("single pair copies the column") {
    TranslatedSeedSet t;
    t.entries.push_back({"src", {"alpha"}, {0.8, -0.1}, Provenance::dictionary});
    TeacherMatrix z = build_teacher_matrix(t, target);
    CHECK(z.num_cols == 2);
    REQUIRE(z.is_seed_column(0));
    CHECK(z.columns.at(0) == std::vector<double>{0.8, -0.1});
    CHECK(z.dropped_terms == 0);
  }
  SUBCASE("two sources on one target sum their columns") {
    TranslatedSeedSet t;
    t.entries.push_back({"s1", {"alpha"}, {1.0, 0.0}, Provenance::dictionary});
    t.entries.push_back({"s2", {"alpha"}, {0.5, 0.0}, Provenance::dictionary});
    TeacherMatrix z = build_teacher_matrix(t, target);
    CHECK(z.columns.at(0) == std::vector<double>{1.5, 0.0});
    CHECK(z.seed_columns() == std::vector<int>{0});
  }
  SUBCASE("targets missing from the vocabulary are counted, not stored") {
    TranslatedSeedSet t;
    t.entries.push_back({"s1", {"gamma"}, {1.0, 0.0}, Provenance::dictionary});
    TeacherMatrix z = build_teacher_matrix(t, target);
    CHECK(z.columns.empty());
    CHECK(z.dropped_terms == 1);
  }
  SUBCASE("exact cancellation removes the column") {
    TranslatedSeedSet t;
    t.entries.push_back({"s1", {"beta"}, {1.0, -1.0}, Provenance::dictionary});
    t.entries.push_back({"s2", {"beta"}, {-1.0, 1.0}, Provenance::dictionary});
    TeacherMatrix z = build_teacher_matrix(t, target);
    CHECK_FALSE(z.is_seed_column(1));
  }
}

TEST_CASE("full column transfer covers all classes, not only the extractor") {
  // Three classes; the seed is extracted for class 0 but its column carries
  // the class-1 and class-2 weights too.
  Vocabulary v = vocab_of({"w"});
  WeightMatrix w = dense_weights({{2.0}, {-0.5}, {0.25}});
  SeedSet s = extract_seeds(w, v, 3, 3);
  BilingualDictionary dict;
  dict.add("w", "t");
  TranslatedSeedSet t = translate_seeds(s, dict);
  TeacherMatrix z = build_teacher_matrix(t, vocab_of({"t"}));
  CHECK(z.columns.at(0) == std::vector<double>{2.0, -0.5, 0.25});
}

TEST_CASE("review TSV round trip preserves the translated set") {
  Vocabulary v = vocab_of({"x", "y"});
  WeightMatrix w = dense_weights({{2, 0}, {0, 3}});
  SeedSet s = extract_seeds(w, v, 2, 2);
  BilingualDictionary dict;
  dict.add("x", "u");
  dict.add("x", "v");
  TranslatedSeedSet t = translate_seeds(s, dict);

  std::ostringstream out;
  export_translations_tsv(t, out);
  std::istringstream in(out.str());
  TranslatedSeedSet back = import_translations_tsv(s, in);
  CHECK(back == t);
}

TEST_CASE("review TSV import rejects unknown sources and bad provenance") {
  Vocabulary v = vocab_of({"x"});
  WeightMatrix w = dense_weights({{2}, {0}});
  SeedSet s = extract_seeds(w, v, 2, 2);

  std::istringstream unknown("zz\tu\tdictionary\n");
  CHECK(thrown_message([&] { import_translations_tsv(s, unknown); }) != "");
  std::istringstream badprov("x\tu\tguessed\n");
  CHECK(thrown_message([&] { import_translations_tsv(s, badprov); }) != "");
  std::istringstream badrow("x\tu\n");
  CHECK(thrown_message([&] { import_translations_tsv(s, badrow); }) != "");
}

}  // TEST_SUITE
