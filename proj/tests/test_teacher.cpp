#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "clts/teacher.hpp"
#include "clts/vectorizer.hpp"
#include "test_util.hpp"

using namespace clts;
using testutil::thrown_message;

namespace {

// Independent prediction oracle: materialize Z densely (K x |V|), build the
// binary presence vector, multiply, softmax. Checked against teacher_predict.
std::vector<double> dense_predict_oracle(const TeacherMatrix& z, const Document& doc,
                                         const Vocabulary& vocab) {
  std::vector<std::vector<double>> dense(z.num_classes, std::vector<double>(z.num_cols, 0.0));
  for (const auto& [col, weights] : z.columns)
    for (int k = 0; k < z.num_classes; ++k) dense[k][col] = weights[k];

  std::vector<double> x(z.num_cols, 0.0);
  for (const std::string& t : doc.tokens)
    if (auto c = vocab.col(t)) x[*c] = 1.0;

  std::vector<double> logits(z.num_classes, 0.0);
  for (int k = 0; k < z.num_classes; ++k)
    for (int c = 0; c < z.num_cols; ++c) logits[k] += dense[k][c] * x[c];

  double mx = logits[0];
  for (double v : logits) mx = std::max(mx, v);
  double sum = 0;
  for (double& v : logits) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double& v : logits) v /= sum;
  return logits;
}

Vocabulary vocab_of(std::vector<std::string> terms) {
  const int n = static_cast<int>(terms.size());
  return Vocabulary::from_terms(std::move(terms), std::vector<int>(n, 1), {1, 1}, n);
}

TeacherMatrix small_teacher() {
  // Vocabulary (a, b, c, d, e); seeds on b and d.
  TeacherMatrix z;
  z.num_classes = 2;
  z.num_cols = 5;
  z.columns[1] = {0.7, -0.2};
  z.columns[3] = {-0.4, 1.1};
  return z;
}

Document doc(std::vector<std::string> tokens) { return {"t", std::move(tokens), std::nullopt}; }

}  // namespace

TEST_SUITE("teacher") {

TEST_CASE("documents without seeds get the exact uniform distribution") {
  Vocabulary v = vocab_of({"a", "b", "c", "d", "e"});
  TeacherMatrix z = small_teacher();
  std::vector<double> q = teacher_predict(z, doc({"a", "c", "e"}), v);
  CHECK(q[0] == 0.5);  // exactly, not approximately
  CHECK(q[1] == 0.5);

  TeacherMatrix z3 = z;
  z3.num_classes = 3;
  for (auto& [c, w] : z3.columns) w.push_back(0.0);
  std::vector<double> q3 = teacher_predict(z3, doc({"a"}), v);
  CHECK(q3 == std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3});
}

TEST_CASE("single seed with column (ln2, 0) gives (2/3, 1/3)") {
  Vocabulary v = vocab_of({"s"});
  TeacherMatrix z;
  z.num_classes = 2;
  z.num_cols = 1;
  z.columns[0] = {std::log(2.0), 0.0};
  std::vector<double> q = teacher_predict(z, doc({"s"}), v);
  CHECK(q[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(q[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("binary input counts each distinct seed once") {
  Vocabulary v = vocab_of({"a", "b", "c", "d", "e"});
  TeacherMatrix z = small_teacher();
  std::vector<double> once = teacher_predict(z, doc({"b", "a"}), v);
  std::vector<double> thrice = teacher_predict(z, doc({"b", "b", "b", "a"}), v);
  CHECK(once == thrice);
}

TEST_CASE("tfidf input weights seed columns by their tf-idf value") {
  Vocabulary v = vocab_of({"a", "b", "c", "d", "e"});
  TeacherMatrix z = small_teacher();
  std::vector<double> once = teacher_predict(z, doc({"b"}), v, TeacherInput::tfidf);
  std::vector<double> repeated = teacher_predict(z, doc({"b", "b", "d"}), v, TeacherInput::tfidf);
  CHECK(once != repeated);
}

TEST_CASE("multi-seed predictions match the dense matrix-vector oracle") {
  Vocabulary v = vocab_of({"a", "b", "c", "d", "e"});
  TeacherMatrix z = small_teacher();
  for (const auto& tokens : std::vector<std::vector<std::string>>{
           {"b", "d"}, {"b"}, {"d", "e"}, {"a", "b", "c", "d", "e"}, {"e"}}) {
    Document d = doc(tokens);
    std::vector<double> got = teacher_predict(z, d, v);
    std::vector<double> want = dense_predict_oracle(z, d, v);
    REQUIRE(got.size() == want.size());
    for (std::size_t k = 0; k < got.size(); ++k)
      CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-12));
    double sum = 0;
    for (double p : got) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("predicting with an empty teacher is an error") {
  Vocabulary v = vocab_of({"a"});
  CHECK(thrown_message([&] { teacher_predict(TeacherMatrix{}, doc({"a"}), v); }) != "");
}

TEST_CASE("label_covered selects exactly the documents containing seeds") {
  Vocabulary v = vocab_of({"a", "b", "c", "d", "e"});
  TeacherMatrix z = small_teacher();
  Corpus corpus;
  corpus.docs = {{"d0", {"a", "b"}, {}}, {"d1", {"c"}, {}}, {"d2", {"d", "e"}, {}}};
  PseudoLabeledSet pset = label_covered(z, corpus, v);
  REQUIRE(pset.size() == 2);
  CHECK(pset.items[0].id == "d0");
  CHECK(pset.items[0].doc_index == 0);
  CHECK(pset.items[1].id == "d2");
  CHECK(pset.items[1].labeler == Labeler::teacher);
}

TEST_CASE("a corpus with no covered documents labels nothing") {
  Vocabulary v = vocab_of({"a", "b", "c", "d", "e"});
  TeacherMatrix z = small_teacher();
  Corpus corpus;
  corpus.docs = {{"d0", {"a"}, {}}, {"d1", {"c", "e"}, {}}};
  CHECK(label_covered(z, corpus, v).empty());
}

TEST_CASE("coverage matches a brute-force token-intersection oracle") {
  Vocabulary v = vocab_of({"a", "b", "c", "d", "e"});
  TeacherMatrix z = small_teacher();

  Corpus all_covered;
  all_covered.docs = {{"x", {"b"}, {}}, {"y", {"d", "a"}, {}}};
  CHECK(teacher_coverage(z, all_covered, v) == 1.0);

  Corpus none_covered;
  none_covered.docs = {{"x", {"a"}, {}}, {"y", {"e"}, {}}};
  CHECK(teacher_coverage(z, none_covered, v) == 0.0);

  // Mixed corpus: recompute coverage via explicit set intersection.
  Corpus mixed;
  mixed.docs = {{"0", {"a", "b"}, {}}, {"1", {"c"}, {}},      {"2", {"d"}, {}},
                {"3", {"e", "a"}, {}}, {"4", {"b", "d"}, {}}, {"5", {}, {}}};
  std::set<std::string> seed_terms;
  for (int c : z.seed_columns()) seed_terms.insert(v.terms[c]);
  int covered = 0;
  for (const Document& d : mixed.docs) {
    bool hit = false;
    for (const std::string& t : d.tokens)
      if (seed_terms.count(t)) hit = true;
    covered += hit ? 1 : 0;
  }
  CHECK(teacher_coverage(z, mixed, v) ==
        doctest::Approx(double(covered) / mixed.size()).epsilon(1e-12));
  CHECK(thrown_message([&] { teacher_coverage(z, Corpus{}, v); }) != "");
}

TEST_CASE("covered and uncovered documents partition the corpus") {
  Vocabulary v = vocab_of({"a", "b", "c", "d", "e"});
  TeacherMatrix z = small_teacher();
  Corpus corpus;
  corpus.docs = {{"0", {"a", "b"}, {}}, {"1", {"c"}, {}}, {"2", {"d"}, {}}, {"3", {"e"}, {}}};
  PseudoLabeledSet pset = label_covered(z, corpus, v);
  std::set<std::string> covered_ids;
  for (const PseudoLabeled& item : pset.items) covered_ids.insert(item.id);
  int uncovered = 0;
  for (const Document& d : corpus.docs)
    if (!covered_ids.count(d.id)) {
      ++uncovered;
      CHECK(doc_seed_columns(z, d, v).empty());
    }
  CHECK(covered_ids.size() + uncovered == corpus.size());
}

TEST_CASE("pseudo labels sum to one and export as one JSON object per line") {
  Vocabulary v = vocab_of({"a", "b", "c", "d", "e"});
  TeacherMatrix z = small_teacher();
  Corpus corpus;
  corpus.docs = {{"d0", {"b", "d"}, {}}, {"d1", {"b"}, {}}};
  PseudoLabeledSet pset = label_covered(z, corpus, v);
  for (const PseudoLabeled& item : pset.items) {
    double sum = 0;
    for (double p : item.q) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
  std::ostringstream out;
  export_pseudo_labels_jsonl(pset, out);
  std::string text = out.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  CHECK(testutil::contains(text, "\"labeler\":\"teacher\""));
}

}  // TEST_SUITE
