#include "doctest.h"

#include <cstdio>
#include <string>

#include "clts/synth.hpp"
#include "test_util.hpp"

using namespace clts;
using testutil::thrown_message;

namespace {

// Small task for structural checks; the Bayes-ceiling test uses the defaults.
SynthTaskSpec small_spec() {
  SynthTaskSpec s;
  s.num_classes = 3;
  s.source_vocab = 120;
  s.target_vocab = 120;
  s.indicative_per_class = 20;
  s.source_docs = 60;
  s.unlabeled_docs = 80;
  s.test_docs = 30;
  s.seed = 5;
  return s;
}

std::string token_name(char side, int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%c%04d", side, i);
  return buf;
}

}  // namespace

TEST_SUITE("synth") {

TEST_CASE("generation is deterministic for a fixed spec") {
  SynthTask a = generate_synth_task(small_spec());
  SynthTask b = generate_synth_task(small_spec());
  REQUIRE(a.source_labeled.size() == b.source_labeled.size());
  for (std::size_t i = 0; i < a.source_labeled.size(); ++i) {
    CHECK(a.source_labeled.docs[i].id == b.source_labeled.docs[i].id);
    CHECK(a.source_labeled.docs[i].tokens == b.source_labeled.docs[i].tokens);
    CHECK(a.source_labeled.docs[i].label == b.source_labeled.docs[i].label);
  }
  CHECK(a.dictionary == b.dictionary);
  CHECK(a.target_test.docs[7].tokens == b.target_test.docs[7].tokens);

  SynthTaskSpec other = small_spec();
  other.seed = 6;
  SynthTask c = generate_synth_task(other);
  CHECK_FALSE(a.source_labeled.docs[0].tokens == c.source_labeled.docs[0].tokens);
}

TEST_CASE("corpus shapes, labels, and class names"){
  SynthTaskSpec spec = small_spec();
  SynthTask task = generate_synth_task(spec);
  CHECK(task.source_labeled.size() == 60);
  CHECK(task.target_unlabeled.size() == 80);
  CHECK(task.target_test.size() == 30);
  CHECK(task.classes.names == std::vector<std::string>{"class0", "class1", "class2"});

  CHECK(task.source_labeled.fully_labeled());
  CHECK(task.target_test.fully_labeled());
  for (const Document& d : task.target_unlabeled.docs) CHECK_FALSE(d.label.has_value());

  // Round-robin labels are exactly balanced.
  std::vector<int> counts(3, 0);
  for (const Document& d : task.source_labeled.docs) ++counts[*d.label];
  CHECK(counts == std::vector<int>{20, 20, 20});

  for (const Document& d : task.source_labeled.docs) {
    CHECK(static_cast<int>(d.tokens.size()) >= spec.doc_len_min);
    CHECK(static_cast<int>(d.tokens.size()) <= spec.doc_len_max);
  }
}

TEST_CASE("full dictionary coverage pairs every common token with its twin") {
  SynthTaskSpec spec = small_spec();
  spec.dict_coverage = 1.0;
  SynthTask task = generate_synth_task(spec);
  CHECK(task.dictionary.size() == 120);
  const int pool_total = spec.num_classes * spec.indicative_per_class;
  for (int i = 0; i < pool_total; ++i) {
    const std::vector<std::string>* t = task.dictionary.lookup(token_name('s', i));
    REQUIRE(t != nullptr);
    // Same index on the target side, hence indicative for the same class.
    CHECK(*t == std::vector<std::string>{token_name('t', i)});
  }
}

TEST_CASE("zero dictionary coverage yields an empty dictionary") {
  SynthTaskSpec spec = small_spec();
  spec.dict_coverage = 0.0;
  SynthTask task = generate_synth_task(spec);
  CHECK(task.dictionary.size() == 0);
}

TEST_CASE("partial coverage exposes the requested fraction of pairs") {
  SynthTaskSpec spec = small_spec();
  spec.dict_coverage = 0.5;
  SynthTask task = generate_synth_task(spec);
  CHECK(task.dictionary.size() == 60);
  for (const auto& [src, targets] : task.dictionary.entries) {
    REQUIRE(targets.size() == 1);
    CHECK(src.substr(1) == targets[0].substr(1));  // index-preserving pairs
  }
}

TEST_CASE("the Bayes oracle clears the ceiling on the default task") {
  SynthTask task = generate_synth_task(SynthTaskSpec{});
  int correct = 0;
  for (const Document& d : task.target_test.docs)
    if (task.oracle.predict(d) == *d.label) ++correct;
  double acc = static_cast<double>(correct) / task.target_test.size();
  CHECK(acc >= 0.95);
}

TEST_CASE("oracle scores ignore out-of-inventory tokens") {
  SynthTask task = generate_synth_task(small_spec());
  Document alien{"x", {"nonexistent", "tokens"}, std::nullopt};
  std::vector<double> s = task.oracle.scores(alien);
  for (double v : s) CHECK(v == 0.0);
  CHECK(task.oracle.predict(alien) == 0);  // all-zero scores tie to class 0
}

TEST_CASE("spec validation rejects degenerate settings") {
  auto reject = [](auto mutate) {
    SynthTaskSpec s = small_spec();
    mutate(s);
    return thrown_message([&] { s.validate(); });
  };
  CHECK(reject([](SynthTaskSpec& s) { s.num_classes = 1; }) != "");
  CHECK(reject([](SynthTaskSpec& s) { s.indicative_per_class = 0; }) != "");
  CHECK(reject([](SynthTaskSpec& s) { s.source_vocab = 60; }) != "");  // <= pool total
  CHECK(reject([](SynthTaskSpec& s) { s.indicative_prob = 1.2; }) != "");
  CHECK(reject([](SynthTaskSpec& s) { s.leak_prob = -0.1; }) != "");
  CHECK(reject([](SynthTaskSpec& s) { s.pool_zipf = -1.0; }) != "");
  CHECK(reject([](SynthTaskSpec& s) { s.doc_len_max = s.doc_len_min - 1; }) != "");
  CHECK(reject([](SynthTaskSpec& s) { s.source_docs = 2; }) != "");  // < num_classes
  CHECK(reject([](SynthTaskSpec& s) { s.dict_coverage = 1.5; }) != "");
  SynthTaskSpec fine = small_spec();
  CHECK(thrown_message([&] { fine.validate(); }) == "");
}

}  // TEST_SUITE
