#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "clts/corpus.hpp"

namespace clts {

// Two parallel languages over disjoint token inventories. Each class owns a
// pool of indicative tokens with Zipf-decayed mass; the rest of the vocabulary
// is class-neutral background. Token i in the source maps to token i in the
// target, and the dictionary exposes a seeded subset of those pairs, so an
// indicative source token's translation is indicative for the same class.
struct SynthTaskSpec {
  int num_classes = 3;
  int source_vocab = 2000;
  int target_vocab = 2000;
  int indicative_per_class = 200;
  double indicative_prob = 0.30;  // P(a token position draws from its class pool)
  double leak_prob = 0.12;        // within indicative draws, P(another class's pool)
  double pool_zipf = 0.5;         // concentration of class pools (0 = uniform)
  double background_zipf = 0.9;
  int doc_len_min = 15;
  int doc_len_max = 35;
  int source_docs = 2000;
  int unlabeled_docs = 5000;
  int test_docs = 1000;
  double dict_coverage = 0.9;  // fraction of token pairs present in the dictionary
  uint64_t seed = 42;

  void validate() const;
};

// Bayes-rule labeler under the true generating distribution; the achievable
// ceiling for any classifier on the target side.
struct OracleLabeler {
  std::unordered_map<std::string, int> index;
  std::vector<std::vector<double>> logp;  // K x |target vocab|, log p(token | class)

  std::vector<double> scores(const Document& doc) const;
  int predict(const Document& doc) const;  // argmax, ties to the lowest class
};

struct SynthTask {
  Corpus source_labeled;
  Corpus target_unlabeled;  // labels dropped
  Corpus target_test;
  ClassLabelSpace classes;
  BilingualDictionary dictionary;
  OracleLabeler oracle;
};

// Deterministic for a given spec (including its seed).
SynthTask generate_synth_task(const SynthTaskSpec& spec);

}  // namespace clts
