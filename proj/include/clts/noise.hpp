#pragma once

#include <cstdint>
#include <string>

#include "clts/corpus.hpp"
#include "clts/seed_transfer.hpp"

namespace clts {

enum class NoiseKind { unif, freq, adv };

NoiseKind noise_kind_from_string(const std::string& s);
std::string to_string(NoiseKind k);

struct NoiseSpec {
  NoiseKind kind = NoiseKind::unif;
  double rate = 0.0;  // in [0, 1]
  uint64_t seed = 0;
};

struct PerturbStats {
  int considered = 0;
  int replaced = 0;  // Bernoulli firings (term replacements or column swaps)
};

// Each translated target term is independently replaced, with probability
// rate, by a term drawn uniformly from the target vocabulary. Weight vectors
// are untouched. Deterministic: every term position gets its own RNG stream
// forked from (seed, position), so results do not depend on traversal order.
TranslatedSeedSet perturb_unif(const TranslatedSeedSet& tset, const Vocabulary& target_vocab,
                               const NoiseSpec& spec, PerturbStats* stats = nullptr);

// Like unif, but replacements are drawn with probability proportional to the
// term's token frequency in the given corpus; zero-frequency terms are never
// drawn. A corpus with no in-vocabulary tokens is an error.
TranslatedSeedSet perturb_freq(const TranslatedSeedSet& tset, const Vocabulary& target_vocab,
                               const Corpus& target_corpus, const NoiseSpec& spec,
                               PerturbStats* stats = nullptr);

// Swaps, independently per seed column with probability rate, the argmax-class
// weight with a uniformly chosen other class (argmax ties to the lowest index).
TeacherMatrix perturb_adv(const TeacherMatrix& z, const NoiseSpec& spec,
                          PerturbStats* stats = nullptr);

}  // namespace clts
