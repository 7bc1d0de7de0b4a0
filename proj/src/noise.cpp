#include "clts/noise.hpp"

#include <algorithm>
#include <stdexcept>

#include "clts/mathutil.hpp"
#include "clts/rng.hpp"
#include "clts/vectorizer.hpp"

namespace clts {

NoiseKind noise_kind_from_string(const std::string& s) {
  if (s == "unif") return NoiseKind::unif;
  if (s == "freq") return NoiseKind::freq;
  if (s == "adv") return NoiseKind::adv;
  throw std::invalid_argument("unknown noise kind '" + s + "' (expected unif, freq, or adv)");
}

std::string to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::unif: return "unif";
    case NoiseKind::freq: return "freq";
    default: return "adv";
  }
}

namespace {

void check_rate(const NoiseSpec& spec) {
  if (spec.rate < 0.0 || spec.rate > 1.0)
    throw std::invalid_argument("noise rate must lie in [0, 1]");
}

// Replaces target terms in place; the draw callback maps a forked stream to a
// replacement term. Every term position owns stream (seed, position), so the
// outcome is independent of traversal order.
template <typename Draw>
TranslatedSeedSet replace_terms(const TranslatedSeedSet& tset, const NoiseSpec& spec,
                                PerturbStats* stats, Draw&& draw) {
  TranslatedSeedSet out = tset;
  Rng base(spec.seed);
  uint64_t position = 0;
  int considered = 0, replaced = 0;
  for (TranslatedSeed& entry : out.entries) {
    for (std::string& term : entry.targets) {
      Rng rng = base.fork(position++);
      ++considered;
      if (rng.next_double() < spec.rate) {
        term = draw(rng);
        ++replaced;
      }
    }
    std::sort(entry.targets.begin(), entry.targets.end());
    entry.targets.erase(std::unique(entry.targets.begin(), entry.targets.end()),
                        entry.targets.end());
  }
  if (stats) {
    stats->considered = considered;
    stats->replaced = replaced;
  }
  return out;
}

}  // namespace

TranslatedSeedSet perturb_unif(const TranslatedSeedSet& tset, const Vocabulary& target_vocab,
                               const NoiseSpec& spec, PerturbStats* stats) {
  check_rate(spec);
  if (target_vocab.size() == 0) throw std::invalid_argument("perturb_unif: empty vocabulary");
  return replace_terms(tset, spec, stats, [&](Rng& rng) {
    return target_vocab.terms[rng.below(static_cast<uint64_t>(target_vocab.size()))];
  });
}

TranslatedSeedSet perturb_freq(const TranslatedSeedSet& tset, const Vocabulary& target_vocab,
                               const Corpus& target_corpus, const NoiseSpec& spec,
                               PerturbStats* stats) {
  check_rate(spec);
  if (target_vocab.size() == 0) throw std::invalid_argument("perturb_freq: empty vocabulary");

  // Token frequencies over the corpus; zero-frequency terms can never be drawn.
  std::vector<double> cum(target_vocab.size(), 0.0);
  for (const Document& d : target_corpus.docs)
    for (const std::string& t : d.tokens)
      if (auto c = target_vocab.col(t)) cum[*c] += 1.0;
  double total = 0.0;
  for (double& v : cum) {
    total += v;
    v = total;
  }
  if (total <= 0.0)
    throw std::invalid_argument("perturb_freq: the corpus has no in-vocabulary tokens");

  return replace_terms(tset, spec, stats, [&](Rng& rng) {
    double u = rng.next_double() * total;
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    if (it == cum.end()) --it;
    return target_vocab.terms[it - cum.begin()];
  });
}

TeacherMatrix perturb_adv(const TeacherMatrix& z, const NoiseSpec& spec, PerturbStats* stats) {
  check_rate(spec);
  if (z.num_classes < 2) throw std::invalid_argument("perturb_adv: need at least 2 classes");

  TeacherMatrix out = z;
  Rng base(spec.seed);
  uint64_t position = 0;
  int considered = 0, swapped = 0;
  for (auto& [c, col] : out.columns) {  // std::map: fixed column order
    Rng rng = base.fork(position++);
    ++considered;
    if (rng.next_double() >= spec.rate) continue;
    int k = argmax_tie_low(col);
    // uniform over the other classes
    int other = static_cast<int>(rng.below(static_cast<uint64_t>(z.num_classes - 1)));
    if (other >= k) ++other;
    std::swap(col[k], col[other]);
    ++swapped;
  }
  if (stats) {
    stats->considered = considered;
    stats->replaced = swapped;
  }
  return out;
}

}  // namespace clts
