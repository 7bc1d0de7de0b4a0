#include "clts/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "clts/mathutil.hpp"
#include "clts/rng.hpp"

namespace clts {

void SynthTaskSpec::validate() const {
  if (num_classes < 2) throw std::invalid_argument("synth: need at least 2 classes");
  if (indicative_per_class < 1) throw std::invalid_argument("synth: indicative_per_class < 1");
  int pool_total = num_classes * indicative_per_class;
  if (source_vocab <= pool_total || target_vocab <= pool_total)
    throw std::invalid_argument("synth: vocabulary too small for the class pools");
  if (indicative_prob < 0 || indicative_prob > 1 || leak_prob < 0 || leak_prob > 1)
    throw std::invalid_argument("synth: probabilities must lie in [0, 1]");
  if (pool_zipf < 0 || background_zipf < 0)
    throw std::invalid_argument("synth: zipf exponents must be >= 0");
  if (doc_len_min < 1 || doc_len_max < doc_len_min)
    throw std::invalid_argument("synth: bad document length range");
  if (source_docs < num_classes || unlabeled_docs < 1 || test_docs < num_classes)
    throw std::invalid_argument("synth: corpus sizes too small");
  if (dict_coverage < 0 || dict_coverage > 1)
    throw std::invalid_argument("synth: dict_coverage must lie in [0, 1]");
}

std::vector<double> OracleLabeler::scores(const Document& doc) const {
  std::vector<double> s(logp.size(), 0.0);
  for (const std::string& t : doc.tokens) {
    auto it = index.find(t);
    if (it == index.end()) continue;
    for (std::size_t k = 0; k < logp.size(); ++k) s[k] += logp[k][it->second];
  }
  return s;
}

int OracleLabeler::predict(const Document& doc) const {
  std::vector<double> s = scores(doc);
  return argmax_tie_low(s);
}

namespace {

std::vector<std::string> make_tokens(const char* prefix, int n) {
  std::vector<std::string> v(n);
  char buf[16];
  for (int i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof(buf), "%s%04d", prefix, i);
    v[i] = buf;
  }
  return v;
}

// Normalized Zipf masses p_r ~ (r+1)^-a and their cumulative sums.
struct ZipfTable {
  std::vector<double> prob;
  std::vector<double> cum;
  ZipfTable(int n, double a) : prob(n), cum(n) {
    double total = 0.0;
    for (int r = 0; r < n; ++r) total += std::pow(r + 1.0, -a);
    double acc = 0.0;
    for (int r = 0; r < n; ++r) {
      prob[r] = std::pow(r + 1.0, -a) / total;
      acc += prob[r];
      cum[r] = acc;
    }
  }
  int draw(Rng& rng) const {
    double u = rng.next_double();
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    if (it == cum.end()) --it;
    return static_cast<int>(it - cum.begin());
  }
};

}  // namespace

SynthTask generate_synth_task(const SynthTaskSpec& spec) {
  spec.validate();
  const int K = spec.num_classes;
  const int ipc = spec.indicative_per_class;
  const int pool_total = K * ipc;

  SynthTask task;
  for (int k = 0; k < K; ++k) task.classes.names.push_back("class" + std::to_string(k));

  std::vector<std::string> src_tokens = make_tokens("s", spec.source_vocab);
  std::vector<std::string> tgt_tokens = make_tokens("t", spec.target_vocab);

  ZipfTable pool(ipc, spec.pool_zipf);
  ZipfTable bg_src(spec.source_vocab - pool_total, spec.background_zipf);
  ZipfTable bg_tgt(spec.target_vocab - pool_total, spec.background_zipf);

  Rng rng(spec.seed);

  // Dictionary: token i on the source side means token i on the target side;
  // expose an exact-size random subset of the pairs. The common inventory is
  // the smaller vocabulary.
  const int common = std::min(spec.source_vocab, spec.target_vocab);
  {
    Rng dict_rng = rng.fork(1);
    std::vector<int> ids(common);
    std::iota(ids.begin(), ids.end(), 0);
    shuffle(ids, dict_rng);
    const int keep = static_cast<int>(std::lround(spec.dict_coverage * common));
    for (int i = 0; i < keep; ++i)
      task.dictionary.add(src_tokens[ids[i]], tgt_tokens[ids[i]]);
  }

  // Token draw for a document of class k: with indicative_prob the position is
  // topical (usually the document's own pool, sometimes leaked to another
  // class), otherwise class-neutral background.
  auto sample_doc = [&](Rng& r, int klass, const std::vector<std::string>& tokens,
                        const ZipfTable& bg) {
    int len = spec.doc_len_min +
              static_cast<int>(r.below(static_cast<uint64_t>(spec.doc_len_max - spec.doc_len_min + 1)));
    std::vector<std::string> out;
    out.reserve(len);
    for (int i = 0; i < len; ++i) {
      if (r.next_double() < spec.indicative_prob) {
        int pool_class = klass;
        if (K > 1 && r.next_double() < spec.leak_prob) {
          int other = static_cast<int>(r.below(static_cast<uint64_t>(K - 1)));
          pool_class = other >= klass ? other + 1 : other;
        }
        out.push_back(tokens[pool_class * ipc + pool.draw(r)]);
      } else {
        out.push_back(tokens[pool_total + bg.draw(r)]);
      }
    }
    return out;
  };

  auto make_corpus = [&](Rng r, int n, const char* id_prefix,
                         const std::vector<std::string>& tokens, const ZipfTable& bg,
                         bool keep_labels) {
    Corpus corpus;
    corpus.docs.reserve(n);
    for (int i = 0; i < n; ++i) {
      Document d;
      d.id = std::string(id_prefix) + std::to_string(i);
      int klass = i % K;  // round-robin: exactly balanced labels
      d.tokens = sample_doc(r, klass, tokens, bg);
      if (keep_labels) d.label = klass;
      corpus.docs.push_back(std::move(d));
    }
    return corpus;
  };

  task.source_labeled = make_corpus(rng.fork(2), spec.source_docs, "src", src_tokens, bg_src, true);
  task.target_unlabeled =
      make_corpus(rng.fork(3), spec.unlabeled_docs, "unl", tgt_tokens, bg_tgt, false);
  task.target_test = make_corpus(rng.fork(4), spec.test_docs, "tst", tgt_tokens, bg_tgt, true);

  // True target-side token distribution per class, for the Bayes ceiling.
  task.oracle.index.reserve(spec.target_vocab);
  for (int i = 0; i < spec.target_vocab; ++i) task.oracle.index.emplace(tgt_tokens[i], i);
  task.oracle.logp.assign(K, std::vector<double>(spec.target_vocab, 0.0));
  const double tiny = 1e-300;  // guards log(0) for never-emitted tokens
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < spec.target_vocab; ++i) {
      double p;
      if (i < pool_total) {
        int owner = i / ipc;
        double pool_p = pool.prob[i % ipc];
        if (owner == k)
          p = spec.indicative_prob * (1.0 - spec.leak_prob) * pool_p;
        else
          p = spec.indicative_prob * spec.leak_prob / (K - 1) * pool_p;
      } else {
        p = (1.0 - spec.indicative_prob) * bg_tgt.prob[i - pool_total];
      }
      task.oracle.logp[k][i] = std::log(p + tiny);
    }
  }

  return task;
}

}  // namespace clts
