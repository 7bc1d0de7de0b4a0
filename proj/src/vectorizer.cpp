#include "clts/vectorizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_set>

namespace clts {

std::optional<int> Vocabulary::col(const std::string& term) const {
  auto it = index.find(term);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

double Vocabulary::idf(int c) const {
  return std::log((1.0 + fitted_docs) / (1.0 + df[c])) + 1.0;
}

Vocabulary Vocabulary::from_terms(std::vector<std::string> terms, std::vector<int> df,
                                  std::pair<int, int> ngram_range, int fitted_docs) {
  if (terms.size() != df.size())
    throw std::invalid_argument("vocabulary: terms/df size mismatch");
  Vocabulary v;
  v.terms = std::move(terms);
  v.df = std::move(df);
  v.ngram_lo = ngram_range.first;
  v.ngram_hi = ngram_range.second;
  v.fitted_docs = fitted_docs;
  v.index.reserve(v.terms.size());
  for (int i = 0; i < v.size(); ++i) v.index.emplace(v.terms[i], i);
  return v;
}

std::size_t DocTermMatrix::nnz() const {
  std::size_t n = 0;
  for (const SparseRow& r : rows) n += r.size();
  return n;
}

std::vector<std::string> extract_ngrams(const std::vector<std::string>& tokens, int lo, int hi) {
  std::vector<std::string> grams;
  for (int n = lo; n <= hi; ++n) {
    if (static_cast<int>(tokens.size()) < n) break;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      std::string g = tokens[i];
      for (int k = 1; k < n; ++k) {
        g += ' ';
        g += tokens[i + k];
      }
      grams.push_back(std::move(g));
    }
  }
  return grams;
}

Vocabulary fit_vocabulary(const Corpus& corpus, std::pair<int, int> ngram_range, int min_df) {
  if (corpus.empty()) throw std::invalid_argument("fit_vocabulary: empty corpus");
  if (min_df < 1) throw std::invalid_argument("fit_vocabulary: min_df must be >= 1");
  if (ngram_range.first < 1 || ngram_range.second < ngram_range.first)
    throw std::invalid_argument("fit_vocabulary: bad ngram range");

  // std::map keeps terms sorted, which fixes the column order.
  std::map<std::string, int> df;
  std::unordered_set<std::string> seen;
  for (const Document& d : corpus.docs) {
    seen.clear();
    for (std::string& g : extract_ngrams(d.tokens, ngram_range.first, ngram_range.second))
      if (seen.insert(g).second) ++df[g];
  }

  std::vector<std::string> terms;
  std::vector<int> dfs;
  for (auto& [term, n] : df) {
    if (n >= min_df) {
      terms.push_back(term);
      dfs.push_back(n);
    }
  }
  return Vocabulary::from_terms(std::move(terms), std::move(dfs), ngram_range,
                                static_cast<int>(corpus.size()));
}

SparseRow tfidf_row(const Document& doc, const Vocabulary& vocab) {
  std::map<int, double> counts;
  for (const std::string& g : extract_ngrams(doc.tokens, vocab.ngram_lo, vocab.ngram_hi))
    if (auto c = vocab.col(g)) counts[*c] += 1.0;

  SparseRow row;
  row.reserve(counts.size());
  double sq = 0.0;
  for (auto& [c, tf] : counts) {
    double v = tf * vocab.idf(c);
    row.emplace_back(c, v);
    sq += v * v;
  }
  if (sq > 0.0) {
    double inv = 1.0 / std::sqrt(sq);
    for (auto& [c, v] : row) v *= inv;
  }
  return row;
}

DocTermMatrix transform_tfidf(const Corpus& corpus, const Vocabulary& vocab) {
  DocTermMatrix m;
  m.cols = vocab.size();
  m.row_norm = DocTermMatrix::RowNorm::l2;
  m.rows.reserve(corpus.size());
  for (const Document& d : corpus.docs) m.rows.push_back(tfidf_row(d, vocab));
  return m;
}

SparseRow binary_bow(const Document& doc, const Vocabulary& vocab) {
  std::vector<int> cols;
  for (const std::string& g : extract_ngrams(doc.tokens, vocab.ngram_lo, vocab.ngram_hi))
    if (auto c = vocab.col(g)) cols.push_back(*c);
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  SparseRow row;
  row.reserve(cols.size());
  for (int c : cols) row.emplace_back(c, 1.0);
  return row;
}

DocTermMatrix gather_rows(const DocTermMatrix& m, const std::vector<int>& row_ids) {
  DocTermMatrix out;
  out.cols = m.cols;
  out.row_norm = m.row_norm;
  out.rows.reserve(row_ids.size());
  for (int r : row_ids) {
    if (r < 0 || static_cast<std::size_t>(r) >= m.rows.size())
      throw std::out_of_range("gather_rows: row id out of range");
    out.rows.push_back(m.rows[r]);
  }
  return out;
}

}  // namespace clts
