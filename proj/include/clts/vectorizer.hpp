#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "clts/corpus.hpp"

namespace clts {

struct Vocabulary {
  std::vector<std::string> terms;  // lexicographically sorted
  std::unordered_map<std::string, int> index;
  std::vector<int> df;  // document frequency on the fitting corpus
  int ngram_lo = 1;
  int ngram_hi = 1;
  int fitted_docs = 0;  // N used by idf

  int size() const { return static_cast<int>(terms.size()); }
  std::optional<int> col(const std::string& term) const;
  // ln((1+N)/(1+df)) + 1
  double idf(int c) const;

  bool operator==(const Vocabulary& o) const {
    return terms == o.terms && df == o.df && ngram_lo == o.ngram_lo &&
           ngram_hi == o.ngram_hi && fitted_docs == o.fitted_docs;
  }

  static Vocabulary from_terms(std::vector<std::string> terms, std::vector<int> df,
                               std::pair<int, int> ngram_range, int fitted_docs);
};

// (column, value) pairs, column-ascending.
using SparseRow = std::vector<std::pair<int, double>>;

struct DocTermMatrix {
  enum class RowNorm { none, l2 };
  int cols = 0;
  RowNorm row_norm = RowNorm::none;
  std::vector<SparseRow> rows;

  std::size_t num_rows() const { return rows.size(); }
  std::size_t nnz() const;
};

// Contiguous n-grams joined with a single space, lengths lo..hi.
std::vector<std::string> extract_ngrams(const std::vector<std::string>& tokens, int lo, int hi);

// Terms with df >= min_df, sorted. Empty corpus or min_df < 1 is an error.
Vocabulary fit_vocabulary(const Corpus& corpus, std::pair<int, int> ngram_range = {1, 1},
                          int min_df = 1);

// Raw counts scaled by idf, then l2-normalized. Out-of-vocabulary terms are
// ignored; a document with no in-vocabulary terms keeps an all-zero row.
SparseRow tfidf_row(const Document& doc, const Vocabulary& vocab);
DocTermMatrix transform_tfidf(const Corpus& corpus, const Vocabulary& vocab);

// Binary presence of distinct in-vocabulary terms (value 1.0).
SparseRow binary_bow(const Document& doc, const Vocabulary& vocab);

DocTermMatrix gather_rows(const DocTermMatrix& m, const std::vector<int>& row_ids);

}  // namespace clts
