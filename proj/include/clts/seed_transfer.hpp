#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "clts/corpus.hpp"
#include "clts/sparse_logreg.hpp"
#include "clts/vectorizer.hpp"

namespace clts {

struct SeedEntry {
  std::string term;
  std::vector<double> weights;  // full per-class column for this term
  bool operator==(const SeedEntry&) const = default;
};

struct SeedSet {
  int budget = 0;
  int per_class = 0;  // floor(budget / K)
  std::vector<std::vector<SeedEntry>> per_class_seeds;  // descending weight, ties lexicographic
  bool budget_not_divisible = false;
  int classes_short = 0;  // classes with fewer positive terms than per_class

  int num_classes() const { return static_cast<int>(per_class_seeds.size()); }
  // Distinct terms across classes; this is what the budget bounds.
  std::vector<std::string> distinct_terms() const;
  bool operator==(const SeedSet&) const = default;
};

// Top floor(B/K) strictly-positive-weight terms per class. A term selected by
// several classes is kept in each list but charged once against the budget.
// Errors: budget < K, K mismatch with the weight matrix, vocabulary size
// mismatch with the weight matrix columns.
SeedSet extract_seeds(const WeightMatrix& w, const Vocabulary& vocab, int budget,
                      int num_classes);

enum class Provenance { dictionary, identity };

struct TranslatedSeed {
  std::string source;
  std::vector<std::string> targets;  // sorted, unique, never empty
  std::vector<double> weights;       // source term's full per-class column
  Provenance provenance = Provenance::dictionary;
  bool operator==(const TranslatedSeed&) const = default;
};

// One entry per distinct source seed, in class-major then rank order.
struct TranslatedSeedSet {
  std::vector<TranslatedSeed> entries;
  int identity_count() const;
  bool operator==(const TranslatedSeedSet&) const = default;
};

// Dictionary misses fall back to the source term itself (identity provenance).
TranslatedSeedSet translate_seeds(const SeedSet& seeds, const BilingualDictionary& dict);

// Per-class weights over the target vocabulary. Only seed columns exist; a
// column receiving several seeds holds their sum. No bias.
struct TeacherMatrix {
  int num_classes = 0;
  int num_cols = 0;                           // |target vocabulary|
  std::map<int, std::vector<double>> columns;  // column -> per-class weights
  int dropped_terms = 0;  // translated terms absent from the target vocabulary

  bool is_seed_column(int c) const { return columns.count(c) != 0; }
  std::vector<int> seed_columns() const;
  bool operator==(const TeacherMatrix&) const = default;
};

TeacherMatrix build_teacher_matrix(const TranslatedSeedSet& tset, const Vocabulary& target_vocab);

// Three-column review TSV: source, target, provenance ("dictionary"|"identity").
void export_translations_tsv(const TranslatedSeedSet& tset, std::ostream& out);

// Rebuilds a TranslatedSeedSet from a review TSV, joining weight columns back
// from the seed set. Rows naming unknown source terms are an error.
TranslatedSeedSet import_translations_tsv(const SeedSet& seeds, std::istream& in);

}  // namespace clts
