#include "clts/seed_transfer.hpp"

#include <algorithm>
#include <iostream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace clts {

std::vector<std::string> SeedSet::distinct_terms() const {
  std::set<std::string> seen;
  for (const auto& list : per_class_seeds)
    for (const SeedEntry& e : list) seen.insert(e.term);
  return {seen.begin(), seen.end()};
}

int TranslatedSeedSet::identity_count() const {
  int n = 0;
  for (const TranslatedSeed& e : entries)
    if (e.provenance == Provenance::identity) ++n;
  return n;
}

std::vector<int> TeacherMatrix::seed_columns() const {
  std::vector<int> cols;
  cols.reserve(columns.size());
  for (const auto& [c, w] : columns) cols.push_back(c);
  return cols;
}

SeedSet extract_seeds(const WeightMatrix& w, const Vocabulary& vocab, int budget,
                      int num_classes) {
  if (w.num_classes != num_classes)
    throw std::invalid_argument("extract_seeds: class count does not match the weight matrix");
  if (vocab.size() != w.num_cols)
    throw std::invalid_argument("extract_seeds: vocabulary size does not match the weight matrix");
  if (budget < num_classes)
    throw std::invalid_argument("extract_seeds: budget must be >= the number of classes");

  SeedSet out;
  out.budget = budget;
  out.per_class = budget / num_classes;
  out.budget_not_divisible = budget % num_classes != 0;
  if (out.budget_not_divisible)
    std::cerr << "warning: budget " << budget << " is not divisible by " << num_classes
              << " classes; extracting " << out.per_class << " per class\n";

  out.per_class_seeds.resize(num_classes);
  for (int k = 0; k < num_classes; ++k) {
    // strictly positive weights only; descending weight, ties lexicographic
    std::vector<std::pair<double, int>> cand;
    for (auto& [c, v] : w.rows[k])
      if (v > 0.0) cand.emplace_back(v, c);
    std::sort(cand.begin(), cand.end(), [&](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return vocab.terms[a.second] < vocab.terms[b.second];
    });

    if (static_cast<int>(cand.size()) < out.per_class) {
      ++out.classes_short;
      std::cerr << "warning: class " << k << " has only " << cand.size()
                << " positive-weight terms (asked for " << out.per_class << ")\n";
    }
    const int take = std::min<int>(out.per_class, static_cast<int>(cand.size()));
    for (int i = 0; i < take; ++i) {
      SeedEntry e;
      e.term = vocab.terms[cand[i].second];
      e.weights = w.column(cand[i].second);
      out.per_class_seeds[k].push_back(std::move(e));
    }
  }
  return out;
}

TranslatedSeedSet translate_seeds(const SeedSet& seeds, const BilingualDictionary& dict) {
  TranslatedSeedSet out;
  std::set<std::string> seen;  // one entry per distinct source term
  for (const auto& list : seeds.per_class_seeds) {
    for (const SeedEntry& s : list) {
      if (!seen.insert(s.term).second) continue;
      TranslatedSeed t;
      t.source = s.term;
      t.weights = s.weights;
      if (const std::vector<std::string>* targets = dict.lookup(s.term)) {
        t.targets = *targets;  // already sorted and unique
        t.provenance = Provenance::dictionary;
      } else {
        t.targets = {s.term};
        t.provenance = Provenance::identity;
      }
      out.entries.push_back(std::move(t));
    }
  }
  return out;
}

TeacherMatrix build_teacher_matrix(const TranslatedSeedSet& tset, const Vocabulary& target_vocab) {
  TeacherMatrix z;
  z.num_cols = target_vocab.size();
  for (const TranslatedSeed& e : tset.entries) {
    if (z.num_classes == 0) z.num_classes = static_cast<int>(e.weights.size());
    if (static_cast<int>(e.weights.size()) != z.num_classes)
      throw std::invalid_argument("build_teacher_matrix: ragged weight vectors");
    for (const std::string& t : e.targets) {
      auto c = target_vocab.col(t);
      if (!c) {
        ++z.dropped_terms;
        continue;
      }
      auto [it, fresh] = z.columns.try_emplace(*c, std::vector<double>(z.num_classes, 0.0));
      for (int k = 0; k < z.num_classes; ++k) it->second[k] += e.weights[k];
    }
  }
  // Exact cancellation would leave an all-zero column; that is not a seed.
  for (auto it = z.columns.begin(); it != z.columns.end();) {
    bool all_zero = std::all_of(it->second.begin(), it->second.end(),
                                [](double v) { return v == 0.0; });
    it = all_zero ? z.columns.erase(it) : std::next(it);
  }
  return z;
}

void export_translations_tsv(const TranslatedSeedSet& tset, std::ostream& out) {
  for (const TranslatedSeed& e : tset.entries) {
    const char* prov = e.provenance == Provenance::dictionary ? "dictionary" : "identity";
    for (const std::string& t : e.targets) out << e.source << '\t' << t << '\t' << prov << '\n';
  }
}

TranslatedSeedSet import_translations_tsv(const SeedSet& seeds, std::istream& in) {
  std::unordered_map<std::string, const SeedEntry*> known;
  for (const auto& list : seeds.per_class_seeds)
    for (const SeedEntry& s : list) known.emplace(s.term, &s);

  // Preserve first-seen entry order; accumulate targets per source.
  TranslatedSeedSet out;
  std::unordered_map<std::string, std::size_t> pos;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string src, tgt, prov;
    if (!std::getline(fields, src, '\t') || !std::getline(fields, tgt, '\t') ||
        !std::getline(fields, prov))
      throw std::runtime_error("translations tsv line " + std::to_string(lineno) +
                               ": expected source<TAB>target<TAB>provenance");
    if (prov != "dictionary" && prov != "identity")
      throw std::runtime_error("translations tsv line " + std::to_string(lineno) +
                               ": unknown provenance '" + prov + "'");
    auto k = known.find(src);
    if (k == known.end())
      throw std::runtime_error("translations tsv line " + std::to_string(lineno) +
                               ": source term '" + src + "' is not in the seed set");

    auto [it, fresh] = pos.try_emplace(src, out.entries.size());
    if (fresh) {
      TranslatedSeed t;
      t.source = src;
      t.weights = k->second->weights;
      t.provenance = prov == "dictionary" ? Provenance::dictionary : Provenance::identity;
      out.entries.push_back(std::move(t));
    }
    TranslatedSeed& entry = out.entries[it->second];
    auto at = std::lower_bound(entry.targets.begin(), entry.targets.end(), tgt);
    if (at == entry.targets.end() || *at != tgt) entry.targets.insert(at, tgt);
  }
  for (const TranslatedSeed& e : out.entries)
    if (e.targets.empty())
      throw std::runtime_error("translations tsv: source '" + e.source + "' has no targets");
  return out;
}

}  // namespace clts
