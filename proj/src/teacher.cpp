#include "clts/teacher.hpp"

#include <algorithm>
#include <iostream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

#include "clts/mathutil.hpp"
#include "clts/vectorizer.hpp"

namespace clts {

std::vector<int> doc_seed_columns(const TeacherMatrix& z, const Document& doc,
                                  const Vocabulary& vocab) {
  std::vector<int> cols;
  for (const std::string& t : doc.tokens) {
    auto c = vocab.col(t);
    if (c && z.is_seed_column(*c)) cols.push_back(*c);
  }
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  return cols;
}

std::vector<double> teacher_predict(const TeacherMatrix& z, const Document& doc,
                                    const Vocabulary& vocab, TeacherInput input) {
  std::vector<double> logits(z.num_classes, 0.0);
  if (z.num_classes == 0) throw std::invalid_argument("teacher_predict: empty teacher");

  if (input == TeacherInput::binary) {
    for (int c : doc_seed_columns(z, doc, vocab)) {
      const std::vector<double>& col = z.columns.at(c);
      for (int k = 0; k < z.num_classes; ++k) logits[k] += col[k];
    }
  } else {
    for (auto& [c, v] : tfidf_row(doc, vocab)) {
      auto it = z.columns.find(c);
      if (it == z.columns.end()) continue;
      for (int k = 0; k < z.num_classes; ++k) logits[k] += v * it->second[k];
    }
  }
  softmax_inplace(logits);  // no seed columns -> all-zero logits -> exactly 1/K
  return logits;
}

PseudoLabeledSet label_covered(const TeacherMatrix& z, const Corpus& corpus,
                               const Vocabulary& vocab, TeacherInput input) {
  PseudoLabeledSet out;
  for (int i = 0; i < static_cast<int>(corpus.size()); ++i) {
    const Document& doc = corpus.docs[i];
    if (doc_seed_columns(z, doc, vocab).empty()) continue;
    PseudoLabeled p;
    p.id = doc.id;
    p.doc_index = i;
    p.q = teacher_predict(z, doc, vocab, input);
    p.labeler = Labeler::teacher;
    out.items.push_back(std::move(p));
  }
  if (out.empty())
    std::cerr << "warning: teacher covers no documents in a corpus of " << corpus.size() << "\n";
  return out;
}

double teacher_coverage(const TeacherMatrix& z, const Corpus& corpus, const Vocabulary& vocab) {
  if (corpus.empty()) throw std::invalid_argument("teacher_coverage: empty corpus");
  std::size_t covered = 0;
  for (const Document& doc : corpus.docs)
    if (!doc_seed_columns(z, doc, vocab).empty()) ++covered;
  return static_cast<double>(covered) / static_cast<double>(corpus.size());
}

void export_pseudo_labels_jsonl(const PseudoLabeledSet& pset, std::ostream& out) {
  for (const PseudoLabeled& p : pset.items) {
    nlohmann::json rec;
    rec["id"] = p.id;
    rec["q"] = p.q;
    rec["labeler"] = p.labeler == Labeler::teacher ? "teacher" : "student";
    out << rec.dump() << '\n';
  }
}

}  // namespace clts
