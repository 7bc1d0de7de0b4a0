#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "clts/seed_transfer.hpp"

namespace clts {

enum class TeacherInput { binary, tfidf };
enum class Labeler { teacher, student };

struct PseudoLabeled {
  std::string id;
  int doc_index = 0;      // row in the corpus the labels were drawn from
  std::vector<double> q;  // soft label, sums to 1
  Labeler labeler = Labeler::teacher;
};

struct PseudoLabeledSet {
  std::vector<PseudoLabeled> items;
  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
};

// Distinct seed columns present in the document, ascending.
std::vector<int> doc_seed_columns(const TeacherMatrix& z, const Document& doc,
                                  const Vocabulary& vocab);

// softmax over summed seed-column weights; binary input counts each distinct
// term once, tfidf input weights terms by their tf-idf value. A document
// containing no seed column gets exactly uniform 1/K.
std::vector<double> teacher_predict(const TeacherMatrix& z, const Document& doc,
                                    const Vocabulary& vocab,
                                    TeacherInput input = TeacherInput::binary);

// Soft-labels exactly the covered documents (those sharing at least one term
// with the seed columns). An empty result is legal; a warning goes to stderr.
PseudoLabeledSet label_covered(const TeacherMatrix& z, const Corpus& corpus,
                               const Vocabulary& vocab,
                               TeacherInput input = TeacherInput::binary);

// Fraction of documents covered. Empty corpus is an error.
double teacher_coverage(const TeacherMatrix& z, const Corpus& corpus, const Vocabulary& vocab);

// One JSON object per line: {"id": ..., "q": [...], "labeler": "teacher"|"student"}.
void export_pseudo_labels_jsonl(const PseudoLabeledSet& pset, std::ostream& out);

}  // namespace clts
