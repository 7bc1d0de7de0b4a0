#include "clts/evaluation.hpp"

#include <cmath>
#include <stdexcept>

#include "clts/mathutil.hpp"
#include "clts/teacher.hpp"

namespace clts {

double accuracy(const std::vector<int>& preds, const std::vector<int>& gold) {
  if (preds.size() != gold.size()) throw std::invalid_argument("accuracy: size mismatch");
  if (preds.empty()) throw std::invalid_argument("accuracy: empty input");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i)
    if (preds[i] == gold[i]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(preds.size());
}

double macro_f1(const std::vector<int>& preds, const std::vector<int>& gold, int num_classes) {
  if (preds.size() != gold.size()) throw std::invalid_argument("macro_f1: size mismatch");
  if (preds.empty()) throw std::invalid_argument("macro_f1: empty input");
  if (num_classes < 2) throw std::invalid_argument("macro_f1: need at least 2 classes");

  std::vector<int> tp(num_classes, 0), fp(num_classes, 0), fn(num_classes, 0);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    int p = preds[i], g = gold[i];
    if (g < 0 || g >= num_classes) throw std::invalid_argument("macro_f1: gold label out of range");
    if (p == g)
      ++tp[g];
    else {
      ++fn[g];
      if (p >= 0 && p < num_classes) ++fp[p];  // p == -1 is "no prediction"
    }
  }

  double sum = 0.0;
  for (int k = 0; k < num_classes; ++k) {
    double prec = tp[k] + fp[k] > 0 ? static_cast<double>(tp[k]) / (tp[k] + fp[k]) : 0.0;
    double rec = tp[k] + fn[k] > 0 ? static_cast<double>(tp[k]) / (tp[k] + fn[k]) : 0.0;
    sum += prec + rec > 0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
  }
  return sum / num_classes;
}

TeacherEval evaluate_teacher(const TeacherMatrix& z, const Corpus& test, const Vocabulary& vocab,
                             TeacherInput input) {
  if (test.empty()) throw std::invalid_argument("evaluate_teacher: empty test corpus");
  std::vector<int> gold = test.labels();
  std::vector<int> preds(test.size(), -1);  // uncovered stays -1: always a mistake
  std::size_t covered = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (doc_seed_columns(z, test.docs[i], vocab).empty()) continue;
    ++covered;
    preds[i] = argmax_tie_low(teacher_predict(z, test.docs[i], vocab, input));
  }
  TeacherEval ev;
  ev.coverage = static_cast<double>(covered) / static_cast<double>(test.size());
  ev.metrics.accuracy = accuracy(preds, gold);
  ev.metrics.macro_f1 = macro_f1(preds, gold, z.num_classes);
  return ev;
}

Metrics evaluate_student(const StudentModel& m, const Corpus& test) {
  if (test.empty()) throw std::invalid_argument("evaluate_student: empty test corpus");
  std::vector<int> gold = test.labels();
  std::vector<int> preds(test.size());
  for (std::size_t i = 0; i < test.size(); ++i)
    preds[i] = argmax_tie_low(student_predict(m, test.docs[i]));
  Metrics out;
  out.accuracy = accuracy(preds, gold);
  out.macro_f1 = macro_f1(preds, gold, m.num_classes());
  return out;
}

std::vector<uint64_t> default_eval_seeds() { return {7, 20, 42, 127, 1993}; }

SeedStat mean_stddev(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("mean_stddev: empty input");
  SeedStat s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(var / static_cast<double>(values.size()));  // population
  return s;
}

}  // namespace clts
