#pragma once

#include <cstdint>
#include <vector>

#include "clts/teacher.hpp"
#include "clts/vectorizer.hpp"

namespace clts {

struct StudentModel {
  std::vector<std::vector<double>> weights;  // K x |vocab|, dense
  std::vector<double> bias;                  // unpenalized
  Vocabulary vocab;                          // tf-idf feature space (usually 1-2 grams)

  int num_classes() const { return static_cast<int>(bias.size()); }
  bool operator==(const StudentModel&) const = default;
};

struct StudentTrainOptions {
  double lambda_l2 = 1.0;
  double rel_tol = 1e-6;  // stop when the relative loss change drops below this
  int max_iters = 500;
};

struct StudentFitInfo {
  double final_loss = 0;
  int iters = 0;
  bool converged = false;
};

// Subsamples every class down to the smallest class count m (argmax of q
// decides the class, ties to the lowest index). Classes keep exactly m items;
// if any class is empty the result is empty and *empty_class_warning is set.
// Deterministic for a given rng_seed, independent of other classes' counts.
PseudoLabeledSet balance(const PseudoLabeledSet& pset, uint64_t rng_seed, int num_classes,
                         bool* empty_class_warning = nullptr);

// Multinomial logistic regression distilled from soft labels:
//   sum_j H(q_j, softmax(theta h_j + b)) + lambda_l2 * ||theta||^2
// minimized by full-batch gradient descent with backtracking line search, zero
// initialization, bias unpenalized. features rows must align with pset items.
StudentModel train_student(const PseudoLabeledSet& pset, const DocTermMatrix& features,
                           const Vocabulary& vocab, int num_classes,
                           const StudentTrainOptions& options = {},
                           StudentFitInfo* info = nullptr);

std::vector<double> student_predict(const StudentModel& m, const Document& doc);
std::vector<std::vector<double>> student_predict_matrix(const StudentModel& m,
                                                        const DocTermMatrix& features);

// Distillation objective and gradient, exposed for finite-difference checks.
double distill_loss(const DocTermMatrix& X, const std::vector<std::vector<double>>& q,
                    const std::vector<std::vector<double>>& theta,
                    const std::vector<double>& bias, double lambda_l2);
void distill_grad(const DocTermMatrix& X, const std::vector<std::vector<double>>& q,
                  const std::vector<std::vector<double>>& theta, const std::vector<double>& bias,
                  double lambda_l2, std::vector<std::vector<double>>& grad_theta,
                  std::vector<double>& grad_bias);

struct CoTrainConfig {
  int rounds = 2;
  bool early_stop = false;  // stop once disagreement stops decreasing
  uint64_t seed = 42;
  TeacherInput teacher_input = TeacherInput::binary;
  bool update_teacher = false;  // re-estimate seed columns from student hard labels
  bool strip_seeds = false;     // zero seed-word columns in the student features
  StudentTrainOptions student;
};

struct RoundReport {
  int pool_size = 0;  // pseudo-labeled documents before balancing
  int balanced_size = 0;
  double disagreement = 0;  // student vs teacher argmax on covered documents
  double train_loss = 0;
  int train_iters = 0;
};

struct CoTrainReport {
  std::vector<RoundReport> rounds;
  bool early_stopped = false;
  int rounds_executed() const { return static_cast<int>(rounds.size()); }
};

struct CoTrainResult {
  StudentModel student;
  CoTrainReport report;
};

// Round 1 trains a fresh student on the balanced teacher-labeled covered set.
// Later rounds relabel the full corpus with the current student (or, with
// update_teacher, re-estimate the teacher from student hard labels and relabel
// only covered documents), balance again, and train a fresh student. Zero
// coverage is an error suggesting a larger budget or a better dictionary.
CoTrainResult cotrain(const TeacherMatrix& teacher, const Corpus& unlabeled,
                      const Vocabulary& teacher_vocab, const Vocabulary& student_vocab,
                      const DocTermMatrix& student_features, const CoTrainConfig& config);

// Replaces each seed column with add-1-smoothed log-odds of class given seed
// presence, counted over (covered document, hard label) pairs.
TeacherMatrix update_teacher_log_odds(const TeacherMatrix& teacher, const Corpus& corpus,
                                      const Vocabulary& teacher_vocab,
                                      const std::vector<int>& covered_doc_ids,
                                      const std::vector<int>& hard_labels);

// Student-vocabulary columns whose term contains a seed word as any
// space-separated component (seed unigrams and bigrams touching them).
std::vector<int> seed_feature_columns(const TeacherMatrix& teacher,
                                      const Vocabulary& teacher_vocab,
                                      const Vocabulary& student_vocab);

DocTermMatrix zero_columns(const DocTermMatrix& m, const std::vector<int>& cols);

}  // namespace clts
