#include "clts/cotrain.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <unordered_set>

#include "clts/mathutil.hpp"
#include "clts/rng.hpp"

namespace clts {

PseudoLabeledSet balance(const PseudoLabeledSet& pset, uint64_t rng_seed, int num_classes,
                         bool* empty_class_warning) {
  if (num_classes < 2) throw std::invalid_argument("balance: need at least 2 classes");
  if (empty_class_warning) *empty_class_warning = false;

  std::vector<std::vector<int>> by_class(num_classes);  // item indices per argmax class
  for (int i = 0; i < static_cast<int>(pset.size()); ++i) {
    const PseudoLabeled& p = pset.items[i];
    if (static_cast<int>(p.q.size()) != num_classes)
      throw std::invalid_argument("balance: q size does not match the class count");
    by_class[argmax_tie_low(p.q)].push_back(i);
  }

  std::size_t m = pset.size();
  for (const auto& ids : by_class) m = std::min(m, ids.size());
  if (m == 0) {
    if (empty_class_warning) *empty_class_warning = true;
    std::cerr << "warning: balance: a class received no pseudo-labels; result is empty\n";
    return {};
  }

  // Partial Fisher-Yates per class, each on its own stream, then original
  // order restored so the subsample is stable.
  Rng base(rng_seed);
  PseudoLabeledSet out;
  for (int k = 0; k < num_classes; ++k) {
    std::vector<int>& ids = by_class[k];
    Rng rng = base.fork(static_cast<uint64_t>(k));
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng.below(ids.size() - i));
      std::swap(ids[i], ids[j]);
    }
    ids.resize(m);
    std::sort(ids.begin(), ids.end());
    for (int i : ids) out.items.push_back(pset.items[i]);
  }
  return out;
}

double distill_loss(const DocTermMatrix& X, const std::vector<std::vector<double>>& q,
                    const std::vector<std::vector<double>>& theta,
                    const std::vector<double>& bias, double lambda_l2) {
  const int K = static_cast<int>(bias.size());
  double loss = 0.0;
  std::vector<double> z(K);
  for (std::size_t j = 0; j < X.rows.size(); ++j) {
    for (int k = 0; k < K; ++k) {
      double s = bias[k];
      for (auto& [c, v] : X.rows[j]) s += theta[k][c] * v;
      z[k] = s;
    }
    double lse = log_sum_exp(z);
    for (int k = 0; k < K; ++k) loss += q[j][k] * (lse - z[k]);
  }
  for (const auto& row : theta)
    for (double v : row) loss += lambda_l2 * v * v;
  return loss;
}

void distill_grad(const DocTermMatrix& X, const std::vector<std::vector<double>>& q,
                  const std::vector<std::vector<double>>& theta, const std::vector<double>& bias,
                  double lambda_l2, std::vector<std::vector<double>>& grad_theta,
                  std::vector<double>& grad_bias) {
  const int K = static_cast<int>(bias.size());
  grad_theta.assign(K, std::vector<double>(X.cols, 0.0));
  grad_bias.assign(K, 0.0);
  std::vector<double> z(K);
  for (std::size_t j = 0; j < X.rows.size(); ++j) {
    for (int k = 0; k < K; ++k) {
      double s = bias[k];
      for (auto& [c, v] : X.rows[j]) s += theta[k][c] * v;
      z[k] = s;
    }
    softmax_inplace(z);
    for (int k = 0; k < K; ++k) {
      double d = z[k] - q[j][k];
      grad_bias[k] += d;
      for (auto& [c, v] : X.rows[j]) grad_theta[k][c] += d * v;
    }
  }
  for (int k = 0; k < K; ++k)
    for (int c = 0; c < X.cols; ++c) grad_theta[k][c] += 2.0 * lambda_l2 * theta[k][c];
}

namespace {

// Cross-entropy part of the objective given cached logits.
double data_loss(const std::vector<std::vector<double>>& z,
                 const std::vector<std::vector<double>>& q) {
  double loss = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    double lse = log_sum_exp(z[j]);
    for (std::size_t k = 0; k < z[j].size(); ++k) loss += q[j][k] * (lse - z[j][k]);
  }
  return loss;
}

}  // namespace

StudentModel train_student(const PseudoLabeledSet& pset, const DocTermMatrix& features,
                           const Vocabulary& vocab, int num_classes,
                           const StudentTrainOptions& options, StudentFitInfo* info) {
  if (pset.empty()) throw std::invalid_argument("train_student: empty training set");
  if (pset.size() != features.num_rows())
    throw std::invalid_argument("train_student: features do not align with the labeled set");
  if (features.cols != vocab.size())
    throw std::invalid_argument("train_student: features do not match the vocabulary");
  if (options.lambda_l2 < 0.0) throw std::invalid_argument("train_student: negative lambda_l2");

  const int K = num_classes;
  const int V = features.cols;
  const std::size_t N = pset.size();

  std::vector<std::vector<double>> q(N);
  for (std::size_t j = 0; j < N; ++j) {
    q[j] = pset.items[j].q;
    if (static_cast<int>(q[j].size()) != K)
      throw std::invalid_argument("train_student: q size does not match the class count");
  }

  // Zero init makes training deterministic; logits are cached and updated by
  // the accepted step, and the line search probes candidate losses in O(N*K)
  // because the penalty is quadratic in the step size.
  std::vector<std::vector<double>> theta(K, std::vector<double>(V, 0.0));
  std::vector<double> bias(K, 0.0);
  std::vector<std::vector<double>> z(N, std::vector<double>(K, 0.0));

  double theta_sq = 0.0;
  double loss = data_loss(z, q) + options.lambda_l2 * theta_sq;

  std::vector<std::vector<double>> g_theta;
  std::vector<double> g_bias;
  std::vector<std::vector<double>> dz(N, std::vector<double>(K, 0.0));
  std::vector<std::vector<double>> z_try(N, std::vector<double>(K, 0.0));

  const double armijo = 1e-4;
  double step = 1.0;
  int iters = 0;
  bool converged = false;

  for (int it = 0; it < options.max_iters; ++it) {
    distill_grad(features, q, theta, bias, options.lambda_l2, g_theta, g_bias);

    double grad_sq = 0.0;
    for (int k = 0; k < K; ++k) {
      grad_sq += g_bias[k] * g_bias[k];
      for (int c = 0; c < V; ++c) grad_sq += g_theta[k][c] * g_theta[k][c];
    }
    if (grad_sq == 0.0) {
      converged = true;
      break;
    }

    // direction d = -grad; dz_jk = sum_c d_theta[k][c] x_jc + d_bias[k]
    for (std::size_t j = 0; j < N; ++j) {
      for (int k = 0; k < K; ++k) {
        double s = -g_bias[k];
        for (auto& [c, v] : features.rows[j]) s -= g_theta[k][c] * v;
        dz[j][k] = s;
      }
    }
    double theta_dot_d = 0.0, d_sq = 0.0;
    for (int k = 0; k < K; ++k)
      for (int c = 0; c < V; ++c) {
        theta_dot_d -= theta[k][c] * g_theta[k][c];
        d_sq += g_theta[k][c] * g_theta[k][c];
      }

    double s = std::min(step * 2.0, 1e8);
    double new_loss = 0.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t j = 0; j < N; ++j)
        for (int k = 0; k < K; ++k) z_try[j][k] = z[j][k] + s * dz[j][k];
      double pen = options.lambda_l2 * (theta_sq + 2.0 * s * theta_dot_d + s * s * d_sq);
      double cand = data_loss(z_try, q) + pen;
      if (cand <= loss - armijo * s * grad_sq) {
        new_loss = cand;
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    if (!accepted) break;  // cannot make progress at any step size

    for (int k = 0; k < K; ++k) {
      bias[k] -= s * g_bias[k];
      for (int c = 0; c < V; ++c) theta[k][c] -= s * g_theta[k][c];
    }
    std::swap(z, z_try);
    theta_sq = 0.0;  // recomputed fresh so the quadratic shortcut cannot drift
    for (int k = 0; k < K; ++k)
      for (int c = 0; c < V; ++c) theta_sq += theta[k][c] * theta[k][c];
    step = s;
    ++iters;

    double rel = (loss - new_loss) / std::max(1.0, std::fabs(loss));
    loss = new_loss;
    if (rel < options.rel_tol) {
      converged = true;
      break;
    }
  }

  if (info) {
    info->final_loss = loss;
    info->iters = iters;
    info->converged = converged;
  }

  StudentModel m;
  m.weights = std::move(theta);
  m.bias = std::move(bias);
  m.vocab = vocab;
  return m;
}

std::vector<double> student_predict(const StudentModel& m, const Document& doc) {
  std::vector<double> z = m.bias;
  for (auto& [c, v] : tfidf_row(doc, m.vocab))
    for (int k = 0; k < m.num_classes(); ++k) z[k] += m.weights[k][c] * v;
  softmax_inplace(z);
  return z;
}

std::vector<std::vector<double>> student_predict_matrix(const StudentModel& m,
                                                        const DocTermMatrix& features) {
  if (features.cols != static_cast<int>(m.weights.empty() ? 0 : m.weights[0].size()))
    throw std::invalid_argument("student_predict_matrix: feature width mismatch");
  std::vector<std::vector<double>> out;
  out.reserve(features.num_rows());
  for (const SparseRow& row : features.rows) {
    std::vector<double> z = m.bias;
    for (auto& [c, v] : row)
      for (int k = 0; k < m.num_classes(); ++k) z[k] += m.weights[k][c] * v;
    softmax_inplace(z);
    out.push_back(std::move(z));
  }
  return out;
}

TeacherMatrix update_teacher_log_odds(const TeacherMatrix& teacher, const Corpus& corpus,
                                      const Vocabulary& teacher_vocab,
                                      const std::vector<int>& covered_doc_ids,
                                      const std::vector<int>& hard_labels) {
  if (covered_doc_ids.size() != hard_labels.size())
    throw std::invalid_argument("update_teacher_log_odds: ids/labels size mismatch");
  const int K = teacher.num_classes;

  std::map<int, std::vector<int>> counts;  // column -> per-class presence counts
  for (const auto& [c, w] : teacher.columns) counts.emplace(c, std::vector<int>(K, 0));
  for (std::size_t i = 0; i < covered_doc_ids.size(); ++i) {
    const Document& doc = corpus.docs.at(covered_doc_ids[i]);
    for (int c : doc_seed_columns(teacher, doc, teacher_vocab))
      ++counts.at(c)[hard_labels[i]];
  }

  // Same seed columns, re-weighted: add-1-smoothed log-odds of class given
  // the seed's presence. A seed never seen keeps a constant column, which is
  // softmax-neutral but preserves coverage.
  TeacherMatrix out;
  out.num_classes = K;
  out.num_cols = teacher.num_cols;
  out.dropped_terms = teacher.dropped_terms;
  for (const auto& [c, n] : counts) {
    int total = 0;
    for (int k = 0; k < K; ++k) total += n[k];
    std::vector<double> col(K);
    for (int k = 0; k < K; ++k) {
      double p = (n[k] + 1.0) / (total + K);
      col[k] = std::log(p / (1.0 - p));
    }
    out.columns.emplace(c, std::move(col));
  }
  return out;
}

std::vector<int> seed_feature_columns(const TeacherMatrix& teacher,
                                      const Vocabulary& teacher_vocab,
                                      const Vocabulary& student_vocab) {
  std::unordered_set<std::string> seed_terms;
  for (const auto& [c, w] : teacher.columns) seed_terms.insert(teacher_vocab.terms.at(c));

  std::vector<int> cols;
  for (int c = 0; c < student_vocab.size(); ++c) {
    const std::string& term = student_vocab.terms[c];
    std::size_t start = 0;
    bool hit = false;
    while (!hit) {
      std::size_t sp = term.find(' ', start);
      std::size_t len = (sp == std::string::npos ? term.size() : sp) - start;
      if (seed_terms.count(term.substr(start, len))) hit = true;
      if (sp == std::string::npos) break;
      start = sp + 1;
    }
    if (hit) cols.push_back(c);
  }
  return cols;
}

DocTermMatrix zero_columns(const DocTermMatrix& m, const std::vector<int>& cols) {
  DocTermMatrix out;
  out.cols = m.cols;
  out.row_norm = m.row_norm;
  out.rows.resize(m.rows.size());
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    out.rows[i].reserve(m.rows[i].size());
    for (auto& [c, v] : m.rows[i])
      if (!std::binary_search(cols.begin(), cols.end(), c)) out.rows[i].emplace_back(c, v);
  }
  return out;
}

CoTrainResult cotrain(const TeacherMatrix& teacher, const Corpus& unlabeled,
                      const Vocabulary& teacher_vocab, const Vocabulary& student_vocab,
                      const DocTermMatrix& student_features, const CoTrainConfig& config) {
  if (config.rounds < 1) throw std::invalid_argument("cotrain: rounds must be >= 1");
  if (unlabeled.empty()) throw std::invalid_argument("cotrain: empty corpus");
  if (student_features.num_rows() != unlabeled.size())
    throw std::invalid_argument("cotrain: features do not align with the corpus");
  const int K = teacher.num_classes;
  if (K < 2) throw std::invalid_argument("cotrain: teacher has no classes");

  PseudoLabeledSet covered = label_covered(teacher, unlabeled, teacher_vocab,
                                           config.teacher_input);
  if (covered.empty())
    throw std::runtime_error(
        "cotrain: the teacher covers no documents; increase the seed budget or use a dictionary "
        "with better coverage");

  // Ablation: hide seed words (and n-grams touching them) from the student.
  DocTermMatrix stripped;
  const DocTermMatrix* features = &student_features;
  if (config.strip_seeds) {
    stripped = zero_columns(student_features,
                            seed_feature_columns(teacher, teacher_vocab, student_vocab));
    features = &stripped;
  }

  std::vector<int> covered_ids;
  covered_ids.reserve(covered.size());
  for (const PseudoLabeled& p : covered.items) covered_ids.push_back(p.doc_index);

  std::vector<int> teacher_hard(covered.size());
  for (std::size_t i = 0; i < covered.size(); ++i)
    teacher_hard[i] = argmax_tie_low(covered.items[i].q);

  Rng rounds_rng(config.seed);
  TeacherMatrix current_teacher = teacher;
  PseudoLabeledSet pool = covered;

  CoTrainResult result;
  StudentModel student;

  for (int round = 1; round <= config.rounds; ++round) {
    RoundReport rr;
    rr.pool_size = static_cast<int>(pool.size());

    bool empty_class = false;
    PseudoLabeledSet balanced =
        balance(pool, rounds_rng.fork(static_cast<uint64_t>(round)).seed(), K, &empty_class);
    if (balanced.empty())
      throw std::runtime_error("cotrain: balancing emptied the round-" + std::to_string(round) +
                               " training set (a class received no pseudo-labels)");
    rr.balanced_size = static_cast<int>(balanced.size());

    std::vector<int> row_ids;
    row_ids.reserve(balanced.size());
    for (const PseudoLabeled& p : balanced.items) row_ids.push_back(p.doc_index);

    StudentFitInfo fit;
    student = train_student(balanced, gather_rows(*features, row_ids), student_vocab, K,
                            config.student, &fit);
    rr.train_loss = fit.final_loss;
    rr.train_iters = fit.iters;

    std::vector<std::vector<double>> student_q = student_predict_matrix(student, *features);

    int disagree = 0;
    for (std::size_t i = 0; i < covered_ids.size(); ++i)
      if (argmax_tie_low(student_q[covered_ids[i]]) != teacher_hard[i]) ++disagree;
    rr.disagreement = static_cast<double>(disagree) / static_cast<double>(covered_ids.size());

    result.report.rounds.push_back(rr);

    if (round == config.rounds) break;
    if (config.early_stop && result.report.rounds.size() >= 2) {
      const auto& rs = result.report.rounds;
      if (rs[rs.size() - 1].disagreement >= rs[rs.size() - 2].disagreement) {
        result.report.early_stopped = true;
        break;
      }
    }

    if (config.update_teacher) {
      // Re-estimate seed quality from the student, then let the re-weighted
      // teacher relabel the covered documents. Uncovered documents stay out.
      std::vector<int> hard(covered_ids.size());
      for (std::size_t i = 0; i < covered_ids.size(); ++i)
        hard[i] = argmax_tie_low(student_q[covered_ids[i]]);
      current_teacher = update_teacher_log_odds(current_teacher, unlabeled, teacher_vocab,
                                                covered_ids, hard);
      pool = label_covered(current_teacher, unlabeled, teacher_vocab, config.teacher_input);
      for (std::size_t i = 0; i < covered.size(); ++i)
        teacher_hard[i] = argmax_tie_low(pool.items[i].q);
    } else {
      // The student relabels everything, covered or not.
      pool.items.clear();
      pool.items.reserve(unlabeled.size());
      for (int i = 0; i < static_cast<int>(unlabeled.size()); ++i) {
        PseudoLabeled p;
        p.id = unlabeled.docs[i].id;
        p.doc_index = i;
        p.q = student_q[i];
        p.labeler = Labeler::student;
        pool.items.push_back(std::move(p));
      }
    }
  }

  result.student = std::move(student);
  return result;
}

}  // namespace clts
