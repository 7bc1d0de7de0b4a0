#pragma once

#include <vector>

#include "clts/vectorizer.hpp"

namespace clts {

// One row of coefficients per class, zeros omitted. Columns index into the
// vocabulary the matrix was fitted against.
struct WeightMatrix {
  int num_classes = 0;
  int num_cols = 0;
  double lambda = 0.0;
  std::vector<double> bias;     // one per class, unpenalized
  std::vector<SparseRow> rows;  // per class, column-ascending

  double at(int k, int c) const;
  std::vector<double> dense_row(int k) const;
  std::vector<double> column(int c) const;  // one value per class
  int positive_count(int k) const;          // entries strictly > 0
  std::size_t nnz() const;
  double l1_norm() const;  // sum of |w| over all classes, bias excluded
  bool operator==(const WeightMatrix&) const = default;

  static WeightMatrix from_dense(const std::vector<std::vector<double>>& w,
                                 std::vector<double> bias, int num_cols, double lambda);
};

struct FitOptions {
  double tol = 1e-6;  // converged when the largest coordinate update is below this
  int max_epochs = 1000;
  bool record_objective = true;
};

struct ClassFitInfo {
  int epochs = 0;
  bool converged = false;
  std::vector<double> objective;  // regularized objective after each epoch
};

// L1-regularized one-vs-rest logistic regression, objective per class
//   sum_i log(1 + exp(-y_i (w.x_i + b))) + lambda * ||w||_1
// minimized by cyclic coordinate descent with soft-thresholding (see the
// implementation notes in src/sparse_logreg.cpp). Deterministic: coordinates
// are visited in vocabulary order. Errors: lambda < 0, X/y size mismatch,
// labels outside [0, num_classes), or fewer than two distinct labels.
WeightMatrix fit_l1_ovr(const DocTermMatrix& X, const std::vector<int>& y, int num_classes,
                        double lambda, const WeightMatrix* warm_start = nullptr,
                        const FitOptions& options = {}, std::vector<ClassFitInfo>* info = nullptr);

struct RegPathPoint {
  double lambda = 0;
  WeightMatrix weights;
  int positive_nnz = 0;  // entries with W[k][c] > 0, summed over classes
};

// Points in fit order: descending lambda, each fit warm-started from the
// sparser neighbor.
struct RegPath {
  std::vector<RegPathPoint> points;
};

// 50 points from 1e-1 to 1e7, evenly spaced in log10, ascending.
std::vector<double> default_lambda_grid();

RegPath regularization_path(const DocTermMatrix& X, const std::vector<int>& y, int num_classes,
                            std::vector<double> grid, const FitOptions& options = {});

struct LambdaSelection {
  double lambda = 0;
  WeightMatrix weights;
  bool fallback = false;  // no grid point admitted the budget; smallest lambda used
  int per_class = 0;      // floor(budget / num_classes)
};

// Largest grid lambda whose fit has at least floor(B/K) strictly positive
// coefficients in every class. budget < num_classes is an error.
LambdaSelection select_lambda(const RegPath& path, int budget, int num_classes);

// softmax over per-class margins; rows sum to 1.
std::vector<double> predict_proba_row(const WeightMatrix& w, const SparseRow& x);
std::vector<std::vector<double>> predict_proba(const WeightMatrix& w, const DocTermMatrix& X);

// Smooth (logistic) part of the binary objective and its gradient, labels in
// {-1, +1}. Exposed so the gradient can be checked against finite differences.
double binary_smooth_loss(const DocTermMatrix& X, const std::vector<int>& y_pm,
                          const std::vector<double>& w, double bias);
void binary_smooth_grad(const DocTermMatrix& X, const std::vector<int>& y_pm,
                        const std::vector<double>& w, double bias, std::vector<double>& grad_w,
                        double& grad_bias);
double l1_objective(const DocTermMatrix& X, const std::vector<int>& y_pm,
                    const std::vector<double>& w, double bias, double lambda);

}  // namespace clts
