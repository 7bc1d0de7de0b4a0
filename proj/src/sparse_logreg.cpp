#include "clts/sparse_logreg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "clts/mathutil.hpp"

namespace clts {

double WeightMatrix::at(int k, int c) const {
  const SparseRow& r = rows.at(k);
  auto it = std::lower_bound(r.begin(), r.end(), c,
                             [](const std::pair<int, double>& e, int col) { return e.first < col; });
  return (it != r.end() && it->first == c) ? it->second : 0.0;
}

std::vector<double> WeightMatrix::dense_row(int k) const {
  std::vector<double> w(num_cols, 0.0);
  for (auto& [c, v] : rows.at(k)) w[c] = v;
  return w;
}

std::vector<double> WeightMatrix::column(int c) const {
  std::vector<double> col(num_classes);
  for (int k = 0; k < num_classes; ++k) col[k] = at(k, c);
  return col;
}

int WeightMatrix::positive_count(int k) const {
  int n = 0;
  for (auto& [c, v] : rows.at(k))
    if (v > 0.0) ++n;
  return n;
}

std::size_t WeightMatrix::nnz() const {
  std::size_t n = 0;
  for (const SparseRow& r : rows) n += r.size();
  return n;
}

double WeightMatrix::l1_norm() const {
  double s = 0.0;
  for (const SparseRow& r : rows)
    for (auto& [c, v] : r) s += std::fabs(v);
  return s;
}

WeightMatrix WeightMatrix::from_dense(const std::vector<std::vector<double>>& w,
                                      std::vector<double> bias, int num_cols, double lambda) {
  WeightMatrix m;
  m.num_classes = static_cast<int>(w.size());
  m.num_cols = num_cols;
  m.lambda = lambda;
  m.bias = std::move(bias);
  m.rows.resize(m.num_classes);
  for (int k = 0; k < m.num_classes; ++k)
    for (int c = 0; c < num_cols; ++c)
      if (w[k][c] != 0.0) m.rows[k].emplace_back(c, w[k][c]);
  return m;
}

namespace {

// d/dm log(1 + exp(-y m)) = -y * sigmoid(-y m), computed without overflow.
double dloss_dmargin(double y, double m) {
  double t = y * m;
  if (t > 0) {
    double e = std::exp(-t);
    return -y * (e / (1.0 + e));
  }
  return -y / (1.0 + std::exp(t));
}

double loss_term(double y, double m) {
  double t = y * m;
  if (t < -36.0) return -t;  // exp(-t) would overflow; log1p(exp(-t)) ~ -t
  return std::log1p(std::exp(-t));
}

struct ColMajor {
  std::vector<std::vector<std::pair<int, double>>> cols;  // (row, value)
  std::vector<double> col_sq;                              // per-column sum of x^2
};

ColMajor to_col_major(const DocTermMatrix& X) {
  ColMajor cm;
  cm.cols.resize(X.cols);
  cm.col_sq.assign(X.cols, 0.0);
  for (int i = 0; i < static_cast<int>(X.rows.size()); ++i) {
    for (auto& [c, v] : X.rows[i]) {
      cm.cols[c].emplace_back(i, v);
      cm.col_sq[c] += v * v;
    }
  }
  return cm;
}

double soft_threshold(double u, double t) {
  if (u > t) return u - t;
  if (u < -t) return u + t;
  return 0.0;
}

// Binary subproblem. Coordinates are visited cyclically in column order, each
// taking a majorize-minimize step: the logistic loss is 1/4-smooth along any
// coordinate, so the quadratic with curvature H_j = 0.25 * sum_i x_ij^2 is an
// upper bound and the soft-thresholded minimizer of
//   f(w) + g_j d + H_j d^2 / 2 + lambda |w_j + d|
// never increases the true objective. The bias takes the same step without the
// threshold. Margins are rebuilt from scratch at every epoch end so incremental
// updates cannot drift.
void fit_binary(const DocTermMatrix& X, const ColMajor& cm, const std::vector<int>& y_pm,
                double lambda, const FitOptions& opt, std::vector<double>& w, double& b,
                ClassFitInfo* info) {
  const int n = static_cast<int>(X.rows.size());
  const int cols = X.cols;

  std::vector<double> margin(n, 0.0);
  auto rebuild_margins = [&] {
    for (int i = 0; i < n; ++i) {
      double m = b;
      for (auto& [c, v] : X.rows[i]) m += w[c] * v;
      margin[i] = m;
    }
  };
  rebuild_margins();

  const double bias_curv = 0.25 * n;

  for (int epoch = 0; epoch < opt.max_epochs; ++epoch) {
    double max_update = 0.0;

    if (n > 0) {
      double gb = 0.0;
      for (int i = 0; i < n; ++i) gb += dloss_dmargin(y_pm[i], margin[i]);
      double db = -gb / bias_curv;
      b += db;
      for (int i = 0; i < n; ++i) margin[i] += db;
      max_update = std::fabs(db);
    }

    for (int c = 0; c < cols; ++c) {
      const auto& col = cm.cols[c];
      if (col.empty()) {
        // No data touches this coordinate; only the penalty remains, so the
        // optimum is 0 (relevant when a warm start carried a value in).
        if (w[c] != 0.0 && lambda > 0.0) {
          max_update = std::max(max_update, std::fabs(w[c]));
          w[c] = 0.0;
        }
        continue;
      }
      double g = 0.0;
      for (auto& [i, v] : col) g += v * dloss_dmargin(y_pm[i], margin[i]);
      double curv = 0.25 * cm.col_sq[c];
      double w_new = soft_threshold(w[c] - g / curv, lambda / curv);
      double d = w_new - w[c];
      if (d != 0.0) {
        w[c] = w_new;
        for (auto& [i, v] : col) margin[i] += d * v;
        max_update = std::max(max_update, std::fabs(d));
      }
    }

    rebuild_margins();

    if (info) {
      ++info->epochs;
      if (opt.record_objective) {
        double obj = 0.0;
        for (int i = 0; i < n; ++i) obj += loss_term(y_pm[i], margin[i]);
        for (int c = 0; c < cols; ++c) obj += lambda * std::fabs(w[c]);
        info->objective.push_back(obj);
      }
    }

    if (max_update < opt.tol) {
      if (info) info->converged = true;
      return;
    }
  }
}

}  // namespace

WeightMatrix fit_l1_ovr(const DocTermMatrix& X, const std::vector<int>& y, int num_classes,
                        double lambda, const WeightMatrix* warm_start, const FitOptions& options,
                        std::vector<ClassFitInfo>* info) {
  if (lambda < 0.0) throw std::invalid_argument("fit_l1_ovr: lambda must be >= 0");
  if (num_classes < 2) throw std::invalid_argument("fit_l1_ovr: need at least 2 classes");
  if (X.rows.size() != y.size()) throw std::invalid_argument("fit_l1_ovr: X/y size mismatch");
  if (X.rows.empty()) throw std::invalid_argument("fit_l1_ovr: empty training set");

  std::unordered_set<int> distinct;
  for (int v : y) {
    if (v < 0 || v >= num_classes)
      throw std::invalid_argument("fit_l1_ovr: label out of range");
    distinct.insert(v);
  }
  if (distinct.size() < 2)
    throw std::invalid_argument("fit_l1_ovr: fewer than 2 distinct labels");

  if (warm_start && (warm_start->num_classes != num_classes || warm_start->num_cols != X.cols))
    throw std::invalid_argument("fit_l1_ovr: warm start shape mismatch");

  ColMajor cm = to_col_major(X);
  if (info) {
    info->clear();
    info->resize(num_classes);
  }

  std::vector<std::vector<double>> w(num_classes);
  std::vector<double> bias(num_classes, 0.0);
  std::vector<int> y_pm(y.size());

  for (int k = 0; k < num_classes; ++k) {
    w[k] = warm_start ? warm_start->dense_row(k) : std::vector<double>(X.cols, 0.0);
    if (warm_start) bias[k] = warm_start->bias[k];
    for (std::size_t i = 0; i < y.size(); ++i) y_pm[i] = y[i] == k ? 1 : -1;
    fit_binary(X, cm, y_pm, lambda, options, w[k], bias[k], info ? &(*info)[k] : nullptr);
  }

  return WeightMatrix::from_dense(w, std::move(bias), X.cols, lambda);
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid(50);
  for (int i = 0; i < 50; ++i) grid[i] = std::pow(10.0, -1.0 + 8.0 * i / 49.0);
  return grid;
}

RegPath regularization_path(const DocTermMatrix& X, const std::vector<int>& y, int num_classes,
                            std::vector<double> grid, const FitOptions& options) {
  if (grid.empty()) throw std::invalid_argument("regularization_path: empty grid");
  for (double l : grid)
    if (l < 0.0) throw std::invalid_argument("regularization_path: negative lambda");
  std::sort(grid.begin(), grid.end(), std::greater<>());  // fit sparse to dense
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  RegPath path;
  path.points.reserve(grid.size());
  const WeightMatrix* warm = nullptr;
  for (double lambda : grid) {
    WeightMatrix w = fit_l1_ovr(X, y, num_classes, lambda, warm, options);
    RegPathPoint pt;
    pt.lambda = lambda;
    pt.positive_nnz = 0;
    for (int k = 0; k < num_classes; ++k) pt.positive_nnz += w.positive_count(k);
    pt.weights = std::move(w);
    path.points.push_back(std::move(pt));
    warm = &path.points.back().weights;
  }
  return path;
}

LambdaSelection select_lambda(const RegPath& path, int budget, int num_classes) {
  if (path.points.empty()) throw std::invalid_argument("select_lambda: empty path");
  if (num_classes < 2) throw std::invalid_argument("select_lambda: need at least 2 classes");
  if (budget < num_classes)
    throw std::invalid_argument("select_lambda: budget must be >= the number of classes");

  const int per_class = budget / num_classes;
  auto admits = [&](const RegPathPoint& pt) {
    for (int k = 0; k < num_classes; ++k)
      if (pt.weights.positive_count(k) < per_class) return false;
    return true;
  };

  const RegPathPoint* best = nullptr;
  const RegPathPoint* smallest = &path.points.front();
  for (const RegPathPoint& pt : path.points) {
    if (pt.lambda < smallest->lambda) smallest = &pt;
    if (admits(pt) && (!best || pt.lambda > best->lambda)) best = &pt;
  }

  LambdaSelection sel;
  sel.per_class = per_class;
  if (best) {
    sel.lambda = best->lambda;
    sel.weights = best->weights;
  } else {
    sel.lambda = smallest->lambda;
    sel.weights = smallest->weights;
    sel.fallback = true;
  }
  return sel;
}

std::vector<double> predict_proba_row(const WeightMatrix& w, const SparseRow& x) {
  std::vector<double> z = w.bias;
  for (int k = 0; k < w.num_classes; ++k) {
    const SparseRow& row = w.rows[k];
    // merge join over two column-ascending lists
    auto a = row.begin();
    for (auto& [c, v] : x) {
      while (a != row.end() && a->first < c) ++a;
      if (a == row.end()) break;
      if (a->first == c) z[k] += a->second * v;
    }
  }
  softmax_inplace(z);
  return z;
}

std::vector<std::vector<double>> predict_proba(const WeightMatrix& w, const DocTermMatrix& X) {
  std::vector<std::vector<double>> out;
  out.reserve(X.rows.size());
  for (const SparseRow& r : X.rows) out.push_back(predict_proba_row(w, r));
  return out;
}

double binary_smooth_loss(const DocTermMatrix& X, const std::vector<int>& y_pm,
                          const std::vector<double>& w, double bias) {
  double loss = 0.0;
  for (std::size_t i = 0; i < X.rows.size(); ++i) {
    double m = bias;
    for (auto& [c, v] : X.rows[i]) m += w[c] * v;
    loss += loss_term(y_pm[i], m);
  }
  return loss;
}

void binary_smooth_grad(const DocTermMatrix& X, const std::vector<int>& y_pm,
                        const std::vector<double>& w, double bias, std::vector<double>& grad_w,
                        double& grad_bias) {
  grad_w.assign(X.cols, 0.0);
  grad_bias = 0.0;
  for (std::size_t i = 0; i < X.rows.size(); ++i) {
    double m = bias;
    for (auto& [c, v] : X.rows[i]) m += w[c] * v;
    double g = dloss_dmargin(y_pm[i], m);
    grad_bias += g;
    for (auto& [c, v] : X.rows[i]) grad_w[c] += g * v;
  }
}

double l1_objective(const DocTermMatrix& X, const std::vector<int>& y_pm,
                    const std::vector<double>& w, double bias, double lambda) {
  double obj = binary_smooth_loss(X, y_pm, w, bias);
  for (double v : w) obj += lambda * std::fabs(v);
  return obj;
}

}  // namespace clts
