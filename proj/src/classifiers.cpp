#include "spdset/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spdset/spd_kernels.hpp"

namespace spdset {

NeighborMatch nearest_neighbor(std::span<const LabeledSample> train, const SpdMatrix& query,
                               MetricKind metric) {
  if (train.empty()) throw Error(ErrorCode::InvalidInput, "empty training set");
  NeighborMatch best{train[0].label, 0, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < train.size(); ++i) {
    const double d = distance(metric, train[i].rep, query);
    if (d < best.distance) best = {train[i].label, i, d};
  }
  return best;
}

int nn_classify(std::span<const LabeledSample> train, const SpdMatrix& query, MetricKind metric) {
  return nearest_neighbor(train, query, metric).label;
}

double BinarySvm::decision(const Vector& kernel_column) const {
  return alpha.cwiseProduct(y).dot(kernel_column) + bias;
}

// Follows the WSS2 scheme of Fan, Chen and Lin: i maximizes −y_t∇_t over I_up,
// j minimizes the second-order gain over I_low among violating pairs.
BinarySvm solve_binary_svm(const Matrix& gram, const Vector& y, double c, const SvmOptions& opts) {
  const Index n = gram.rows();
  if (gram.cols() != n || y.size() != n) throw Error(ErrorCode::DimMismatch, "Gram and labels disagree");
  if (!(c > 0.0)) throw Error(ErrorCode::InvalidInput, "SVM C must be > 0");
  constexpr double kTau = 1e-12;

  BinarySvm out;
  out.y = y;
  out.alpha = Vector::Zero(n);
  Vector grad = Vector::Constant(n, -1.0);  // ∇ = Qα − e, Q_ij = y_i y_j K_ij
  Vector& alpha = out.alpha;

  auto in_up = [&](Index t) { return (y(t) > 0 && alpha(t) < c) || (y(t) < 0 && alpha(t) > 0); };
  auto in_low = [&](Index t) { return (y(t) > 0 && alpha(t) > 0) || (y(t) < 0 && alpha(t) < c); };

  long iter = 0;
  for (;; ++iter) {
    double g_max = -std::numeric_limits<double>::infinity();
    Index i = -1;
    for (Index t = 0; t < n; ++t) {
      if (in_up(t) && -y(t) * grad(t) > g_max) {
        g_max = -y(t) * grad(t);
        i = t;
      }
    }
    double g_min = std::numeric_limits<double>::infinity();
    double best_obj = std::numeric_limits<double>::infinity();
    Index j = -1;
    for (Index t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      const double v = -y(t) * grad(t);
      g_min = std::min(g_min, v);
      if (i < 0) continue;
      const double b = g_max - v;
      if (b > 0.0) {
        double a = gram(i, i) + gram(t, t) - 2.0 * gram(i, t);
        if (a <= 0.0) a = kTau;
        const double obj = -(b * b) / a;
        if (obj < best_obj) {
          best_obj = obj;
          j = t;
        }
      }
    }
    out.kkt_gap = (i < 0 || !std::isfinite(g_min)) ? 0.0 : g_max - g_min;
    if (i < 0 || j < 0 || out.kkt_gap < opts.tolerance) break;
    if (iter >= opts.max_iterations) {
      throw Error(ErrorCode::ConvergenceFailure,
                  "SVM did not converge in " + std::to_string(iter) +
                      " iterations, KKT gap " + std::to_string(out.kkt_gap));
    }

    const double old_ai = alpha(i);
    const double old_aj = alpha(j);
    const double qii = gram(i, i);
    const double qjj = gram(j, j);
    const double qij = y(i) * y(j) * gram(i, j);
    if (y(i) != y(j)) {
      double quad = qii + qjj + 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad(i) - grad(j)) / quad;
      const double diff = alpha(i) - alpha(j);
      alpha(i) += delta;
      alpha(j) += delta;
      if (diff > 0) {
        if (alpha(j) < 0) { alpha(j) = 0; alpha(i) = diff; }
      } else {
        if (alpha(i) < 0) { alpha(i) = 0; alpha(j) = -diff; }
      }
      if (diff > 0) {
        if (alpha(i) > c) { alpha(i) = c; alpha(j) = c - diff; }
      } else {
        if (alpha(j) > c) { alpha(j) = c; alpha(i) = c + diff; }
      }
    } else {
      double quad = qii + qjj - 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad(i) - grad(j)) / quad;
      const double sum = alpha(i) + alpha(j);
      alpha(i) -= delta;
      alpha(j) += delta;
      if (sum > c) {
        if (alpha(i) > c) { alpha(i) = c; alpha(j) = sum - c; }
      } else {
        if (alpha(j) < 0) { alpha(j) = 0; alpha(i) = sum; }
      }
      if (sum > c) {
        if (alpha(j) > c) { alpha(j) = c; alpha(i) = sum - c; }
      } else {
        if (alpha(i) < 0) { alpha(i) = 0; alpha(j) = sum; }
      }
    }

    const double dai = alpha(i) - old_ai;
    const double daj = alpha(j) - old_aj;
    for (Index t = 0; t < n; ++t) {
      grad(t) += y(t) * (y(i) * gram(t, i) * dai + y(j) * gram(t, j) * daj);
    }
  }
  out.iterations = iter;

  // Bias from free vectors; midpoint of the feasible interval if none are free.
  double sum_free = 0.0;
  int free_count = 0;
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  for (Index t = 0; t < n; ++t) {
    const double yg = y(t) * grad(t);
    if (alpha(t) >= c) {
      if (y(t) < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha(t) <= 0) {
      if (y(t) > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++free_count;
      sum_free += yg;
    }
  }
  const double rho = free_count > 0 ? sum_free / free_count : (ub + lb) / 2.0;
  out.bias = std::isfinite(rho) ? -rho : 0.0;
  return out;
}

Vector SvmModel::decision_values(const SpdMatrix& query) const {
  if (train_logs.empty()) throw Error(ErrorCode::InvalidInput, "SVM model is not trained");
  if (query.dim() != train_logs.front().rows()) {
    throw Error(ErrorCode::DimMismatch, "query dim " + std::to_string(query.dim()) +
                                            " differs from training dim " +
                                            std::to_string(train_logs.front().rows()));
  }
  const Matrix log_q = spd_log(query).matrix();
  Vector k(static_cast<Index>(train_logs.size()));
  for (std::size_t i = 0; i < train_logs.size(); ++i) {
    k(static_cast<Index>(i)) = kernel_from_logs(train_logs[i], log_q, KernelSpec::linear());
  }
  Vector out(static_cast<Index>(machines.size()));
  for (std::size_t m = 0; m < machines.size(); ++m) out(static_cast<Index>(m)) = machines[m].decision(k);
  return out;
}

SvmModel svm_train(std::span<const LabeledSample> train, double c, const SvmOptions& opts) {
  if (train.empty()) throw Error(ErrorCode::InvalidInput, "empty training set");
  SvmModel model;
  model.c = c;
  for (const auto& s : train) model.classes.push_back(s.label);
  std::sort(model.classes.begin(), model.classes.end());
  model.classes.erase(std::unique(model.classes.begin(), model.classes.end()), model.classes.end());
  if (model.classes.size() < 2) throw Error(ErrorCode::InvalidInput, "SVM needs at least two classes");

  model.train_logs.reserve(train.size());
  for (const auto& s : train) {
    if (s.rep.dim() != train[0].rep.dim()) {
      throw Error(ErrorCode::DimMismatch, "training representations differ in size");
    }
    model.train_logs.push_back(spd_log(s.rep).matrix());
  }
  const GramMatrix k = gram_from_logs(model.train_logs, KernelSpec::linear());
  if (!k.is_psd(opts.psd_tolerance)) {
    throw Error(ErrorCode::KernelNotPSD, "training Gram has eigenvalue " +
                                             std::to_string(k.min_eigenvalue()));
  }

  const Index n = static_cast<Index>(train.size());
  for (int cls : model.classes) {
    Vector y(n);
    for (Index i = 0; i < n; ++i) y(i) = train[static_cast<std::size_t>(i)].label == cls ? 1.0 : -1.0;
    model.machines.push_back(solve_binary_svm(k.matrix(), y, c, opts));
  }
  return model;
}

int svm_predict(const SvmModel& model, const SpdMatrix& query) {
  const Vector values = model.decision_values(query);
  Index best = 0;
  for (Index m = 1; m < values.size(); ++m) {
    const double tie_band = 1e-12 * (1.0 + std::abs(values(best)));
    if (values(m) > values(best) + tie_band) best = m;
  }
  return model.classes[static_cast<std::size_t>(best)];
}

}  // namespace spdset
