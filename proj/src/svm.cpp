#include "scatfp/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <numeric>
#include <string>

#include "scatfp/binary_io.hpp"
#include "scatfp/errors.hpp"

namespace scatfp {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

Kernel Kernel::linear() { return Kernel{}; }

Kernel Kernel::custom(Function fn) {
  if (!fn) throw ArgumentError("custom kernel function is empty");
  Kernel k;
  k.kind_ = KernelKind::kCustom;
  k.fn_ = std::move(fn);
  return k;
}

double Kernel::operator()(std::span<const double> a, std::span<const double> b) const {
  if (a.size() != b.size()) throw ArgumentError("kernel arguments differ in length");
  return kind_ == KernelKind::kLinear ? dot(a, b) : fn_(a, b);
}

namespace {

// Rows of the Gram matrix K(x_i, x_t), optionally LRU-cached. A returned row
// stays valid until two further rows have been requested.
class KernelRows {
 public:
  KernelRows(std::span<const LabeledPoint> data, const Kernel& kernel, std::size_t capacity)
      : data_(data), kernel_(kernel), capacity_(capacity == 0 ? 0 : std::max<std::size_t>(capacity, 2)),
        rows_(capacity_ == 0 ? 0 : data.size()), where_(rows_.size()), diag_(data.size()) {
    for (std::size_t i = 0; i < data.size(); ++i) diag_[i] = kernel_(data[i].x, data[i].x);
  }

  double diag(std::size_t i) const { return diag_[i]; }

  const std::vector<double>& row(std::size_t i) {
    if (capacity_ == 0) {
      auto& buf = scratch_[flip_ ^= 1];
      compute(i, buf);
      return buf;
    }
    if (!rows_[i].empty()) {
      lru_.splice(lru_.begin(), lru_, where_[i]);
      return rows_[i];
    }
    if (lru_.size() == capacity_) {
      const std::size_t victim = lru_.back();
      lru_.pop_back();
      std::vector<double>().swap(rows_[victim]);
    }
    compute(i, rows_[i]);
    lru_.push_front(i);
    where_[i] = lru_.begin();
    return rows_[i];
  }

 private:
  void compute(std::size_t i, std::vector<double>& out) const {
    out.resize(data_.size());
    for (std::size_t t = 0; t < data_.size(); ++t) out[t] = kernel_(data_[i].x, data_[t].x);
  }

  std::span<const LabeledPoint> data_;
  const Kernel& kernel_;
  std::size_t capacity_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::list<std::size_t>::iterator> where_;
  std::list<std::size_t> lru_;
  std::vector<double> diag_;
  std::vector<double> scratch_[2];
  int flip_ = 0;
};

void validate(std::span<const LabeledPoint> data, double C) {
  if (!(C > 0.0) || !std::isfinite(C)) throw ArgumentError("SVM penalty C must be positive and finite");
  if (data.empty()) throw ArgumentError("SVM training set is empty");
  const std::size_t d = data.front().x.size();
  for (const auto& p : data) {
    if (p.x.size() != d) throw ArgumentError("SVM training vectors differ in length");
  }
}

DualSolution smo(std::span<const LabeledPoint> data, std::span<const int> y, KernelRows& K, double C,
                 const SvmOptions& options) {
  const std::size_t n = data.size();
  bool has_pos = false;
  bool has_neg = false;
  for (int v : y) {
    if (v == 1) has_pos = true;
    else if (v == -1) has_neg = true;
    else throw ArgumentError("binary SVM labels must be +1 or -1");
  }
  if (!has_pos || !has_neg) throw ArgumentError("SVM training data must contain both classes");

  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of 1/2 a^T Q a - e^T a
  constexpr double kTau = 1e-12;

  auto in_up = [&](std::size_t t) { return y[t] == 1 ? alpha[t] < C : alpha[t] > 0.0; };
  auto in_low = [&](std::size_t t) { return y[t] == 1 ? alpha[t] > 0.0 : alpha[t] < C; };

  DualSolution sol;
  double violation = std::numeric_limits<double>::infinity();
  for (std::int64_t iter = 0;; ++iter) {
    std::size_t i = n;
    std::size_t j = n;
    double g_max = -std::numeric_limits<double>::infinity();
    double g_min = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      if (in_up(t) && v > g_max) {
        g_max = v;
        i = t;
      }
      if (in_low(t) && v < g_min) {
        g_min = v;
        j = t;
      }
    }
    violation = g_max - g_min;
    if (i == n || j == n || violation <= options.tolerance) {
      sol.iterations = iter;
      break;
    }
    if (iter >= options.max_iterations) {
      throw TrainingError("SVM did not converge after " + std::to_string(iter) +
                              " iterations; maximal KKT violation " + std::to_string(violation),
                          violation);
    }

    const std::vector<double>& ki = K.row(i);
    const std::vector<double>& kj = K.row(j);
    const double old_i = alpha[i];
    const double old_j = alpha[j];
    double quad = K.diag(i) + K.diag(j) - 2.0 * ki[j];
    if (quad <= 0.0) quad = kTau;

    if (y[i] != y[j]) {
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }

    // Q_ti = y_t y_i K_ti
    const double di = (alpha[i] - old_i) * y[i];
    const double dj = (alpha[j] - old_j) * y[j];
    for (std::size_t t = 0; t < n; ++t) grad[t] += y[t] * (ki[t] * di + kj[t] * dj);
  }
  sol.max_violation = violation;

  // Bias: average over free vectors, else midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  int free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= C) {
      if (y[t] == -1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0.0) {
      if (y[t] == 1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++free_count;
      free_sum += yg;
    }
  }
  const double rho = free_count > 0 ? free_sum / free_count : (ub + lb) / 2.0;
  sol.bias = -rho;

  double obj = 0.0;
  for (std::size_t t = 0; t < n; ++t) obj += alpha[t] * (1.0 - grad[t]);
  sol.objective = obj / 2.0;
  sol.alpha = std::move(alpha);
  return sol;
}

BinarySvmModel to_model(std::span<const LabeledPoint> data, std::span<const int> y, const DualSolution& sol,
                        const Kernel& kernel, double C) {
  std::vector<std::vector<double>> svs;
  std::vector<double> coefs;
  for (std::size_t t = 0; t < data.size(); ++t) {
    if (sol.alpha[t] > 0.0) {
      svs.push_back(data[t].x);
      coefs.push_back(sol.alpha[t] * y[t]);
    }
  }
  return BinarySvmModel(std::move(svs), std::move(coefs), sol.bias, kernel, C,
                        static_cast<int>(data.front().x.size()));
}

std::vector<int> signs_of(std::span<const LabeledPoint> data) {
  std::vector<int> y;
  y.reserve(data.size());
  for (const auto& p : data) y.push_back(p.label);
  return y;
}

}  // namespace

DualSolution solve_dual(std::span<const LabeledPoint> data, const Kernel& kernel, double C,
                        const SvmOptions& options) {
  validate(data, C);
  KernelRows rows(data, kernel, options.cache_rows);
  return smo(data, signs_of(data), rows, C, options);
}

BinarySvmModel train_binary(std::span<const LabeledPoint> data, const Kernel& kernel, double C,
                            const SvmOptions& options) {
  validate(data, C);
  const auto y = signs_of(data);
  KernelRows rows(data, kernel, options.cache_rows);
  return to_model(data, y, smo(data, y, rows, C, options), kernel, C);
}

BinarySvmModel::BinarySvmModel(std::vector<std::vector<double>> support_vectors,
                               std::vector<double> dual_coefs, double bias, Kernel kernel, double C,
                               int dimension)
    : support_vectors_(std::move(support_vectors)), dual_coefs_(std::move(dual_coefs)), bias_(bias),
      kernel_(std::move(kernel)), C_(C), dimension_(dimension) {
  if (support_vectors_.size() != dual_coefs_.size())
    throw ArgumentError("support vector and coefficient counts differ");
  for (const auto& sv : support_vectors_) {
    if (static_cast<int>(sv.size()) != dimension_) throw ArgumentError("support vector length mismatch");
  }
  if (kernel_.kind() == KernelKind::kLinear) {
    weights_.assign(dimension_, 0.0);
    for (std::size_t s = 0; s < support_vectors_.size(); ++s) {
      for (int k = 0; k < dimension_; ++k) weights_[k] += dual_coefs_[s] * support_vectors_[s][k];
    }
  }
}

double BinarySvmModel::decision_value(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dimension_)
    throw ArgumentError("input length " + std::to_string(x.size()) + " does not match SVM dimension " +
                        std::to_string(dimension_));
  if (!weights_.empty()) return dot(weights_, x) + bias_;
  double s = bias_;
  for (std::size_t i = 0; i < support_vectors_.size(); ++i) s += dual_coefs_[i] * kernel_(x, support_vectors_[i]);
  return s;
}

MulticlassSvmModel::MulticlassSvmModel(std::vector<int> classes, std::vector<BinarySvmModel> models)
    : classes_(std::move(classes)), models_(std::move(models)) {
  if (classes_.size() < 2 || classes_.size() != models_.size())
    throw ArgumentError("multiclass model needs one binary model per class and at least two classes");
  if (!std::is_sorted(classes_.begin(), classes_.end()) ||
      std::adjacent_find(classes_.begin(), classes_.end()) != classes_.end())
    throw ArgumentError("multiclass labels must be strictly ascending");
}

std::vector<double> MulticlassSvmModel::decision_values(std::span<const double> x) const {
  std::vector<double> out;
  out.reserve(models_.size());
  for (const auto& m : models_) out.push_back(m.decision_value(x));
  return out;
}

int MulticlassSvmModel::predict(std::span<const double> x) const {
  std::size_t best = 0;
  double best_value = models_[0].decision_value(x);
  for (std::size_t c = 1; c < models_.size(); ++c) {
    const double v = models_[c].decision_value(x);
    if (v > best_value) {
      best_value = v;
      best = c;
    }
  }
  return classes_[best];
}

MulticlassSvmModel train_multiclass(std::span<const LabeledPoint> data, const Kernel& kernel, double C,
                                    const SvmOptions& options) {
  validate(data, C);
  std::vector<int> classes;
  for (const auto& p : data) classes.push_back(p.label);
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  if (classes.size() < 2) throw ArgumentError("multiclass SVM needs at least two classes");

  // The Gram matrix does not depend on the labels, so one cache serves every class.
  KernelRows rows(data, kernel, options.cache_rows);
  std::vector<BinarySvmModel> models;
  models.reserve(classes.size());
  std::vector<int> y(data.size());
  for (int c : classes) {
    for (std::size_t t = 0; t < data.size(); ++t) y[t] = data[t].label == c ? 1 : -1;
    models.push_back(to_model(data, y, smo(data, y, rows, C, options), kernel, C));
  }
  return MulticlassSvmModel(std::move(classes), std::move(models));
}

void save_svm(const std::filesystem::path& path, const MulticlassSvmModel& model) {
  const auto& classes = model.classes();
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (classes[c] != static_cast<int>(c)) throw ArgumentError("SVM1 files require class labels 0..M-1");
  }
  const auto& first = model.models().front();
  if (first.kernel().kind() != KernelKind::kLinear)
    throw ArgumentError("only linear-kernel SVM models can be saved");

  binio::Writer w(path);
  w.magic("SVM1");
  w.u32(static_cast<std::uint32_t>(classes.size()));
  w.u32(static_cast<std::uint32_t>(model.dimension()));
  w.u32(static_cast<std::uint32_t>(KernelKind::kLinear));
  w.f64(first.C());
  for (const auto& m : model.models()) {
    w.u32(static_cast<std::uint32_t>(m.support_vectors().size()));
    w.f64(m.bias());
    w.f64s(m.dual_coefs());
    for (const auto& sv : m.support_vectors()) w.f64s(sv);
  }
  w.close();
}

MulticlassSvmModel load_svm(const std::filesystem::path& path) {
  binio::Reader r(path);
  r.expect_magic("SVM1");
  const auto classes = static_cast<int>(r.u32());
  const auto d = static_cast<int>(r.u32());
  const auto kind = r.u32();
  const double C = r.f64();
  if (kind != static_cast<std::uint32_t>(KernelKind::kLinear))
    throw ValidationError(path.string() + ": unsupported kernel kind " + std::to_string(kind));
  if (classes < 2 || d < 1) throw ValidationError(path.string() + ": inconsistent SVM header");

  std::vector<int> labels(classes);
  std::iota(labels.begin(), labels.end(), 0);
  std::vector<BinarySvmModel> models;
  for (int c = 0; c < classes; ++c) {
    const std::uint32_t n = r.u32();
    const double bias = r.f64();
    std::vector<double> coefs(n);
    r.f64s(coefs);
    std::vector<std::vector<double>> svs(n, std::vector<double>(d));
    for (auto& sv : svs) r.f64s(sv);
    models.emplace_back(std::move(svs), std::move(coefs), bias, Kernel::linear(), C, d);
  }
  return MulticlassSvmModel(std::move(labels), std::move(models));
}

}  // namespace scatfp
