#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

namespace scatfp {

struct LabeledPoint {
  std::vector<double> x;
  int label = 0;
};

enum class KernelKind : std::uint32_t { kLinear = 0, kCustom = 1 };

/// Symmetric positive-semidefinite kernel k(x, y). Only the linear kernel can
/// be persisted; custom kernels are for in-process use.
class Kernel {
 public:
  using Function = std::function<double(std::span<const double>, std::span<const double>)>;

  static Kernel linear();
  static Kernel custom(Function fn);

  KernelKind kind() const noexcept { return kind_; }
  double operator()(std::span<const double> a, std::span<const double> b) const;

 private:
  KernelKind kind_ = KernelKind::kLinear;
  Function fn_;
};

struct SvmOptions {
  /// Stop once the maximal KKT violation m(alpha) - M(alpha) is at most this.
  double tolerance = 1e-3;
  /// Cap on two-variable updates before training fails.
  std::int64_t max_iterations = 10'000'000;
  /// Kernel rows held in an LRU cache (0 disables caching). Results do not
  /// depend on this setting.
  std::size_t cache_rows = 4096;
};

/// Full dual solution, one alpha per training point.
struct DualSolution {
  std::vector<double> alpha;
  double bias = 0.0;
  /// sum_i alpha_i - 1/2 sum_ij alpha_i alpha_j y_i y_j k(x_i, x_j)
  double objective = 0.0;
  double max_violation = 0.0;
  std::int64_t iterations = 0;
};

/// Solves max_alpha sum alpha - 1/2 alpha^T Q alpha s.t. 0 <= alpha <= C,
/// sum alpha_i y_i = 0 by sequential minimal optimisation with
/// maximal-violating-pair selection. Labels must be +1 or -1.
/// Throws ArgumentError on single-class data or C <= 0, and TrainingError if
/// the iteration cap is reached first.
DualSolution solve_dual(std::span<const LabeledPoint> data, const Kernel& kernel, double C,
                        const SvmOptions& options = {});

/// f(x) = sum_i alpha_i y_i k(x, x_i) + b over the support vectors (alpha_i > 0).
class BinarySvmModel {
 public:
  BinarySvmModel(std::vector<std::vector<double>> support_vectors, std::vector<double> dual_coefs,
                 double bias, Kernel kernel, double C, int dimension);

  double decision_value(std::span<const double> x) const;
  int predict(std::span<const double> x) const { return decision_value(x) >= 0.0 ? 1 : -1; }

  const std::vector<std::vector<double>>& support_vectors() const noexcept { return support_vectors_; }
  /// alpha_i * y_i per support vector.
  const std::vector<double>& dual_coefs() const noexcept { return dual_coefs_; }
  double bias() const noexcept { return bias_; }
  double C() const noexcept { return C_; }
  const Kernel& kernel() const noexcept { return kernel_; }
  int dimension() const noexcept { return dimension_; }
  /// sum_i alpha_i y_i x_i; empty for non-linear kernels.
  const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  std::vector<std::vector<double>> support_vectors_;
  std::vector<double> dual_coefs_;
  double bias_;
  Kernel kernel_;
  double C_;
  int dimension_;
  std::vector<double> weights_;
};

BinarySvmModel train_binary(std::span<const LabeledPoint> data, const Kernel& kernel, double C,
                            const SvmOptions& options = {});

/// One-vs-all: model i separates classes()[i] (+1) from all other classes (-1).
class MulticlassSvmModel {
 public:
  MulticlassSvmModel(std::vector<int> classes, std::vector<BinarySvmModel> models);

  /// Label with the greatest decision value; ties go to the smallest label.
  int predict(std::span<const double> x) const;
  std::vector<double> decision_values(std::span<const double> x) const;

  const std::vector<int>& classes() const noexcept { return classes_; }
  const std::vector<BinarySvmModel>& models() const noexcept { return models_; }
  int dimension() const noexcept { return models_.front().dimension(); }

 private:
  std::vector<int> classes_;
  std::vector<BinarySvmModel> models_;
};

/// Trains one binary model per distinct label, in ascending label order.
MulticlassSvmModel train_multiclass(std::span<const LabeledPoint> data, const Kernel& kernel, double C,
                                    const SvmOptions& options = {});

/// SVM1 file: magic "SVM1", u32 M, u32 d, u32 kernel kind, f64 C, then per
/// class in label order: u32 support-vector count n, f64 bias, f64 dual
/// coefficients[n], f64 vectors[n * d]; little-endian. Classes must be 0..M-1.
void save_svm(const std::filesystem::path& path, const MulticlassSvmModel& model);
MulticlassSvmModel load_svm(const std::filesystem::path& path);

}  // namespace scatfp
