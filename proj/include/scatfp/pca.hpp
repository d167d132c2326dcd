#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "scatfp/scattering.hpp"

namespace scatfp {

/// Principal components of a training set.
///
/// Eigenvalues are those of the unnormalised scatter matrix C = sum_i z_i z_i^T
/// (no 1/M factor), in non-increasing order. Only the numerically non-zero
/// part of the spectrum is kept, so rank() may be smaller than min(M-1, d).
/// Each basis vector has its largest-magnitude entry positive.
class PcaModel {
 public:
  PcaModel() = default;
  PcaModel(Eigen::VectorXd mean, Eigen::VectorXd eigenvalues, Eigen::MatrixXd basis, int components);

  int dimension() const noexcept { return static_cast<int>(mean_.size()); }
  int rank() const noexcept { return static_cast<int>(eigenvalues_.size()); }
  /// Retained component count K used by project().
  int components() const noexcept { return components_; }

  const Eigen::VectorXd& mean() const noexcept { return mean_; }
  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
  /// d x r, one eigenvector per column.
  const Eigen::MatrixXd& basis() const noexcept { return basis_; }

  /// Same model with a different K (1 <= k <= rank()).
  PcaModel with_components(int k) const;

  friend bool operator==(const PcaModel& a, const PcaModel& b);

 private:
  Eigen::VectorXd mean_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd basis_;
  int components_ = 0;
};

/// Requires at least two vectors of equal length and 1 <= K <= min(M-1, d);
/// also throws ArgumentError naming the achievable maximum if K exceeds the
/// numerical rank of the centred data.
PcaModel fit_pca(std::span<const std::vector<double>> rows, int components);
PcaModel fit_pca(std::span<const FeatureVector> features, int components);

/// (nu_j^T (x - mean)) for j = 1..K.
std::vector<double> project(const PcaModel& model, std::span<const double> x);
inline std::vector<double> project(const PcaModel& model, const FeatureVector& fv) {
  return project(model, fv.values);
}

/// mean + sum_j alpha_j nu_j over the first coefficients.size() components.
std::vector<double> reconstruct(const PcaModel& model, std::span<const double> coefficients);

/// sum_{j<=k} lambda_j / sum_j lambda_j, for 1 <= k <= rank().
double retained_variance(const PcaModel& model, int k);

/// Smallest k with retained_variance(model, k) >= epsilon, for 0 < epsilon <= 1.
int choose_k(const PcaModel& model, double epsilon);

/// PCA1 file: magic "PCA1", u32 d, u32 r, u32 K, then mean[d], eigenvalues[r]
/// and r basis rows of length d, all little-endian float64.
void save_pca(const std::filesystem::path& path, const PcaModel& model);
PcaModel load_pca(const std::filesystem::path& path);

}  // namespace scatfp
