#include "scatfp/pca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "scatfp/binary_io.hpp"
#include "scatfp/errors.hpp"

namespace scatfp {

PcaModel::PcaModel(Eigen::VectorXd mean, Eigen::VectorXd eigenvalues, Eigen::MatrixXd basis, int components)
    : mean_(std::move(mean)), eigenvalues_(std::move(eigenvalues)), basis_(std::move(basis)),
      components_(components) {
  if (basis_.rows() != mean_.size() || basis_.cols() != eigenvalues_.size())
    throw ArgumentError("PCA basis shape does not match mean/eigenvalues");
  if (components_ < 1 || components_ > rank())
    throw ArgumentError("PCA component count must lie in [1, " + std::to_string(rank()) + "]");
}

PcaModel PcaModel::with_components(int k) const {
  return PcaModel(mean_, eigenvalues_, basis_, k);
}

bool operator==(const PcaModel& a, const PcaModel& b) {
  return a.components_ == b.components_ && a.mean_.size() == b.mean_.size() &&
         a.eigenvalues_.size() == b.eigenvalues_.size() && a.mean_ == b.mean_ &&
         a.eigenvalues_ == b.eigenvalues_ && a.basis_ == b.basis_;
}

PcaModel fit_pca(std::span<const std::vector<double>> rows, int components) {
  const auto m = static_cast<Eigen::Index>(rows.size());
  if (m < 2) throw ArgumentError("PCA needs at least two vectors");
  const auto d = static_cast<Eigen::Index>(rows.front().size());
  if (d == 0) throw ArgumentError("PCA input vectors are empty");
  for (const auto& r : rows) {
    if (static_cast<Eigen::Index>(r.size()) != d) throw ArgumentError("PCA input vectors differ in length");
  }
  const int k_limit = static_cast<int>(std::min(m - 1, d));
  if (components < 1 || components > k_limit)
    throw ArgumentError("PCA component count " + std::to_string(components) + " outside [1, " +
                        std::to_string(k_limit) + "]; maximum is " + std::to_string(k_limit));

  Eigen::MatrixXd z(m, d);
  for (Eigen::Index i = 0; i < m; ++i) z.row(i) = Eigen::Map<const Eigen::RowVectorXd>(rows[i].data(), d);
  Eigen::VectorXd mean = z.colwise().mean().transpose();
  z.rowwise() -= mean.transpose();

  // The right singular vectors of Z are the eigenvectors of C = Z^T Z, with
  // eigenvalues sigma^2; this avoids forming C when d >> M.
  Eigen::BDCSVD<Eigen::MatrixXd> svd(z, Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double tol = sigma.size() > 0
                         ? sigma(0) * static_cast<double>(std::max(m, d)) * 10.0 *
                               std::numeric_limits<double>::epsilon()
                         : 0.0;
  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > tol) ++rank;
  if (components > rank)
    throw ArgumentError("PCA component count " + std::to_string(components) +
                        " exceeds the rank of the training data; maximum is " + std::to_string(rank));

  Eigen::VectorXd eigenvalues = sigma.head(rank).array().square();
  Eigen::MatrixXd basis = svd.matrixV().leftCols(rank);
  for (Eigen::Index c = 0; c < rank; ++c) {
    Eigen::Index arg = 0;
    basis.col(c).cwiseAbs().maxCoeff(&arg);
    if (basis(arg, c) < 0.0) basis.col(c) = -basis.col(c);
  }
  return PcaModel(std::move(mean), std::move(eigenvalues), std::move(basis), components);
}

PcaModel fit_pca(std::span<const FeatureVector> features, int components) {
  std::vector<std::vector<double>> rows;
  rows.reserve(features.size());
  for (const auto& f : features) rows.push_back(f.values);
  return fit_pca(rows, components);
}

std::vector<double> project(const PcaModel& model, std::span<const double> x) {
  if (static_cast<int>(x.size()) != model.dimension())
    throw ArgumentError("vector length " + std::to_string(x.size()) + " does not match PCA dimension " +
                        std::to_string(model.dimension()));
  const Eigen::VectorXd centred = Eigen::Map<const Eigen::VectorXd>(x.data(), model.dimension()) - model.mean();
  const Eigen::VectorXd coeffs = model.basis().leftCols(model.components()).transpose() * centred;
  return {coeffs.data(), coeffs.data() + coeffs.size()};
}

std::vector<double> reconstruct(const PcaModel& model, std::span<const double> coefficients) {
  if (coefficients.empty() || static_cast<int>(coefficients.size()) > model.rank())
    throw ArgumentError("coefficient count outside [1, rank]");
  const auto k = static_cast<Eigen::Index>(coefficients.size());
  const Eigen::VectorXd x =
      model.mean() + model.basis().leftCols(k) * Eigen::Map<const Eigen::VectorXd>(coefficients.data(), k);
  return {x.data(), x.data() + x.size()};
}

double retained_variance(const PcaModel& model, int k) {
  if (k < 1 || k > model.rank())
    throw ArgumentError("component count " + std::to_string(k) + " outside [1, " + std::to_string(model.rank()) + "]");
  double partial = 0.0;
  double total = 0.0;
  for (int j = 0; j < model.rank(); ++j) {
    total += model.eigenvalues()(j);
    if (j < k) partial += model.eigenvalues()(j);
  }
  return partial / total;
}

int choose_k(const PcaModel& model, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ArgumentError("variance target must lie in (0, 1]");
  for (int k = 1; k < model.rank(); ++k) {
    if (retained_variance(model, k) >= epsilon) return k;
  }
  return model.rank();
}

void save_pca(const std::filesystem::path& path, const PcaModel& model) {
  binio::Writer w(path);
  w.magic("PCA1");
  w.u32(static_cast<std::uint32_t>(model.dimension()));
  w.u32(static_cast<std::uint32_t>(model.rank()));
  w.u32(static_cast<std::uint32_t>(model.components()));
  w.f64s({model.mean().data(), static_cast<std::size_t>(model.mean().size())});
  w.f64s({model.eigenvalues().data(), static_cast<std::size_t>(model.eigenvalues().size())});
  for (int c = 0; c < model.rank(); ++c) {
    const Eigen::VectorXd v = model.basis().col(c);
    w.f64s({v.data(), static_cast<std::size_t>(v.size())});
  }
  w.close();
}

PcaModel load_pca(const std::filesystem::path& path) {
  binio::Reader r(path);
  r.expect_magic("PCA1");
  const auto d = static_cast<Eigen::Index>(r.u32());
  const auto rank = static_cast<Eigen::Index>(r.u32());
  const auto k = static_cast<int>(r.u32());
  if (d == 0 || rank == 0 || rank > d) throw ValidationError(path.string() + ": inconsistent PCA header");
  Eigen::VectorXd mean(d);
  Eigen::VectorXd eigenvalues(rank);
  Eigen::MatrixXd basis(d, rank);
  r.f64s({mean.data(), static_cast<std::size_t>(d)});
  r.f64s({eigenvalues.data(), static_cast<std::size_t>(rank)});
  Eigen::VectorXd col(d);
  for (Eigen::Index c = 0; c < rank; ++c) {
    r.f64s({col.data(), static_cast<std::size_t>(d)});
    basis.col(c) = col;
  }
  if (k < 1 || k > rank) throw ValidationError(path.string() + ": K outside [1, r]");
  return PcaModel(std::move(mean), std::move(eigenvalues), std::move(basis), k);
}

}  // namespace scatfp
