#include "simroc/pca.hpp"

#include "simroc/errors.hpp"

namespace simroc {

RowMatrix PcaModel::transform(const RowMatrix& x) const {
  if (x.cols() != mean.size()) throw Error(ErrorCode::kInvalidInput, "PCA input dimension mismatch");
  return (x.rowwise() - mean.transpose()) * components;
}

PcaResult pca_fit_transform(const RowMatrix& features, double target_explained) {
  if (features.rows() < 2) throw Error(ErrorCode::kEmptySample, "PCA needs n >= 2");
  if (!(target_explained > 0.0 && target_explained <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "target explained variance must lie in (0,1]");
  }
  const auto d = features.cols();
  PcaModel model;
  model.mean = features.colwise().mean().transpose();
  const Matrix centered = features.rowwise() - model.mean.transpose();
  const Matrix cov = centered.transpose() * centered / static_cast<double>(features.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::kNumerical, "PCA eigendecomposition failed");

  // Eigen returns ascending eigenvalues.
  Vector values = es.eigenvalues().reverse().cwiseMax(0.0);
  Matrix vectors = es.eigenvectors().rowwise().reverse();
  const double total = values.sum();
  model.eigenvalues.assign(values.data(), values.data() + d);

  Eigen::Index r = 1;
  if (total > 0.0) {
    double cumulative = 0.0;
    for (r = 0; r < d;) {
      cumulative += values(r);
      ++r;
      if (cumulative / total >= target_explained - 1e-12) break;
    }
  }
  model.components = vectors.leftCols(r);
  for (Eigen::Index k = 0; k < r; ++k) {
    model.explained_variance_ratio.push_back(total > 0.0 ? values(k) / total : 0.0);
  }
  PcaResult out{std::move(model), {}};
  out.reduced = out.model.transform(features);
  return out;
}

}  // namespace simroc
