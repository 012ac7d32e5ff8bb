#pragma once

#include <vector>

#include "simroc/core.hpp"

namespace simroc {

struct PcaModel {
  Vector mean;
  Matrix components;                             // d x r, orthonormal columns
  std::vector<double> explained_variance_ratio;  // r values, non-increasing
  std::vector<double> eigenvalues;               // all d covariance eigenvalues, descending

  RowMatrix transform(const RowMatrix& x) const;
  std::size_t rank() const noexcept { return static_cast<std::size_t>(components.cols()); }
};

struct PcaResult {
  PcaModel model;
  RowMatrix reduced;
};

/// Keeps the smallest r whose cumulative explained-variance ratio reaches
/// target_explained. Zero-variance input keeps one component.
PcaResult pca_fit_transform(const RowMatrix& features, double target_explained);

}  // namespace simroc
