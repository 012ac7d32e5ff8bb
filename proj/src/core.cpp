#include "simroc/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "simroc/errors.hpp"

namespace simroc {

LabeledDataset::LabeledDataset(RowMatrix features, std::vector<int> labels,
                               int num_classes)
    : features_(std::move(features)) {
  if (static_cast<std::size_t>(features_.rows()) != labels.size()) {
    throw Error(ErrorCode::kInvalidInput,
                "feature rows (" + std::to_string(features_.rows()) +
                    ") and labels (" + std::to_string(labels.size()) +
                    ") differ in length");
  }
  int max_label = 0;
  for (int y : labels) {
    if (y < 1) {
      throw Error(ErrorCode::kInvalidInput,
                  "labels are 1-based, got " + std::to_string(y));
    }
    max_label = std::max(max_label, y);
  }
  num_classes_ = num_classes > 0 ? num_classes : max_label;
  if (max_label > num_classes_) {
    throw Error(ErrorCode::kInvalidInput,
                "label " + std::to_string(max_label) + " exceeds K = " +
                    std::to_string(num_classes_));
  }
  labels_.reserve(labels.size());
  class_counts_.assign(num_classes_, 0);
  class_index_.assign(num_classes_, {});
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int k = labels[i] - 1;
    labels_.push_back(k);
    ++class_counts_[k];
    class_index_[k].push_back(i);
  }
}

bool LabeledDataset::all_classes_nonempty() const noexcept {
  return num_classes_ > 0 &&
         std::all_of(class_counts_.begin(), class_counts_.end(),
                     [](std::size_t c) { return c > 0; });
}

LabeledDataset LabeledDataset::prefix(std::size_t n) const {
  n = std::min(n, size());
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = label(i);
  return LabeledDataset(features_.topRows(static_cast<Eigen::Index>(n)),
                        std::move(labels), num_classes_);
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> rows) const {
  RowMatrix f(static_cast<Eigen::Index>(rows.size()), features_.cols());
  std::vector<int> labels(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= size()) {
      throw Error(ErrorCode::kInvalidInput, "subset row out of range");
    }
    f.row(static_cast<Eigen::Index>(r)) =
        features_.row(static_cast<Eigen::Index>(rows[r]));
    labels[r] = label(rows[r]);
  }
  return LabeledDataset(std::move(f), std::move(labels), num_classes_);
}

PairCounts pair_counts(const LabeledDataset& data) {
  const std::uint64_t n = data.size();
  if (n < 2) {
    throw Error(ErrorCode::kEmptySample, "pair counts need n >= 2");
  }
  PairCounts c;
  for (std::size_t nk : data.class_counts()) {
    c.n_plus += static_cast<std::uint64_t>(nk) * (nk - (nk > 0 ? 1 : 0)) / 2;
  }
  c.n_minus = n * (n - 1) / 2 - c.n_plus;
  return c;
}

namespace {

void check_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorCode::kInvalidInput,
                std::string(what) + " matrix must be square and non-empty");
  }
  if (!a.allFinite()) {
    throw Error(ErrorCode::kInvalidInput,
                std::string(what) + " matrix has non-finite entries");
  }
}

void check_dims(std::size_t d, ConstVec x, ConstVec y) {
  if (x.size() != d || y.size() != d) {
    throw Error(ErrorCode::kInvalidInput,
                "dimension mismatch: model d = " + std::to_string(d) +
                    ", inputs " + std::to_string(x.size()) + " and " +
                    std::to_string(y.size()));
  }
}

Eigen::Map<const Vector> as_vec(ConstVec v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

}  // namespace

double min_eigenvalue(const Matrix& m) {
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumerical, "eigendecomposition failed");
  }
  return es.eigenvalues().minCoeff();
}

SimilarityModel make_bilinear(Matrix a) {
  check_square(a, "bilinear");
  return Bilinear{std::move(a)};
}

SimilarityModel make_threshold(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "threshold t must lie in [0,1]");
  }
  return ThresholdIndicator{t};
}

SimilarityModel make_mahalanobis(Matrix a) {
  check_square(a, "mahalanobis");
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::kInvalidInput, "mahalanobis matrix not symmetric");
  }
  if (min_eigenvalue(a) < -kPsdTolerance) {
    throw Error(ErrorCode::kInvalidInput, "mahalanobis matrix not PSD");
  }
  return MahalanobisDistance{std::move(a)};
}

double score(const SimilarityModel& model, ConstVec x, ConstVec x_prime) {
  return std::visit(
      [&](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Bilinear>) {
          check_dims(static_cast<std::size_t>(m.a.rows()), x, x_prime);
          return 0.5 * (1.0 + as_vec(x).dot(m.a * as_vec(x_prime)));
        } else if constexpr (std::is_same_v<M, ThresholdIndicator>) {
          check_dims(1, x, x_prime);
          const double u = x[0], v = x_prime[0];
          if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
            throw Error(ErrorCode::kInvalidInput,
                        "threshold model needs inputs in [0,1]");
          }
          return pair_statistic(u, v) < m.t ? 1.0 : 0.0;
        } else {
          check_dims(static_cast<std::size_t>(m.a.rows()), x, x_prime);
          const Vector delta = as_vec(x) - as_vec(x_prime);
          return std::sqrt(std::max(0.0, delta.dot(m.a * delta)));
        }
      },
      model);
}

PairScoreFn scorer(const SimilarityModel& model) {
  return [model](ConstVec x, ConstVec y) { return score(model, x, y); };
}

}  // namespace simroc
