#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace simroc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstVec = std::span<const double>;

/// Minimum eigenvalue accepted as "numerically PSD".
inline constexpr double kPsdTolerance = 1e-10;

struct PairCounts {
  std::uint64_t n_plus = 0;
  std::uint64_t n_minus = 0;
};

/// Labeled sample D_n. Features are dense row-major; labels are 1-based
/// in the public interface and stored 0-based.
class LabeledDataset {
 public:
  /// num_classes = 0 infers K as the largest label. Classes with no
  /// members are allowed (some estimators reject them).
  LabeledDataset(RowMatrix features, std::vector<int> labels,
                 int num_classes = 0);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t dim() const noexcept {
    return static_cast<std::size_t>(features_.cols());
  }
  int num_classes() const noexcept { return num_classes_; }

  ConstVec row(std::size_t i) const noexcept {
    return {features_.data() + i * dim(), dim()};
  }
  double scalar(std::size_t i) const noexcept { return features_(i, 0); }

  /// 1-based label.
  int label(std::size_t i) const noexcept { return labels_[i] + 1; }
  /// 0-based class index.
  int class_of(std::size_t i) const noexcept { return labels_[i]; }

  const RowMatrix& features() const noexcept { return features_; }
  const std::vector<std::size_t>& class_counts() const noexcept {
    return class_counts_;
  }
  const std::vector<std::vector<std::size_t>>& class_index() const noexcept {
    return class_index_;
  }
  bool all_classes_nonempty() const noexcept;

  /// Rows [0, n) with the same class count K.
  LabeledDataset prefix(std::size_t n) const;
  LabeledDataset subset(std::span<const std::size_t> rows) const;

 private:
  RowMatrix features_;
  std::vector<int> labels_;
  int num_classes_ = 0;
  std::vector<std::size_t> class_counts_;
  std::vector<std::vector<std::size_t>> class_index_;
};

/// Z = +1 for a pair sharing a label, -1 otherwise.
struct PairLabel {
  int z;
  static PairLabel of(int y, int y_prime) noexcept {
    return {y == y_prime ? +1 : -1};
  }
  bool positive() const noexcept { return z > 0; }
};

PairCounts pair_counts(const LabeledDataset& data);

/// S_A(x, x') = (1 + x^T A x') / 2.
struct Bilinear {
  Matrix a;
};

/// Indicator of S_t on [0,1]^2: the pair is in the set when
/// min(max(1-x, 1-x'), max(x, x')) < t.
struct ThresholdIndicator {
  double t;
};

/// d_A(x, x') = sqrt((x-x')^T A (x-x')), A symmetric PSD.
struct MahalanobisDistance {
  Matrix a;
};

/// min(max(1-x, 1-x'), max(x, x')): the smallest t for which (x, x')
/// enters S_t, i.e. sup-distance from the pair to the nearer of the corners
/// (0,0) and (1,1).
inline double pair_statistic(double x, double x_prime) noexcept {
  const double lo = x < x_prime ? x : x_prime;
  const double hi = x < x_prime ? x_prime : x;
  return (1.0 - lo) < hi ? (1.0 - lo) : hi;
}

using SimilarityModel =
    std::variant<Bilinear, ThresholdIndicator, MahalanobisDistance>;

SimilarityModel make_bilinear(Matrix a);
SimilarityModel make_threshold(double t);
/// Throws kInvalidInput unless A is symmetric with min eigenvalue >= -1e-10.
SimilarityModel make_mahalanobis(Matrix a);

double score(const SimilarityModel& model, ConstVec x, ConstVec x_prime);

/// Generic pair scorer accepted by the risk estimators.
using PairScoreFn = std::function<double(ConstVec, ConstVec)>;

PairScoreFn scorer(const SimilarityModel& model);

/// Minimum eigenvalue of the symmetric part of m.
double min_eigenvalue(const Matrix& m);

}  // namespace simroc
