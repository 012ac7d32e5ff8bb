#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "simroc/core.hpp"
#include "simroc/errors.hpp"
#include "simroc/rng.hpp"

using namespace simroc;

namespace {

LabeledDataset from_labels(std::vector<int> labels, std::size_t d = 1) {
  RowMatrix x = RowMatrix::Zero(static_cast<Eigen::Index>(labels.size()), static_cast<Eigen::Index>(d));
  return LabeledDataset(std::move(x), std::move(labels));
}

std::vector<double> v(std::initializer_list<double> xs) { return xs; }

}  // namespace

TEST_CASE("dataset bookkeeping") {
  const auto ds = from_labels({2, 1, 2, 3, 2});
  CHECK(ds.num_classes() == 3);
  CHECK(ds.class_counts() == std::vector<std::size_t>{1, 3, 1});
  CHECK(ds.label(0) == 2);
  CHECK(ds.class_of(0) == 1);
  CHECK(ds.class_index()[1] == std::vector<std::size_t>{0, 2, 4});
  CHECK(ds.all_classes_nonempty());

  const auto gap = LabeledDataset(RowMatrix::Zero(2, 1), {1, 3});
  CHECK_FALSE(gap.all_classes_nonempty());
  CHECK(LabeledDataset(RowMatrix::Zero(2, 1), {1, 2}, 4).num_classes() == 4);

  const auto pre = ds.prefix(3);
  CHECK(pre.size() == 3);
  CHECK(pre.num_classes() == 3);
  CHECK(pre.class_counts() == std::vector<std::size_t>{1, 2, 0});

  const std::vector<std::size_t> rows{4, 3};
  const auto sub = ds.subset(rows);
  CHECK(sub.label(0) == 2);
  CHECK(sub.label(1) == 3);
}

TEST_CASE("dataset rejects bad labels") {
  CHECK_THROWS_AS(LabeledDataset(RowMatrix::Zero(2, 1), {0, 1}), Error);
  CHECK_THROWS_AS(LabeledDataset(RowMatrix::Zero(2, 1), {1, 5}, 3), Error);
  CHECK_THROWS_AS(LabeledDataset(RowMatrix::Zero(3, 1), {1, 2}), Error);
}

TEST_CASE("pair_counts examples") {
  auto c = pair_counts(from_labels({1, 1, 2}));
  CHECK(c.n_plus == 1);
  CHECK(c.n_minus == 2);
  c = pair_counts(from_labels({1, 2, 3}));
  CHECK(c.n_plus == 0);
  CHECK(c.n_minus == 3);
  CHECK_THROWS_AS(pair_counts(from_labels({1})), Error);
  try {
    (void)pair_counts(from_labels({1}));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptySample);
  }
}

TEST_CASE("pair_counts: ten balanced classes give nine negatives per positive") {
  std::vector<int> labels;
  for (int k = 1; k <= 10; ++k) labels.insert(labels.end(), 6000, k);
  const auto c = pair_counts(from_labels(labels));
  CHECK(c.n_plus == 10ull * 6000 * 5999 / 2);
  CHECK(static_cast<double>(c.n_minus) / c.n_plus == doctest::Approx(9.0 * 6000 / 5999).epsilon(1e-12));
  CHECK(c.n_plus + c.n_minus == 60000ull * 59999 / 2);
}

TEST_CASE("pair_counts matches a double loop") {
  CounterRng rng(11);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 2 + rng.below(99);
    const int k = 1 + static_cast<int>(rng.below(6));
    std::vector<int> labels(n);
    for (auto& l : labels) l = 1 + static_cast<int>(rng.below(k));
    const auto ds = LabeledDataset(RowMatrix::Zero(static_cast<Eigen::Index>(n), 1), labels, k);
    std::uint64_t pos = 0, neg = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) (labels[i] == labels[j] ? pos : neg)++;
    const auto c = pair_counts(ds);
    CHECK(c.n_plus == pos);
    CHECK(c.n_minus == neg);
  }
}

TEST_CASE("PairLabel") {
  CHECK(PairLabel::of(3, 3).z == 1);
  CHECK(PairLabel::of(3, 1).z == -1);
  CHECK(PairLabel::of(2, 2).positive());
}

TEST_CASE("score examples") {
  const auto x = v({0.3, -0.2});
  const auto y = v({1.5, 4.0});
  CHECK(score(make_bilinear(Matrix::Zero(2, 2)), x, y) == 0.5);
  const auto t = v({0.1});
  const auto tp = v({0.2});
  CHECK(score(make_threshold(0.3), t, tp) == 1.0);
  CHECK(score(make_threshold(0.2), t, tp) == 0.0);
  const auto o = v({0.0, 0.0});
  const auto p = v({3.0, 4.0});
  CHECK(score(make_mahalanobis(Matrix::Identity(2, 2)), o, p) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("score errors") {
  const auto x2 = v({1.0, 2.0});
  const auto x3 = v({1.0, 2.0, 3.0});
  CHECK_THROWS_AS(score(make_bilinear(Matrix::Identity(2, 2)), x2, x3), Error);
  CHECK_THROWS_AS(score(make_mahalanobis(Matrix::Identity(3, 3)), x2, x2), Error);
  CHECK_THROWS_AS(score(make_threshold(0.5), x2, x2), Error);
  const auto out = v({1.5});
  const auto in = v({0.5});
  CHECK_THROWS_AS(score(make_threshold(0.5), out, in), Error);
  CHECK_THROWS_AS(make_threshold(1.5), Error);
  Matrix neg = Matrix::Identity(2, 2);
  neg(1, 1) = -1.0;
  CHECK_THROWS_AS(make_mahalanobis(neg), Error);
  Matrix asym = Matrix::Identity(2, 2);
  asym(0, 1) = 0.5;
  CHECK_THROWS_AS(make_mahalanobis(asym), Error);
  // Round-off below the PSD tolerance is accepted.
  Matrix near = Matrix::Identity(2, 2);
  near(1, 1) = -1e-12;
  CHECK_NOTHROW(make_mahalanobis(near));
}

TEST_CASE("property: symmetry of every family") {
  CounterRng rng(5);
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t d = 1 + rng.below(4);
    const Matrix a = oracle::random_symmetric(d, rng);
    const Matrix b = oracle::random_matrix(d, rng);
    const Matrix psd = b * b.transpose();
    std::vector<double> x(d), y(d);
    for (std::size_t i = 0; i < d; ++i) {
      x[i] = rng.normal();
      y[i] = rng.normal();
    }
    CHECK(score(make_bilinear(a), x, y) == doctest::Approx(score(make_bilinear(a), y, x)).epsilon(1e-12));
    const auto m = make_mahalanobis(psd);
    CHECK(score(m, x, y) == doctest::Approx(score(m, y, x)).epsilon(1e-12));
    CHECK(score(m, x, y) >= 0.0);
    const auto s = v({rng.uniform()});
    const auto sp = v({rng.uniform()});
    const auto th = make_threshold(rng.uniform());
    CHECK(score(th, s, sp) == score(th, sp, s));
  }
}

TEST_CASE("property: bilinear scores in [0,1] on unit vectors") {
  CounterRng rng(17);
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t d = 1 + rng.below(5);
    Matrix a = oracle::random_matrix(d, rng);
    a /= a.norm() * (1.0 + rng.uniform());
    Vector x(d), y(d);
    for (std::size_t i = 0; i < d; ++i) {
      x[i] = rng.normal();
      y[i] = rng.normal();
    }
    x.normalize();
    y.normalize();
    const double s = score(make_bilinear(a), {x.data(), d}, {y.data(), d});
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
  }
}

TEST_CASE("pair_statistic") {
  CHECK(pair_statistic(0.0, 0.0) == 0.0);
  CHECK(pair_statistic(0.5, 0.5) == 0.5);
  CHECK(pair_statistic(0.1, 0.2) == 0.2);
  CHECK(pair_statistic(0.9, 0.8) == doctest::Approx(0.2));
  CounterRng rng(3);
  for (int rep = 0; rep < 10000; ++rep) {
    const double x = rng.uniform(), y = rng.uniform(), t = rng.uniform();
    CHECK((pair_statistic(x, y) < t) == oracle::in_threshold_set(x, y, t));
    const auto xs = v({x});
    const auto ys = v({y});
    CHECK((score(make_threshold(t), xs, ys) == 1.0) == oracle::in_threshold_set(x, y, t));
  }
}

TEST_CASE("scorer wraps the model") {
  const auto m = make_bilinear(Matrix::Identity(2, 2));
  const auto f = scorer(m);
  const auto x = v({1.0, 0.0});
  const auto y = v({0.5, 0.5});
  CHECK(f(x, y) == score(m, x, y));
}

TEST_CASE("min_eigenvalue") {
  Matrix m(2, 2);
  m << 1, 0, 0, -2;
  CHECK(min_eigenvalue(m) == doctest::Approx(-2.0));
}

TEST_CASE("rng determinism and ranges") {
  CounterRng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());
  CounterRng c(42);
  auto s1 = c.split(1), s2 = c.split(2);
  CHECK(s1() != s2());
  CounterRng r(9);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(r.below(7) < 7);
    const double z = r.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 4.0 / std::sqrt(n));
  CHECK(std::abs(sq / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
}
