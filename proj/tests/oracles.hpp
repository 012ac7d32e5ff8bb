// Independent reference implementations used only by tests. Written from the
// defining formulas with plain loops; nothing here calls the library's
// estimators or solvers.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "simroc/core.hpp"
#include "simroc/rng.hpp"

namespace oracle {

using simroc::LabeledDataset;
using simroc::Matrix;
using simroc::RowMatrix;

inline LabeledDataset random_dataset(std::size_t n, std::size_t d, int k, std::uint64_t seed,
                                     bool unit_norm = false) {
  simroc::CounterRng rng(seed);
  RowMatrix x(n, d);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) x(i, j) = rng.normal();
    if (unit_norm) x.row(i).normalize();
    // First k rows cover every class.
    y[i] = i < static_cast<std::size_t>(k) ? static_cast<int>(i) + 1 : static_cast<int>(rng.below(k)) + 1;
  }
  return LabeledDataset(std::move(x), std::move(y), k);
}

inline Matrix random_matrix(std::size_t d, simroc::CounterRng& rng) {
  Matrix a(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) a(i, j) = rng.normal();
  return a;
}

inline Matrix random_symmetric(std::size_t d, simroc::CounterRng& rng) {
  Matrix a = random_matrix(d, rng);
  return (a + a.transpose()) / 2.0;
}

// (1 + x^T A x') / 2, component by component.
inline double bilinear(const Matrix& a, const LabeledDataset& ds, std::size_t i, std::size_t j) {
  double s = 0.0;
  for (std::size_t p = 0; p < ds.dim(); ++p)
    for (std::size_t q = 0; q < ds.dim(); ++q) s += ds.row(i)[p] * a(p, q) * ds.row(j)[q];
  return 0.5 * (1.0 + s);
}

inline double mahalanobis(const Matrix& a, const LabeledDataset& ds, std::size_t i, std::size_t j) {
  double s = 0.0;
  for (std::size_t p = 0; p < ds.dim(); ++p)
    for (std::size_t q = 0; q < ds.dim(); ++q)
      s += (ds.row(i)[p] - ds.row(j)[p]) * a(p, q) * (ds.row(i)[q] - ds.row(j)[q]);
  return std::sqrt(std::max(0.0, s));
}

// Set definition of S_t, written out directly.
inline bool in_threshold_set(double x, double xp, double t) {
  return std::min(std::max(1.0 - x, 1.0 - xp), std::max(x, xp)) < t;
}

struct PairMeans {
  double pos = 0.0, neg = 0.0;
  std::size_t n_pos = 0, n_neg = 0;
};

template <class F>
PairMeans pair_means(const LabeledDataset& ds, F score) {
  PairMeans m;
  long double sp = 0.0L, sn = 0.0L;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t j = i + 1; j < ds.size(); ++j) {
      const double s = score(i, j);
      if (ds.label(i) == ds.label(j)) {
        sp += s;
        ++m.n_pos;
      } else {
        sn += s;
        ++m.n_neg;
      }
    }
  }
  m.pos = m.n_pos ? static_cast<double>(sp / m.n_pos) : 0.0;
  m.neg = m.n_neg ? static_cast<double>(sn / m.n_neg) : 0.0;
  return m;
}

struct ScanResult {
  double t = 0.0, r_plus = 0.0, r_minus = 0.0;
};

// Every candidate threshold (0, midpoints of all consecutive sorted
// statistics, 1), each scored with a full pair loop.
inline ScanResult threshold_brute_force(const LabeledDataset& ds, double alpha) {
  std::vector<double> stats;
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (std::size_t j = i + 1; j < ds.size(); ++j)
      stats.push_back(std::min(std::max(1.0 - ds.scalar(i), 1.0 - ds.scalar(j)), std::max(ds.scalar(i), ds.scalar(j))));
  std::sort(stats.begin(), stats.end());
  std::vector<double> cands{0.0};
  for (std::size_t k = 0; k + 1 < stats.size(); ++k) cands.push_back(0.5 * (stats[k] + stats[k + 1]));
  cands.push_back(1.0);
  std::sort(cands.begin(), cands.end());
  ScanResult best;
  bool found = false;
  for (double t : cands) {
    const auto m = pair_means(ds, [&](std::size_t i, std::size_t j) {
      return in_threshold_set(ds.scalar(i), ds.scalar(j), t) ? 1.0 : 0.0;
    });
    if (m.neg > alpha) continue;
    if (!found || m.pos > best.r_plus) {
      best = {t, m.pos, m.neg};
      found = true;
    }
  }
  return best;
}

inline double dot(const Matrix& a, const Matrix& b) { return (a.array() * b.array()).sum(); }

// Euclidean projection onto {||A||_F <= 1} ∩ {<N,A> <= beta}: if either
// single projection lands in the other set it is the answer, otherwise the
// answer lies on the circle sphere ∩ hyperplane.
inline Matrix project_ball_halfspace(const Matrix& y, const Matrix& n, double beta) {
  const double nn = dot(n, n);
  auto in_half = [&](const Matrix& m) { return dot(n, m) <= beta + 1e-15; };
  if (y.norm() <= 1.0 && in_half(y)) return y;
  const Matrix b = y / std::max(1.0, y.norm());
  if (in_half(b)) return b;
  const Matrix h = y - std::max(0.0, dot(n, y) - beta) / nn * n;
  if (h.norm() <= 1.0) return h;
  const Matrix c = beta / nn * n;
  const double r = std::sqrt(std::max(0.0, 1.0 - beta * beta / nn));
  const Matrix u = y - (dot(n, y) - beta) / nn * n - c;
  const double un = u.norm();
  if (un == 0.0) return c;
  return c + r * u / un;
}

// Projected gradient ascent on the linear objective <P,A>.
inline double kkt_pg_objective(const Matrix& p, const Matrix& n, double alpha, int iters = 20000) {
  const double beta = 2.0 * alpha - 1.0;
  Matrix a = project_ball_halfspace(Matrix::Zero(p.rows(), p.cols()), n, beta);
  const double step = 1.0 / std::max(1e-12, p.norm());
  for (int it = 0; it < iters; ++it) {
    Matrix next = project_ball_halfspace(a + step * p, n, beta);
    if ((next - a).norm() < 1e-15) break;
    a = next;
  }
  return dot(p, a);
}

}  // namespace oracle
