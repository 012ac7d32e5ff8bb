#include <cmath>
#include <limits>
#include <sstream>

#include "simroc/errors.hpp"
#include "simroc/solvers.hpp"

namespace simroc {

namespace {

double inner(const Matrix& x, const Matrix& y) { return (x.array() * y.array()).sum(); }

}  // namespace

const char* to_string(KktCase c) noexcept {
  switch (c) {
    case KktCase::kZeroP: return "zero-P";
    case KktCase::kColinear: return "colinear";
    case KktCase::kInterior: return "interior";
    case KktCase::kBoundary: return "boundary";
  }
  return "?";
}

PairMoments compute_P_N(const LabeledDataset& data) {
  const PairCounts c = pair_counts(data);
  if (c.n_plus == 0) throw Error(ErrorCode::kNoPositivePairs, "P needs n_+ >= 1");
  if (c.n_minus == 0) throw Error(ErrorCode::kNoNegativePairs, "N needs n_- >= 1");
  const auto d = static_cast<Eigen::Index>(data.dim());
  const RowMatrix& x = data.features();

  // sum_{i<j, same} x_i x_j^T + x_j x_i^T = sum_k (s_k s_k^T - sum_{i in k} x_i x_i^T)
  // with s_k the class sum; the all-pairs total likewise gives the negatives.
  const Matrix gram = x.transpose() * x;
  const Vector total = x.colwise().sum().transpose();
  Matrix same = Matrix::Zero(d, d);
  for (const auto& members : data.class_index()) {
    if (members.empty()) continue;
    Vector s = Vector::Zero(d);
    Matrix g = Matrix::Zero(d, d);
    for (std::size_t i : members) {
      const auto row = x.row(static_cast<Eigen::Index>(i)).transpose();
      s += row;
      g.noalias() += row * row.transpose();
    }
    same += s * s.transpose() - g;
  }
  const Matrix all = total * total.transpose() - gram;
  PairMoments m;
  m.p = same / (2.0 * static_cast<double>(c.n_plus));
  m.n = (all - same) / (2.0 * static_cast<double>(c.n_minus));
  m.p = 0.5 * (m.p + m.p.transpose());
  m.n = 0.5 * (m.n + m.n.transpose());
  return m;
}

KktSolution solve_bilinear_kkt(const Matrix& p, const Matrix& n, double alpha) {
  if (p.rows() != p.cols() || n.rows() != n.cols() || p.rows() != n.rows() || p.rows() == 0) {
    throw Error(ErrorCode::kInvalidInput, "P and N must be square with equal sizes");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "alpha must lie in (0,1)");
  }
  KktSolution sol;
  sol.beta = 2.0 * alpha - 1.0;
  const double beta = sol.beta;
  const double a = inner(n, n);
  const double b = inner(n, p);
  const double pp = inner(p, p);
  const double norm_n = std::sqrt(a);
  const double norm_p = std::sqrt(pp);

  if (beta < -norm_n) {
    std::ostringstream msg;
    msg << "infeasible: beta = " << beta << " < -||N||_F = " << -norm_n;
    throw Error(ErrorCode::kInfeasible, msg.str());
  }

  // Minimal-norm point of {<N,A> = beta} (or 0 when beta >= 0 suffices).
  auto minimal_feasible = [&](bool on_hyperplane) -> Matrix {
    if (!on_hyperplane && beta >= 0.0) return Matrix::Zero(p.rows(), p.cols());
    return (beta / a) * n;
  };

  if (norm_p == 0.0) {
    sol.case_tag = KktCase::kZeroP;
    sol.a = minimal_feasible(false);
    return sol;
  }

  if (b <= beta * norm_p) {
    sol.case_tag = KktCase::kInterior;
    sol.a = p / norm_p;
    sol.gamma = 0.5 * norm_p;
    return sol;
  }

  // Past this point b > beta ||P|| >= -||N|| ||P||, so N != 0.
  const double gap = a * pp - b * b;  // Cauchy-Schwarz gap, >= 0
  if (b > 0.0 && gap <= 1e-14 * a * pp) {
    sol.case_tag = KktCase::kColinear;
    sol.lambda = b / a;
    sol.a = minimal_feasible(true);
    return sol;
  }

  const double slack = a - beta * beta;
  if (slack <= 0.0) {
    std::ostringstream msg;
    msg << "no KKT multipliers: feasible set is the single point -N/||N|| (beta = " << beta
        << ", ||N||_F = " << norm_n << ")";
    throw Error(ErrorCode::kNumerical, msg.str());
  }

  // Boundary case. From -P + lambda N + 2 gamma A = 0 with ||A|| = 1 and
  // <N,A> = beta:  b - lambda a = beta ||P - lambda N||. Squaring gives
  //   a (a - beta^2) lambda^2 - 2 b (a - beta^2) lambda + b^2 - beta^2 ||P||^2 = 0,
  // whose roots are (b +- |beta| sqrt(gap / (a - beta^2))) / a. For beta = 0
  // both coincide with the linear solution b / a.
  const double spread = std::abs(beta) * std::sqrt(std::max(0.0, gap) / slack);
  const double roots[2] = {(b - spread) / a, (b + spread) / a};
  const double scale = std::max({1.0, std::abs(b), a, norm_p});

  bool found = false;
  double best_objective = -std::numeric_limits<double>::infinity();
  std::ostringstream diag;
  for (double lambda : roots) {
    if (lambda < 0.0) {
      diag << " [lambda=" << lambda << ": negative]";
      continue;
    }
    const Matrix r = p - lambda * n;
    const double nr = r.norm();
    if (nr <= 0.0) {
      diag << " [lambda=" << lambda << ": zero residual direction]";
      continue;
    }
    // The squared equation admits a spurious root with the opposite sign.
    const double sign_residual = (b - lambda * a) - beta * nr;
    if (std::abs(sign_residual) > 1e-9 * scale) {
      diag << " [lambda=" << lambda << ": sign residual " << sign_residual << "]";
      continue;
    }
    const double objective = (pp - lambda * b) / nr;
    if (!found || objective > best_objective) {
      found = true;
      best_objective = objective;
      sol.case_tag = KktCase::kBoundary;
      sol.lambda = lambda;
      sol.gamma = 0.5 * nr;
      sol.a = r / nr;
    }
  }
  if (!found) {
    throw Error(ErrorCode::kNumerical, "no admissible KKT root:" + diag.str());
  }
  return sol;
}

KktResiduals kkt_residuals(const KktSolution& sol, const Matrix& p, const Matrix& n) {
  KktResiduals r;
  r.stationarity = (-p + sol.lambda * n + 2.0 * sol.gamma * sol.a).norm();
  const double na = inner(n, sol.a) - sol.beta;
  const double aa = inner(sol.a, sol.a) - 1.0;
  r.feas_n = std::max(0.0, na);
  r.feas_norm = std::max(0.0, aa);
  r.cs_lambda = std::abs(sol.lambda * na);
  r.cs_gamma = std::abs(sol.gamma * aa);
  return r;
}

}  // namespace simroc
