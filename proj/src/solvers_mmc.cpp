#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "simroc/errors.hpp"
#include "simroc/rng.hpp"
#include "simroc/solvers.hpp"

namespace simroc {

Matrix psd_project(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::kInvalidInput, "psd_project needs a square matrix");
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::kNumerical, "eigendecomposition failed");
  const Vector clipped = es.eigenvalues().cwiseMax(0.0);
  Matrix out = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

void validate(const MmcConfig& cfg) {
  if (!(cfg.step_size > 0.0)) throw Error(ErrorCode::kInvalidInput, "MMC step_size must be > 0");
  if (!(cfg.tol > 0.0)) throw Error(ErrorCode::kInvalidInput, "MMC tol must be > 0");
  if (cfg.max_iters == 0) throw Error(ErrorCode::kInvalidInput, "MMC max_iters must be >= 1");
  if (cfg.tuple_budget && *cfg.tuple_budget == 0) {
    throw Error(ErrorCode::kInvalidInput, "MMC tuple_budget must be >= 1");
  }
}

namespace {

// (1/n_+) sum over positive pairs of (x_i - x_j)(x_i - x_j)^T, so that the
// positive constraint is the linear functional <A, M_+>. Per class,
// sum_{i<j} d d^T = n_k sum x x^T - s s^T.
Matrix positive_scatter(const LabeledDataset& data, std::uint64_t n_plus) {
  const auto d = static_cast<Eigen::Index>(data.dim());
  const RowMatrix& x = data.features();
  Matrix total = Matrix::Zero(d, d);
  for (const auto& members : data.class_index()) {
    if (members.size() < 2) continue;
    Vector s = Vector::Zero(d);
    Matrix g = Matrix::Zero(d, d);
    for (std::size_t i : members) {
      const auto row = x.row(static_cast<Eigen::Index>(i)).transpose();
      s += row;
      g.noalias() += row * row.transpose();
    }
    total += static_cast<double>(members.size()) * g - s * s.transpose();
  }
  return total / static_cast<double>(n_plus);
}

// Weighted negative pairs; an empty list means "all negative pairs with
// weight 1/n_-".
struct NegativeTerms {
  struct Term {
    std::uint32_t i, j;
    double w;
  };
  std::vector<Term> sampled;
  double full_weight = 0.0;
  std::uint64_t pairs_per_eval = 0;
};

NegativeTerms make_terms(const LabeledDataset& data, const MmcConfig& cfg, const PairCounts& c) {
  NegativeTerms t;
  if (!cfg.tuple_budget) {
    t.full_weight = 1.0 / static_cast<double>(c.n_minus);
    t.pairs_per_eval = c.n_minus;
    return t;
  }
  if (data.num_classes() < 2 || !data.all_classes_nonempty()) {
    throw Error(ErrorCode::kEmptyClass, "tuple-sampled MMC needs every class nonempty");
  }
  const std::uint64_t budget = *cfg.tuple_budget;
  const auto& index = data.class_index();
  const auto& counts = data.class_counts();
  const std::size_t K = index.size();
  CounterRng rng(cfg.seed);
  std::vector<std::size_t> tuple(K);
  const double n_minus = static_cast<double>(c.n_minus);
  for (std::uint64_t b = 0; b < budget; ++b) {
    for (std::size_t k = 0; k < K; ++k) tuple[k] = index[k][rng.below(index[k].size())];
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t l = k + 1; l < K; ++l) {
        const double w = static_cast<double>(counts[k]) * static_cast<double>(counts[l]) /
                         (n_minus * static_cast<double>(budget));
        t.sampled.push_back({static_cast<std::uint32_t>(tuple[k]),
                             static_cast<std::uint32_t>(tuple[l]), w});
      }
    }
  }
  t.pairs_per_eval = t.sampled.size();
  return t;
}

// Maps rows through a square root of A so that d_A(x_i, x_j) = ||y_i - y_j||.
RowMatrix embed(const RowMatrix& x, const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.transpose()));
  if (es.info() != Eigen::Success) throw Error(ErrorCode::kNumerical, "eigendecomposition failed");
  const Matrix root = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  return x * root;
}

class MmcObjective {
 public:
  MmcObjective(const LabeledDataset& data, NegativeTerms terms)
      : data_(data), terms_(std::move(terms)) {}

  double value(const Matrix& a) const { return evaluate(a, nullptr); }

  /// Value plus a supergradient; the derivative of d_A at coincident points
  /// is taken as 0.
  double value_and_gradient(const Matrix& a, Matrix& grad) const {
    return evaluate(a, &grad);
  }

  std::uint64_t pairs_per_eval() const noexcept { return terms_.pairs_per_eval; }

 private:
  double evaluate(const Matrix& a, Matrix* grad) const {
    const RowMatrix& x = data_.features();
    const RowMatrix y = embed(x, a);
    const auto n = static_cast<Eigen::Index>(data_.size());
    const auto d = x.cols();
    // grad = (1/2) sum w_ij / d_ij (x_i - x_j)(x_i - x_j)^T
    //      = (1/2) X^T (diag(C 1) - C) X, accumulated as row weights and C X.
    Vector row_weight;
    RowMatrix cx;
    if (grad) {
      row_weight = Vector::Zero(n);
      cx = RowMatrix::Zero(n, d);
    }
    auto add_pair = [&](Eigen::Index i, Eigen::Index j, double w) -> double {
      const double dist = (y.row(i) - y.row(j)).norm();
      if (grad && dist > 0.0) {
        const double c = w / dist;
        row_weight(i) += c;
        row_weight(j) += c;
        cx.row(i) += c * x.row(j);
        cx.row(j) += c * x.row(i);
      }
      return w * dist;
    };
    double total = 0.0;
    if (terms_.sampled.empty()) {
      for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const int yi = data_.class_of(static_cast<std::size_t>(i));
        double row_total = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
          if (data_.class_of(static_cast<std::size_t>(j)) != yi) {
            row_total += add_pair(i, j, terms_.full_weight);
          }
        }
        total += row_total;
      }
    } else {
      for (const auto& t : terms_.sampled) total += add_pair(t.i, t.j, t.w);
    }
    if (grad) {
      Matrix g = x.transpose() * row_weight.asDiagonal() * x - x.transpose() * cx;
      *grad = 0.25 * (g + g.transpose());
    }
    return total;
  }

  const LabeledDataset& data_;
  NegativeTerms terms_;
};

double constraint_value(const Matrix& a, const Matrix& scatter) {
  return (a.array() * scatter.array()).sum();
}

// Alternating exact rescale (the constraint is homogeneous of degree one)
// and PSD projection.
Matrix project_feasible(Matrix a, const Matrix& scatter, int rounds) {
  for (int r = 0; r < rounds; ++r) {
    const double g = constraint_value(a, scatter);
    if (g > 1.0) a /= g;
    a = psd_project(a);
    if (constraint_value(a, scatter) <= 1.0 + 1e-12) break;
  }
  return a;
}

}  // namespace

MmcResult mmc_projected_gradient(const LabeledDataset& data, const MmcConfig& cfg) {
  validate(cfg);
  const PairCounts c = pair_counts(data);
  if (c.n_plus == 0) throw Error(ErrorCode::kNoPositivePairs, "MMC needs n_+ >= 1");
  if (c.n_minus == 0) throw Error(ErrorCode::kNoNegativePairs, "MMC needs n_- >= 1");
  const auto d = static_cast<Eigen::Index>(data.dim());

  const Matrix scatter = positive_scatter(data, c.n_plus);
  const MmcObjective objective(data, make_terms(data, cfg, c));

  MmcResult result;
  result.negative_pairs_per_eval = objective.pairs_per_eval();
  result.positive_pairs = c.n_plus;

  Matrix a = Matrix::Zero(d, d);
  if (cfg.init == MmcInit::kScaledIdentity) {
    a = Matrix::Identity(d, d);
    const double g = constraint_value(a, scatter);
    if (g > 0.0) a /= g;
  }
  a = project_feasible(a, scatter, cfg.max_projection_rounds);

  double step = cfg.step_size;
  Matrix grad;
  double f = objective.value_and_gradient(a, grad);
  result.trace.push_back({0, f, constraint_value(a, scatter), step});

  for (std::uint64_t it = 1; it <= cfg.max_iters; ++it) {
    bool accepted = false;
    Matrix candidate;
    double f_new = f;
    for (int bt = 0; bt <= cfg.max_backtracks; ++bt) {
      candidate = project_feasible(a + step * grad, scatter, cfg.max_projection_rounds);
      f_new = objective.value(candidate);
      if (f_new >= f) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    result.iterations = it;
    if (!accepted) {
      // No ascent at any tried step length: stationary to working precision.
      result.converged = true;
      break;
    }
    const double rel = (f_new - f) / std::max(std::abs(f), std::numeric_limits<double>::min());
    a = std::move(candidate);
    f = objective.value_and_gradient(a, grad);
    result.trace.push_back({it, f, constraint_value(a, scatter), step});
    if (rel < cfg.tol) {
      result.converged = true;
      break;
    }
  }
  result.a = std::move(a);
  return result;
}

MmcEvaluation mmc_evaluate(const LabeledDataset& data, const Matrix& a) {
  const PairCounts c = pair_counts(data);
  if (c.n_plus == 0) throw Error(ErrorCode::kNoPositivePairs, "MMC evaluation needs n_+ >= 1");
  if (c.n_minus == 0) throw Error(ErrorCode::kNoNegativePairs, "MMC evaluation needs n_- >= 1");
  if (a.rows() != static_cast<Eigen::Index>(data.dim()) || a.cols() != a.rows()) {
    throw Error(ErrorCode::kInvalidInput, "matrix size does not match feature dimension");
  }
  MmcConfig full;
  const MmcObjective objective(data, make_terms(data, full, c));
  return {objective.value(a), constraint_value(a, positive_scatter(data, c.n_plus))};
}

void write_trace_csv(std::ostream& os, const std::vector<MmcIteration>& trace) {
  os << "iter,objective,constraint,step_size\n";
  os.precision(17);
  for (const auto& t : trace) {
    os << t.iter << ',' << t.objective << ',' << t.constraint << ',' << t.step_size << '\n';
  }
}

}  // namespace simroc
