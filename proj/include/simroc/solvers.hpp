#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "simroc/core.hpp"

namespace simroc {

// ---------------------------------------------------------------------------
// Bilinear family: max <P,A> s.t. <N,A> <= beta, <A,A> <= 1, beta = 2 alpha - 1.
// ---------------------------------------------------------------------------

struct PairMoments {
  Matrix p;  // (1/2n_+) sum_{i<j, same}  x_i x_j^T + x_j x_i^T
  Matrix n;  // (1/2n_-) sum_{i<j, diff}  x_i x_j^T + x_j x_i^T
};

PairMoments compute_P_N(const LabeledDataset& data);

enum class KktCase { kZeroP, kColinear, kInterior, kBoundary };

const char* to_string(KktCase c) noexcept;

struct KktSolution {
  Matrix a;
  double lambda = 0.0;
  double gamma = 0.0;
  KktCase case_tag = KktCase::kInterior;
  double beta = 0.0;

  double objective(const Matrix& p) const { return (p.array() * a.array()).sum(); }
};

/// Closed-form KKT solution. Degenerate cases (zero P, colinear P and N)
/// return the feasible minimizer of ||A||_F among optimal points.
/// Throws kInfeasible when beta < -||N||_F and kNumerical when no root of
/// the boundary equation satisfies the sign conditions.
KktSolution solve_bilinear_kkt(const Matrix& p, const Matrix& n, double alpha);

struct KktResiduals {
  double stationarity = 0.0;  // ||-P + lambda N + 2 gamma A||_F
  double feas_n = 0.0;        // max(0, <N,A> - beta)
  double feas_norm = 0.0;     // max(0, <A,A> - 1)
  double cs_lambda = 0.0;     // |lambda (<N,A> - beta)|
  double cs_gamma = 0.0;      // |gamma (<A,A> - 1)|
};

KktResiduals kkt_residuals(const KktSolution& sol, const Matrix& p, const Matrix& n);

// ---------------------------------------------------------------------------
// Threshold family S_t on [0,1].
// ---------------------------------------------------------------------------

struct ThresholdScanResult {
  double t_hat = 0.0;
  double r_plus_emp = 0.0;
  double r_minus_emp = 0.0;
  bool degenerate = false;  // selected set is empty
};

/// Exact solution of the empirical problem over S_t with Phi = 0 in
/// O(n^2 log n). Candidates: 0, midpoints of consecutive sorted pair
/// statistics, 1. Maximizes R+ under R- <= alpha; ties go to the smallest t.
ThresholdScanResult solve_threshold_scan(const LabeledDataset& data, double alpha);

// ---------------------------------------------------------------------------
// MMC: max mean_{neg} d_A  s.t.  mean_{pos} d_A^2 <= 1, A PSD.
// ---------------------------------------------------------------------------

enum class MmcInit { kScaledIdentity, kZero };

struct MmcConfig {
  double step_size = 1e-2;
  std::uint64_t max_iters = 2000;
  double tol = 1e-6;
  std::optional<std::uint64_t> tuple_budget;
  std::uint64_t seed = 0;
  MmcInit init = MmcInit::kScaledIdentity;
  int max_projection_rounds = 20;
  int max_backtracks = 30;
};

void validate(const MmcConfig& cfg);

struct MmcIteration {
  std::uint64_t iter = 0;
  double objective = 0.0;
  double constraint = 0.0;
  double step_size = 0.0;
};

struct MmcResult {
  Matrix a;
  std::vector<MmcIteration> trace;  // accepted iterates, iter 0 = start
  bool converged = false;
  std::uint64_t iterations = 0;
  std::uint64_t negative_pairs_per_eval = 0;
  std::uint64_t positive_pairs = 0;
};

/// Projected gradient ascent. With tuple_budget set, the negative mean is
/// replaced once per run by its tuple-sampled incomplete version.
MmcResult mmc_projected_gradient(const LabeledDataset& data, const MmcConfig& cfg);

/// Full-pair MMC objective and positive constraint of A on a dataset.
struct MmcEvaluation {
  double objective = 0.0;
  double constraint = 0.0;
};
MmcEvaluation mmc_evaluate(const LabeledDataset& data, const Matrix& a);

/// Writes iter,objective,constraint,step_size.
void write_trace_csv(std::ostream& os, const std::vector<MmcIteration>& trace);

/// Frobenius-nearest PSD matrix: symmetrize, clip eigenvalues at 0.
Matrix psd_project(const Matrix& m);

}  // namespace simroc
