#pragma once

#include <ostream>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "simroc/synth.hpp"

namespace simroc {

struct RocPoint {
  double fpr;
  double tpr;
};

/// Piecewise-linear ROC curve from (0,0) to (1,1). Points are ordered by
/// threshold, so fpr and tpr are both non-decreasing; equal-fpr runs are
/// vertical jumps.
class RocCurve {
 public:
  explicit RocCurve(std::vector<RocPoint> points);

  const std::vector<RocPoint>& points() const noexcept { return points_; }
  double area() const noexcept;

 private:
  std::vector<RocPoint> points_;
};

/// Empirical ROC of scores against pair labels (+1/-1). One point per
/// distinct score v: (share of negatives with score > v, share of
/// positives with score > v), plus (1,1).
RocCurve empirical_roc(std::span<const double> scores, std::span<const int> pair_labels);

/// Linear interpolation at fpr = alpha, taking the top of any vertical jump
/// located exactly at alpha.
double roc_at(const RocCurve& curve, double alpha);

/// Lower empirical quantile: the ceil(q R)-th order statistic.
double empirical_quantile(std::span<const double> values, double q);

struct RateFit {
  double exponent = 0.0;   // C_a
  double intercept = 0.0;  // D_a
  double r_squared = 0.0;
};

nlohmann::json to_json(const RateFit& f);

/// Least squares of log(quantile) on log(n).
RateFit fit_rate(std::span<const double> ns, std::span<const double> quantiles);

/// Least squares of the raw quantile on log(n). Reported next to fit_rate;
/// quantiles may be of any sign.
RateFit fit_rate_semilog(std::span<const double> ns, std::span<const double> quantiles);

/// Spearman rank correlation (average ranks for ties).
double rank_correlation(std::span<const double> x, std::span<const double> y);

struct OptimalRoc {
  double t_star;
  double roc_star;  // ROC_{S*}(alpha)
};

/// Largest analytic R+(S_t) with R-(S_t) <= alpha, found by bisection on t
/// (R- is non-decreasing in t).
OptimalRoc optimal_threshold_roc(const FastRatesParams& p);

void write_roc_csv(std::ostream& os, const RocCurve& curve);

}  // namespace simroc
