#include "simroc/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "simroc/errors.hpp"

namespace simroc {

RocCurve::RocCurve(std::vector<RocPoint> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw Error(ErrorCode::kInvalidInput, "ROC curve needs two points");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (points_[i].fpr < points_[i - 1].fpr || points_[i].tpr < points_[i - 1].tpr) {
      throw Error(ErrorCode::kInvalidInput, "ROC points must be non-decreasing");
    }
  }
}

double RocCurve::area() const noexcept {
  double auc = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    auc += (points_[i].fpr - points_[i - 1].fpr) * 0.5 * (points_[i].tpr + points_[i - 1].tpr);
  }
  return auc;
}

RocCurve empirical_roc(std::span<const double> scores, std::span<const int> pair_labels) {
  if (scores.size() != pair_labels.size()) {
    throw Error(ErrorCode::kInvalidInput, "scores and labels differ in length");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t l, std::size_t r) { return scores[l] > scores[r]; });
  double n_pos = 0.0, n_neg = 0.0;
  for (int z : pair_labels) {
    if (z == 1) n_pos += 1.0;
    else if (z == -1) n_neg += 1.0;
    else throw Error(ErrorCode::kInvalidInput, "pair labels must be +1 or -1");
  }
  if (n_pos == 0.0 || n_neg == 0.0) {
    throw Error(ErrorCode::kInvalidInput, "ROC needs both positive and negative pairs");
  }
  // Walking scores downward: after consuming every score > v, the counts give
  // the point for threshold v.
  std::vector<RocPoint> pts{{0.0, 0.0}};
  double pos = 0.0, neg = 0.0;
  std::size_t k = 0;
  while (k < order.size()) {
    const double v = scores[order[k]];
    while (k < order.size() && scores[order[k]] == v) {
      (pair_labels[order[k]] == 1 ? pos : neg) += 1.0;
      ++k;
    }
    pts.push_back({neg / n_neg, pos / n_pos});
  }
  return RocCurve(std::move(pts));
}

double roc_at(const RocCurve& curve, double alpha) {
  const auto& pts = curve.points();
  if (alpha <= pts.front().fpr) {
    double best = pts.front().tpr;
    for (const auto& p : pts) {
      if (p.fpr <= alpha) best = std::max(best, p.tpr);
    }
    return best;
  }
  if (alpha >= pts.back().fpr) return pts.back().tpr;
  // Last point with fpr <= alpha (top of any vertical run), then the next.
  const auto next = std::upper_bound(pts.begin(), pts.end(), alpha,
                                     [](double a, const RocPoint& p) { return a < p.fpr; });
  const RocPoint& hi = *next;
  const RocPoint& lo = *(next - 1);
  if (lo.fpr == alpha || hi.fpr == lo.fpr) return lo.tpr;
  const double w = (alpha - lo.fpr) / (hi.fpr - lo.fpr);
  return lo.tpr + w * (hi.tpr - lo.tpr);
}

double empirical_quantile(std::span<const double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::kInvalidInput, "quantile of an empty sample");
  if (!(q > 0.0 && q < 1.0)) throw Error(ErrorCode::kInvalidInput, "quantile level must lie in (0,1)");
  std::vector<double> sorted(values.begin(), values.end());
  const auto r = static_cast<double>(sorted.size());
  // The small slack keeps q R = 9.000000000000002 from rounding up to 10.
  auto rank = static_cast<std::size_t>(std::ceil(q * r - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1), sorted.end());
  return sorted[rank - 1];
}

nlohmann::json to_json(const RateFit& f) {
  return {{"exponent", f.exponent}, {"intercept", f.intercept}, {"r2", f.r_squared}};
}

namespace {

RateFit least_squares(const std::vector<double>& lx, const std::vector<double>& ly) {
  const std::size_t k = lx.size();
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(k);
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::kInvalidInput, "rate fit needs distinct sample sizes");
  RateFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double e = ly[i] - (fit.intercept + fit.exponent * lx[i]);
    sse += e * e;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  return fit;
}

std::vector<double> log_sizes(std::span<const double> ns, std::span<const double> quantiles) {
  if (ns.size() != quantiles.size() || ns.size() < 2) {
    throw Error(ErrorCode::kInvalidInput, "rate fit needs >= 2 matching (n, quantile) points");
  }
  std::vector<double> lx;
  for (double n : ns) {
    if (!(n > 0.0)) throw Error(ErrorCode::kInvalidInput, "sample sizes must be positive");
    lx.push_back(std::log(n));
  }
  return lx;
}

}  // namespace

RateFit fit_rate(std::span<const double> ns, std::span<const double> quantiles) {
  const auto lx = log_sizes(ns, quantiles);
  std::vector<double> ly;
  for (double q : quantiles) {
    if (!(q > 0.0)) throw Error(ErrorCode::kInvalidInput, "non-positive quantile cannot be log-transformed");
    ly.push_back(std::log(q));
  }
  return least_squares(lx, ly);
}

RateFit fit_rate_semilog(std::span<const double> ns, std::span<const double> quantiles) {
  const auto lx = log_sizes(ns, quantiles);
  return least_squares(lx, std::vector<double>(quantiles.begin(), quantiles.end()));
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return v[l] < v[r]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double rank_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::kInvalidInput, "rank correlation needs >= 2 paired values");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

OptimalRoc optimal_threshold_roc(const FastRatesParams& p) {
  double lo = 0.0, hi = 1.0;
  if (analytic_risks_threshold(hi, p).r_minus <= p.alpha) {
    return {1.0, analytic_risks_threshold(1.0, p).r_plus};
  }
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (analytic_risks_threshold(mid, p).r_minus <= p.alpha ? lo : hi) = mid;
  }
  return {lo, analytic_risks_threshold(lo, p).r_plus};
}

void write_roc_csv(std::ostream& os, const RocCurve& curve) {
  os << "fpr,tpr\n";
  os.precision(17);
  for (const auto& p : curve.points()) os << p.fpr << ',' << p.tpr << '\n';
}

}  // namespace simroc
