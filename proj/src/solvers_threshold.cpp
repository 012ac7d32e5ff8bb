#include <algorithm>
#include <vector>

#include "simroc/errors.hpp"
#include "simroc/solvers.hpp"

namespace simroc {

ThresholdScanResult solve_threshold_scan(const LabeledDataset& data, double alpha) {
  if (data.dim() != 1) throw Error(ErrorCode::kInvalidInput, "threshold scan needs scalar features");
  const PairCounts c = pair_counts(data);
  if (c.n_plus == 0) throw Error(ErrorCode::kNoPositivePairs, "threshold scan needs n_+ >= 1");
  if (c.n_minus == 0) throw Error(ErrorCode::kNoNegativePairs, "threshold scan needs n_- >= 1");
  const std::size_t n = data.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double x = data.scalar(i);
    if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorCode::kInvalidInput, "features must lie in [0,1]");
  }

  struct Entry {
    double stat;
    bool positive;
  };
  std::vector<Entry> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      pairs.push_back({pair_statistic(data.scalar(i), data.scalar(j)),
                       data.class_of(i) == data.class_of(j)});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Entry& l, const Entry& r) {
    return l.stat < r.stat || (l.stat == r.stat && l.positive < r.positive);
  });
  std::vector<double> stats(pairs.size());
  std::vector<std::uint64_t> pos_prefix(pairs.size() + 1, 0);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    stats[k] = pairs[k].stat;
    pos_prefix[k + 1] = pos_prefix[k] + (pairs[k].positive ? 1 : 0);
  }

  const double n_plus = static_cast<double>(c.n_plus);
  const double n_minus = static_cast<double>(c.n_minus);
  bool have_best = false;
  std::uint64_t best_pos = 0;
  ThresholdScanResult best;

  // The set {S < t} contains the first lower_bound(t) sorted statistics.
  auto consider = [&](double t) {
    const auto k = static_cast<std::size_t>(
        std::lower_bound(stats.begin(), stats.end(), t) - stats.begin());
    const std::uint64_t pos = pos_prefix[k];
    const std::uint64_t neg = k - pos;
    const double r_minus = static_cast<double>(neg) / n_minus;
    if (!(r_minus <= alpha)) return;
    if (!have_best || pos > best_pos) {
      have_best = true;
      best_pos = pos;
      best.t_hat = t;
      best.r_plus_emp = static_cast<double>(pos) / n_plus;
      best.r_minus_emp = r_minus;
      best.degenerate = (k == 0);
    }
  };

  consider(0.0);
  for (std::size_t k = 1; k < stats.size(); ++k) consider(0.5 * (stats[k - 1] + stats[k]));
  consider(1.0);

  if (!have_best) {
    best = ThresholdScanResult{0.0, 0.0, 0.0, true};
  }
  return best;
}

}  // namespace simroc
