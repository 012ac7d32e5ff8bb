#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "simroc/core.hpp"

namespace simroc {

enum class RiskScheme { kCompletePositive, kCompleteNegative, kPairSampled, kTupleSampled };

const char* to_string(RiskScheme s) noexcept;

struct RiskEstimate {
  double value = 0.0;
  RiskScheme scheme = RiskScheme::kCompletePositive;
  std::optional<std::uint64_t> budget;  // B, sampled schemes only
  std::uint64_t pairs_used = 0;
  std::optional<std::uint64_t> seed;    // sampled schemes only
};

nlohmann::json to_json(const RiskEstimate& r);

// Complete U-statistics. Sums run over i < j in a fixed chunked pairwise
// order, so results are bit-reproducible.
RiskEstimate positive_risk_complete(const LabeledDataset& data, const PairScoreFn& s);
RiskEstimate positive_risk_complete(const LabeledDataset& data, const SimilarityModel& m);
RiskEstimate negative_risk_complete(const LabeledDataset& data, const PairScoreFn& s);
RiskEstimate negative_risk_complete(const LabeledDataset& data, const SimilarityModel& m);

/// Samples negative pairs with replacement: draw the class pair (k, l) with
/// probability n_k n_l / n_-, then one member of each class uniformly. This
/// is the uniform distribution on negative pairs without materializing it.
class NegativePairSampler {
 public:
  explicit NegativePairSampler(const LabeledDataset& data);

  template <class Rng>
  std::pair<std::size_t, std::size_t> operator()(Rng& rng) const {
    const std::uint64_t u = rng.below(n_minus_);
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto p = static_cast<std::size_t>(it - cumulative_.begin());
    const auto& ik = index_[pairs_[p].first];
    const auto& il = index_[pairs_[p].second];
    return {ik[rng.below(ik.size())], il[rng.below(il.size())]};
  }

  std::uint64_t n_minus() const noexcept { return n_minus_; }

 private:
  const std::vector<std::vector<std::size_t>>& index_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<std::uint64_t> cumulative_;
  std::uint64_t n_minus_ = 0;
};

/// R-bar^-_B: mean score over B negative pairs drawn with replacement.
RiskEstimate negative_risk_pair_sampled(const LabeledDataset& data, const PairScoreFn& s,
                                        std::uint64_t budget, std::uint64_t seed);
RiskEstimate negative_risk_pair_sampled(const LabeledDataset& data, const SimilarityModel& m,
                                        std::uint64_t budget, std::uint64_t seed);

/// h_S(x_1..x_K) = (1/n_-) sum_{k<l} n_k n_l S(x_k, x_l).
double tuple_kernel(std::span<const ConstVec> xs, const PairScoreFn& s,
                    std::span<const std::size_t> class_counts);
double tuple_kernel(std::span<const ConstVec> xs, const SimilarityModel& m,
                    std::span<const std::size_t> class_counts);

/// R-tilde^-_B: mean of h_S over B K-tuples (one member per class) drawn
/// with replacement.
RiskEstimate negative_risk_tuple_sampled(const LabeledDataset& data, const PairScoreFn& s,
                                         std::uint64_t budget, std::uint64_t seed);
RiskEstimate negative_risk_tuple_sampled(const LabeledDataset& data, const SimilarityModel& m,
                                         std::uint64_t budget, std::uint64_t seed);

struct VarianceComponents {
  double var_h = 0.0;         // Var h_S(X^(1), ..., X^(K))
  double var_neg_pair = 0.0;  // Var(S(X, X') | Y != Y')

  /// Asymptotic excess variance over the complete statistic for a budget of
  /// b0 sampled pairs in each scheme.
  double tuple_excess(int num_classes, double b0) const noexcept {
    return num_classes * (num_classes - 1) / (2.0 * b0) * var_h;
  }
  double pair_excess(double b0) const noexcept { return var_neg_pair / b0; }
  bool prefer_tuples(int num_classes) const noexcept {
    return tuple_excess(num_classes, 1.0) < pair_excess(1.0);
  }
};

/// Plug-in variances (1/n_mc normalization) over n_mc resampled tuples and
/// n_mc resampled negative pairs.
VarianceComponents variance_components(const LabeledDataset& data, const PairScoreFn& s,
                                       std::uint64_t n_mc, std::uint64_t seed);
VarianceComponents variance_components(const LabeledDataset& data, const SimilarityModel& m,
                                       std::uint64_t n_mc, std::uint64_t seed);

struct ToleranceConfig {
  double vc_dim = 1.0;
  double kappa = 0.5;
  double universal_c = 1.0;
  double delta = 0.1;
};

void validate(const ToleranceConfig& cfg);

/// Checks kappa <= sum_k phat_k^2 <= 1 - kappa on the dataset.
bool kappa_condition_holds(const LabeledDataset& data, const ToleranceConfig& cfg);

/// Phi_{n,delta} = 2 C/kappa sqrt(V/n) + 2/kappa (1 + 1/kappa) sqrt(log(3/delta)/(n-1)).
double tolerance_slow(std::uint64_t n, const ToleranceConfig& cfg);

/// Phi_{n,delta,B} = 4 sqrt(V log(1+N)/N) + sqrt(log(2/delta)/N)
///                 + sqrt(2 (V log(1 + prod n_k) + log(4/delta)) / B),  N = min n_k.
double tolerance_incomplete(std::span<const std::size_t> class_counts, std::uint64_t budget,
                            const ToleranceConfig& cfg);

}  // namespace simroc
