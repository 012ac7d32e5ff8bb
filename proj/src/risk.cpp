#include "simroc/risk.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "simroc/errors.hpp"
#include "simroc/rng.hpp"

namespace simroc {

const char* to_string(RiskScheme s) noexcept {
  switch (s) {
    case RiskScheme::kCompletePositive: return "complete-positive";
    case RiskScheme::kCompleteNegative: return "complete-negative";
    case RiskScheme::kPairSampled: return "pair-sampled";
    case RiskScheme::kTupleSampled: return "tuple-sampled";
  }
  return "?";
}

nlohmann::json to_json(const RiskEstimate& r) {
  nlohmann::json j;
  j["scheme"] = to_string(r.scheme);
  j["value"] = r.value;
  j["budget"] = r.budget ? nlohmann::json(*r.budget) : nlohmann::json(nullptr);
  j["pairs_used"] = r.pairs_used;
  j["seed"] = r.seed ? nlohmann::json(*r.seed) : nlohmann::json(nullptr);
  return j;
}

namespace {

// Sum of S over pairs i < j whose same-label status equals `same`. One
// partial sum per row i, then the row sums in index order.
double pair_sum(const LabeledDataset& data, const PairScoreFn& s, bool same) {
  const std::size_t n = data.size();
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double row = 0.0;
    const ConstVec xi = data.row(i);
    const int yi = data.class_of(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      if ((data.class_of(j) == yi) == same) row += s(xi, data.row(j));
    }
    total += row;
  }
  return total;
}

}  // namespace

RiskEstimate positive_risk_complete(const LabeledDataset& data, const PairScoreFn& s) {
  const PairCounts c = pair_counts(data);
  if (c.n_plus == 0) {
    throw Error(ErrorCode::kNoPositivePairs, "positive risk needs n_+ >= 1");
  }
  RiskEstimate r;
  r.scheme = RiskScheme::kCompletePositive;
  r.value = pair_sum(data, s, true) / static_cast<double>(c.n_plus);
  r.pairs_used = c.n_plus;
  return r;
}

RiskEstimate negative_risk_complete(const LabeledDataset& data, const PairScoreFn& s) {
  const PairCounts c = pair_counts(data);
  if (c.n_minus == 0) {
    throw Error(ErrorCode::kNoNegativePairs, "negative risk needs n_- >= 1");
  }
  RiskEstimate r;
  r.scheme = RiskScheme::kCompleteNegative;
  r.value = pair_sum(data, s, false) / static_cast<double>(c.n_minus);
  r.pairs_used = c.n_minus;
  return r;
}

RiskEstimate positive_risk_complete(const LabeledDataset& data, const SimilarityModel& m) {
  return positive_risk_complete(data, scorer(m));
}

RiskEstimate negative_risk_complete(const LabeledDataset& data, const SimilarityModel& m) {
  return negative_risk_complete(data, scorer(m));
}

NegativePairSampler::NegativePairSampler(const LabeledDataset& data)
    : index_(data.class_index()) {
  const auto& counts = data.class_counts();
  const int K = data.num_classes();
  for (int k = 0; k < K; ++k) {
    for (int l = k + 1; l < K; ++l) {
      const std::uint64_t w = static_cast<std::uint64_t>(counts[k]) * counts[l];
      if (w == 0) continue;
      n_minus_ += w;
      pairs_.emplace_back(k, l);
      cumulative_.push_back(n_minus_);
    }
  }
  if (n_minus_ == 0) {
    throw Error(ErrorCode::kNoNegativePairs, "no negative pairs to sample");
  }
}

RiskEstimate negative_risk_pair_sampled(const LabeledDataset& data, const PairScoreFn& s,
                                        std::uint64_t budget, std::uint64_t seed) {
  if (budget == 0) throw Error(ErrorCode::kInvalidInput, "budget B must be >= 1");
  const NegativePairSampler sample(data);
  CounterRng rng(seed);
  double total = 0.0;
  for (std::uint64_t b = 0; b < budget; ++b) {
    const auto [i, j] = sample(rng);
    total += s(data.row(i), data.row(j));
  }
  RiskEstimate r;
  r.scheme = RiskScheme::kPairSampled;
  r.value = total / static_cast<double>(budget);
  r.budget = budget;
  r.pairs_used = budget;
  r.seed = seed;
  return r;
}

RiskEstimate negative_risk_pair_sampled(const LabeledDataset& data, const SimilarityModel& m,
                                        std::uint64_t budget, std::uint64_t seed) {
  return negative_risk_pair_sampled(data, scorer(m), budget, seed);
}

double tuple_kernel(std::span<const ConstVec> xs, const PairScoreFn& s,
                    std::span<const std::size_t> class_counts) {
  if (xs.size() != class_counts.size() || xs.size() < 2) {
    throw Error(ErrorCode::kInvalidInput,
                "tuple kernel needs one vector per class (K = " +
                    std::to_string(class_counts.size()) + ", got " +
                    std::to_string(xs.size()) + ")");
  }
  const std::size_t K = xs.size();
  double weighted = 0.0;
  double n_minus = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t l = k + 1; l < K; ++l) {
      const double w = static_cast<double>(class_counts[k]) * static_cast<double>(class_counts[l]);
      n_minus += w;
      weighted += w * s(xs[k], xs[l]);
    }
  }
  if (n_minus <= 0.0) throw Error(ErrorCode::kNoNegativePairs, "tuple kernel: n_- = 0");
  return weighted / n_minus;
}

double tuple_kernel(std::span<const ConstVec> xs, const SimilarityModel& m,
                    std::span<const std::size_t> class_counts) {
  return tuple_kernel(xs, scorer(m), class_counts);
}

namespace {

void require_nonempty_classes(const LabeledDataset& data) {
  if (data.num_classes() < 2 || !data.all_classes_nonempty()) {
    throw Error(ErrorCode::kEmptyClass,
                "tuple sampling needs K >= 2 nonempty classes");
  }
}

// Draws one K-tuple (one uniform member per class) into `rows`.
void draw_tuple(const LabeledDataset& data, CounterRng& rng, std::vector<ConstVec>& rows) {
  const auto& index = data.class_index();
  rows.resize(index.size());
  for (std::size_t k = 0; k < index.size(); ++k) {
    rows[k] = data.row(index[k][rng.below(index[k].size())]);
  }
}

}  // namespace

RiskEstimate negative_risk_tuple_sampled(const LabeledDataset& data, const PairScoreFn& s,
                                         std::uint64_t budget, std::uint64_t seed) {
  require_nonempty_classes(data);
  if (budget == 0) throw Error(ErrorCode::kInvalidInput, "budget B must be >= 1");
  const auto& counts = data.class_counts();
  CounterRng rng(seed);
  std::vector<ConstVec> rows;
  double total = 0.0;
  for (std::uint64_t b = 0; b < budget; ++b) {
    draw_tuple(data, rng, rows);
    total += tuple_kernel(rows, s, counts);
  }
  const auto K = static_cast<std::uint64_t>(data.num_classes());
  RiskEstimate r;
  r.scheme = RiskScheme::kTupleSampled;
  r.value = total / static_cast<double>(budget);
  r.budget = budget;
  r.pairs_used = budget * K * (K - 1) / 2;
  r.seed = seed;
  return r;
}

RiskEstimate negative_risk_tuple_sampled(const LabeledDataset& data, const SimilarityModel& m,
                                         std::uint64_t budget, std::uint64_t seed) {
  return negative_risk_tuple_sampled(data, scorer(m), budget, seed);
}

namespace {

double plugin_variance(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size());
}

}  // namespace

VarianceComponents variance_components(const LabeledDataset& data, const PairScoreFn& s,
                                       std::uint64_t n_mc, std::uint64_t seed) {
  if (n_mc < 2) throw Error(ErrorCode::kInvalidInput, "n_mc must be >= 2");
  require_nonempty_classes(data);
  const CounterRng root(seed);
  CounterRng tuple_rng = root.split(1);
  CounterRng pair_rng = root.split(2);
  const NegativePairSampler sample(data);

  std::vector<double> h(n_mc), pairs(n_mc);
  std::vector<ConstVec> rows;
  for (std::uint64_t r = 0; r < n_mc; ++r) {
    draw_tuple(data, tuple_rng, rows);
    h[r] = tuple_kernel(rows, s, data.class_counts());
    const auto [i, j] = sample(pair_rng);
    pairs[r] = s(data.row(i), data.row(j));
  }
  return {plugin_variance(h), plugin_variance(pairs)};
}

VarianceComponents variance_components(const LabeledDataset& data, const SimilarityModel& m,
                                       std::uint64_t n_mc, std::uint64_t seed) {
  return variance_components(data, scorer(m), n_mc, seed);
}

void validate(const ToleranceConfig& cfg) {
  if (!(cfg.vc_dim > 0.0)) throw Error(ErrorCode::kInvalidInput, "VC dimension must be > 0");
  if (!(cfg.kappa > 0.0 && cfg.kappa < 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "kappa must lie in (0,1)");
  }
  if (!(cfg.universal_c > 0.0)) throw Error(ErrorCode::kInvalidInput, "C must be > 0");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "delta must lie in (0,1)");
  }
}

bool kappa_condition_holds(const LabeledDataset& data, const ToleranceConfig& cfg) {
  const double n = static_cast<double>(data.size());
  double sum_sq = 0.0;
  for (std::size_t c : data.class_counts()) sum_sq += (c / n) * (c / n);
  return cfg.kappa <= sum_sq && sum_sq <= 1.0 - cfg.kappa;
}

double tolerance_slow(std::uint64_t n, const ToleranceConfig& cfg) {
  validate(cfg);
  if (n <= 1) throw Error(ErrorCode::kInvalidInput, "tolerance needs n > 1");
  const double inv_kappa = 1.0 / cfg.kappa;
  const double nd = static_cast<double>(n);
  return 2.0 * cfg.universal_c * inv_kappa * std::sqrt(cfg.vc_dim / nd) +
         2.0 * inv_kappa * (1.0 + inv_kappa) * std::sqrt(std::log(3.0 / cfg.delta) / (nd - 1.0));
}

double tolerance_incomplete(std::span<const std::size_t> class_counts, std::uint64_t budget,
                            const ToleranceConfig& cfg) {
  validate(cfg);
  if (class_counts.empty()) throw Error(ErrorCode::kEmptyClass, "no classes");
  if (budget == 0) throw Error(ErrorCode::kInvalidInput, "budget B must be >= 1");
  double log_prod = 0.0;
  std::size_t min_count = class_counts.front();
  for (std::size_t c : class_counts) {
    if (c == 0) throw Error(ErrorCode::kEmptyClass, "tolerance needs all n_k >= 1");
    log_prod += std::log(static_cast<double>(c));
    min_count = std::min(min_count, c);
  }
  // log(1 + prod n_k) without forming the product.
  const double log1p_prod = log_prod + std::log1p(std::exp(-log_prod));
  const double N = static_cast<double>(min_count);
  const double V = cfg.vc_dim;
  return 4.0 * std::sqrt(V * std::log1p(N) / N) + std::sqrt(std::log(2.0 / cfg.delta) / N) +
         std::sqrt(2.0 * (V * log1p_prod + std::log(4.0 / cfg.delta)) /
                   static_cast<double>(budget));
}

}  // namespace simroc
