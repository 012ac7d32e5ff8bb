#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "simroc/risk.hpp"
#include "simroc/solvers.hpp"
#include "simroc/synth.hpp"

namespace simroc {

enum class ExperimentKind { kSphereRoc, kFastRates, kMmcSubsample };

const char* to_string(ExperimentKind k) noexcept;

struct SphereRocConfig {
  std::size_t n = 300;
  std::vector<double> alphas{0.32, 0.4, 0.5};
};

struct FastRatesConfig {
  double alpha = 0.26;
  double m = 0.35;
  std::vector<double> a_values{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<std::size_t> n_values{64, 128, 256, 512};
  std::size_t repetitions = 1000;
  double quantile = 0.9;
};

/// One budget entry: a fraction of n (tuples B = round(fraction * n)) or
/// the complete negative statistic.
struct BudgetSpec {
  std::optional<double> fraction;  // empty = full
  bool full() const noexcept { return !fraction.has_value(); }
  std::string label() const;
};

struct MnistSource {
  std::filesystem::path train_images, train_labels, test_images, test_labels;
  double pca_explained = 0.9;
};

struct MmcExperimentConfig {
  std::string source = "synthetic";  // "synthetic" or "mnist"
  MixtureParams mixture;
  std::optional<MnistSource> mnist;
  std::vector<std::size_t> n_values{2000};
  std::vector<BudgetSpec> budgets{{0.05}, {0.15}, {std::nullopt}};
  std::size_t runs = 5;
  std::size_t n_test = 2000;
  MmcConfig solver;
  bool write_traces = false;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kSphereRoc;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "rocsim-out";
  unsigned workers = 1;
  ToleranceConfig tolerance{1.0, 0.1, 1.0, 0.1};
  std::optional<double> vc_dim_override;
  SphereRocConfig sphere;
  FastRatesConfig fast_rates;
  MmcExperimentConfig mmc;
};

/// Parses and validates; throws Error(kInvalidInput) listing every problem.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Problems found in a config document (empty = valid).
std::vector<std::string> validate_config(const nlohmann::json& j);

nlohmann::json to_json(const ExperimentConfig& c);

/// seed XOR FNV-1a(cell key); independent per (experiment, parameters,
/// repetition) and stable across worker counts.
std::uint64_t derive_seed(std::uint64_t seed, const std::string& key);

struct ArtifactBundle {
  std::filesystem::path output_dir;
  std::vector<std::filesystem::path> files;
  nlohmann::json metadata;
  bool ok = true;
  std::vector<std::string> errors;
};

/// Runs the configured study and writes CSV tables plus run.json to
/// output_dir. Failed cells are recorded, the bundle is flagged partial.
ArtifactBundle run_experiment(const ExperimentConfig& config);

/// Shortest %g form that parses back to the same double.
std::string format_double(double v);

}  // namespace simroc
