#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "simroc/core.hpp"

namespace simroc {

// ---------------------------------------------------------------------------
// Three classes on the unit sphere of R^3, uniform on spherical caps.
// ---------------------------------------------------------------------------

struct SphereParams {
  std::array<Eigen::Vector3d, 3> centroids;
  double cap_half_angle;
  std::array<double, 3> class_probs;

  /// c1 = (cos pi/3, sin pi/3, 0), c2 = e2, c3 = e3, half-angle pi/4,
  /// equiprobable classes.
  static SphereParams standard();
  void validate() const;
};

nlohmann::json to_json(const SphereParams& p);

/// Class drawn from class_probs, then a point uniform (surface measure) on
/// the cap around its centroid.
LabeledDataset sample_sphere(const SphereParams& params, std::size_t n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Fast-rates problem: X uniform on [0,1], K = 2, p1 = p2 = 1/2, class-1
// density mu1 with a plateau 2C on [0, m] and a curved part around 1/2
// controlled by the noise exponent a. C is set so that Q*_alpha = 1/2.
// ---------------------------------------------------------------------------

/// C = 1/2 - sqrt(1 - 2 alpha)/(4m) + a (1-2m)^{1/a} / (4m).
/// Throws kParameterDomain unless alpha < 1/2, m, a in range and 0 < C < 1/2.
double fast_rates_C(double alpha, double m, double a);

struct FastRatesParams {
  double alpha = 0.26;
  double m = 0.35;
  double a = 0.5;
  double c = 0.0;
  double q_star = 0.5;

  /// Parameters with C from fast_rates_C.
  static FastRatesParams make(double alpha, double m, double a);
  /// Parameters with an explicit plateau height (sensitivity checks).
  static FastRatesParams with_plateau(double alpha, double m, double a, double c);
};

nlohmann::json to_json(const FastRatesParams& p);

/// Class-1 density. Extended to (1/2, 1] by mu1(x) = 2 - mu1(1 - x).
double mu1(double x, const FastRatesParams& p);

/// G(x) = integral_0^x (mu1(u) - 1) du in closed form; G(x) = G(1-x).
double mu1_centered_integral(double x, const FastRatesParams& p);

/// Integral of mu1 over [0,1] by adaptive quadrature (should be 1).
double mu1_mass(const FastRatesParams& p);

LabeledDataset sample_fast_rates(const FastRatesParams& p, std::size_t n, std::uint64_t seed);

/// eta(x, x') = 1/2 + (mu1(x) - 1)(mu1(x') - 1)/2.
double eta_pair(double x, double x_prime, const FastRatesParams& p);

struct ThresholdRisks {
  double r_plus = 0.0;
  double r_minus = 0.0;
};

/// R+(S_t) = lambda(S_t) + J(t), R-(S_t) = lambda(S_t) - J(t) with
/// J(t) = integral over S_t of (mu1(x)-1)(mu1(x')-1).
ThresholdRisks analytic_risks_threshold(double t, const FastRatesParams& p);

/// |integral over {eta > 1/2} of (1 - eta) - alpha/2| by 2-D quadrature.
double check_quantile_condition(const FastRatesParams& p);

struct NoisePoint {
  double t;
  double prob;
};

/// Monte-Carlo estimate of P(|eta(X,X') - Q*| <= t) over uniform pairs.
std::vector<NoisePoint> noise_distribution(const FastRatesParams& p, std::span<const double> t_grid,
                                           std::uint64_t n_mc, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Gaussian class mixture used as a desk-scale stand-in for image data.
// ---------------------------------------------------------------------------

struct MixtureParams {
  int num_classes = 5;
  int dim = 5;
  double mean_spread = 1.5;   // class means ~ N(0, spread^2 I)
  double noise_min = 0.25;    // per-axis noise std, geometric from min to max
  double noise_max = 2.5;
  std::uint64_t layout_seed = 0;  // fixes the class means

  void validate() const;
  Matrix class_means() const;  // dim x num_classes
};

nlohmann::json to_json(const MixtureParams& p);

/// Equiprobable classes; x = mean_k + diag(noise) z, z standard normal.
LabeledDataset sample_gaussian_mixture(const MixtureParams& p, std::size_t n, std::uint64_t seed);

}  // namespace simroc
