#include "simroc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "simroc/errors.hpp"
#include "simroc/quadrature.hpp"
#include "simroc/rng.hpp"

namespace simroc {

SphereParams SphereParams::standard() {
  using std::numbers::pi;
  SphereParams p;
  p.centroids = {Eigen::Vector3d(std::cos(pi / 3), std::sin(pi / 3), 0.0),
                 Eigen::Vector3d::UnitY(), Eigen::Vector3d::UnitZ()};
  p.cap_half_angle = pi / 4;
  p.class_probs = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  return p;
}

void SphereParams::validate() const {
  for (const auto& c : centroids) {
    if (std::abs(c.norm() - 1.0) > 1e-12) {
      throw Error(ErrorCode::kParameterDomain, "sphere centroids must be unit vectors");
    }
  }
  if (!(cap_half_angle > 0.0 && cap_half_angle < std::numbers::pi / 2)) {
    throw Error(ErrorCode::kParameterDomain, "cap half-angle must lie in (0, pi/2)");
  }
  double total = 0.0;
  for (double q : class_probs) {
    if (!(q >= 0.0)) throw Error(ErrorCode::kParameterDomain, "class probabilities must be >= 0");
    total += q;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::kParameterDomain, "class probabilities must sum to 1");
  }
}

nlohmann::json to_json(const SphereParams& p) {
  nlohmann::json j;
  for (const auto& c : p.centroids) j["centroids"].push_back({c.x(), c.y(), c.z()});
  j["cap_half_angle"] = p.cap_half_angle;
  j["class_probs"] = p.class_probs;
  j["within_cap_density"] = "uniform (surface measure)";
  return j;
}

LabeledDataset sample_sphere(const SphereParams& params, std::size_t n, std::uint64_t seed) {
  params.validate();
  CounterRng rng(seed);
  RowMatrix x(static_cast<Eigen::Index>(n), 3);
  std::vector<int> labels(n);
  const double cos_min = std::cos(params.cap_half_angle);

  // Orthonormal frame (u, v, c) per centroid.
  std::array<Eigen::Matrix3d, 3> frames;
  for (int k = 0; k < 3; ++k) {
    const Eigen::Vector3d& c = params.centroids[k];
    Eigen::Index axis = 0;
    c.cwiseAbs().minCoeff(&axis);
    const Eigen::Vector3d u = c.cross(Eigen::Vector3d::Unit(axis)).normalized();
    frames[k].col(0) = u;
    frames[k].col(1) = c.cross(u);
    frames[k].col(2) = c;
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double r = rng.uniform();
    int k = 0;
    double acc = params.class_probs[0];
    while (k < 2 && r >= acc) acc += params.class_probs[++k];
    // cos(theta) uniform on (cos_min, 1] gives the uniform cap measure.
    const double cos_t = cos_min + (1.0 - cos_min) * (1.0 - rng.uniform());
    const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    const Eigen::Vector3d local(sin_t * std::cos(phi), sin_t * std::sin(phi), cos_t);
    x.row(static_cast<Eigen::Index>(i)) = (frames[k] * local).normalized().transpose();
    labels[i] = k + 1;
  }
  return LabeledDataset(std::move(x), std::move(labels), 3);
}

double fast_rates_C(double alpha, double m, double a) {
  std::ostringstream where;
  where << " (alpha = " << alpha << ", m = " << m << ", a = " << a << ")";
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw Error(ErrorCode::kParameterDomain, "alpha must lie in (0, 1/2)" + where.str());
  }
  if (!(m > 0.0 && m < 0.5)) throw Error(ErrorCode::kParameterDomain, "m must lie in (0, 1/2)" + where.str());
  if (!(a > 0.0 && a < 1.0)) throw Error(ErrorCode::kParameterDomain, "a must lie in (0, 1)" + where.str());
  const double c = 0.5 - std::sqrt(1.0 - 2.0 * alpha) / (4.0 * m) +
                   a * std::pow(1.0 - 2.0 * m, 1.0 / a) / (4.0 * m);
  if (!(c > 0.0 && c < 0.5)) {
    std::ostringstream msg;
    msg << "plateau height C = " << c << " outside (0, 1/2)" << where.str();
    throw Error(ErrorCode::kParameterDomain, msg.str());
  }
  return c;
}

FastRatesParams FastRatesParams::make(double alpha, double m, double a) {
  return FastRatesParams{alpha, m, a, fast_rates_C(alpha, m, a), 0.5};
}

FastRatesParams FastRatesParams::with_plateau(double alpha, double m, double a, double c) {
  if (!(m > 0.0 && m < 0.5 && a > 0.0 && a < 1.0 && c > 0.0 && c < 0.5)) {
    throw Error(ErrorCode::kParameterDomain, "invalid fast-rates parameters");
  }
  return FastRatesParams{alpha, m, a, c, 0.5};
}

nlohmann::json to_json(const FastRatesParams& p) {
  return {{"alpha", p.alpha}, {"m", p.m}, {"a", p.a}, {"C", p.c}, {"q_star", p.q_star}};
}

namespace {

void check_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput, std::string(what) + " must lie in [0,1]");
  }
}

// mu1 on the left half, x in [0, 1/2].
double mu1_left(double x, const FastRatesParams& p) {
  if (x <= p.m) return 2.0 * p.c;
  return 1.0 - std::pow(1.0 - 2.0 * x, (1.0 - p.a) / p.a);
}

double centered_left(double x, const FastRatesParams& p) {
  if (x <= p.m) return (2.0 * p.c - 1.0) * x;
  return (2.0 * p.c - 1.0) * p.m -
         0.5 * p.a * (std::pow(1.0 - 2.0 * p.m, 1.0 / p.a) - std::pow(1.0 - 2.0 * x, 1.0 / p.a));
}

}  // namespace

double mu1(double x, const FastRatesParams& p) {
  check_unit(x, "x");
  return x <= 0.5 ? mu1_left(x, p) : 2.0 - mu1_left(1.0 - x, p);
}

double mu1_centered_integral(double x, const FastRatesParams& p) {
  check_unit(x, "x");
  return x <= 0.5 ? centered_left(x, p) : centered_left(1.0 - x, p);
}

double mu1_mass(const FastRatesParams& p) {
  return integrate([&](double x) { return mu1(x, p); }, 0.0, 1.0, {p.m, 0.5, 1.0 - p.m});
}

LabeledDataset sample_fast_rates(const FastRatesParams& p, std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed);
  RowMatrix x(static_cast<Eigen::Index>(n), 1);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = rng.uniform();
    x(static_cast<Eigen::Index>(i), 0) = xi;
    labels[i] = rng.uniform() < 0.5 * mu1(xi, p) ? 1 : 2;
  }
  return LabeledDataset(std::move(x), std::move(labels), 2);
}

double eta_pair(double x, double x_prime, const FastRatesParams& p) {
  return 0.5 + 0.5 * (mu1(x, p) - 1.0) * (mu1(x_prime, p) - 1.0);
}

ThresholdRisks analytic_risks_threshold(double t, const FastRatesParams& p) {
  check_unit(t, "t");
  // S_t = [0,t]^2 u [1-t,1]^2. Since G(1) = 0 and G(x) = G(1-x), the
  // integral of g(x) g(x') over S_t is 2 G(t)^2 for t <= 1/2 and, after
  // removing the overlap [1-t,t]^2 (whose integral vanishes), 2 G(1-t)^2.
  double measure = 0.0;
  double j = 0.0;
  if (t <= 0.5) {
    measure = 2.0 * t * t;
    const double g = centered_left(t, p);
    j = 2.0 * g * g;
  } else {
    measure = 2.0 * t * t - (2.0 * t - 1.0) * (2.0 * t - 1.0);
    const double g = centered_left(1.0 - t, p);
    j = 2.0 * g * g;
  }
  return {std::clamp(measure + j, 0.0, 1.0), std::clamp(measure - j, 0.0, 1.0)};
}

double check_quantile_condition(const FastRatesParams& p) {
  QuadratureOptions opt;
  opt.tolerance = 1e-10;
  // g = mu1 - 1 is negative on [0, 1/2) and positive on (1/2, 1], so
  // {eta > 1/2} is the two same-side squares up to a null set. Integrating
  // there avoids the jump where eta rounds to exactly 1/2.
  auto one_minus_eta = [&](double x, double y) { return 1.0 - eta_pair(x, y, p); };
  const double mass = integrate_square(one_minus_eta, 0.0, 0.5, {p.m}, opt) +
                      integrate_square(one_minus_eta, 0.5, 1.0, {1.0 - p.m}, opt);
  return std::abs(mass - 0.5 * p.alpha);
}

std::vector<NoisePoint> noise_distribution(const FastRatesParams& p, std::span<const double> t_grid,
                                           std::uint64_t n_mc, std::uint64_t seed) {
  if (n_mc == 0) throw Error(ErrorCode::kInvalidInput, "n_mc must be >= 1");
  for (double t : t_grid) {
    if (!(t >= 0.0 && t <= 0.5)) throw Error(ErrorCode::kInvalidInput, "t grid must lie in [0, 1/2]");
  }
  CounterRng rng(seed);
  std::vector<double> dev(n_mc);
  for (auto& v : dev) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    v = std::abs(eta_pair(x, y, p) - p.q_star);
  }
  std::sort(dev.begin(), dev.end());
  std::vector<NoisePoint> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    const auto hits = std::upper_bound(dev.begin(), dev.end(), t) - dev.begin();
    out.push_back({t, static_cast<double>(hits) / static_cast<double>(n_mc)});
  }
  return out;
}

}  // namespace simroc

namespace simroc {

void MixtureParams::validate() const {
  if (num_classes < 2) throw Error(ErrorCode::kParameterDomain, "mixture needs >= 2 classes");
  if (dim < 1) throw Error(ErrorCode::kParameterDomain, "mixture dimension must be >= 1");
  if (!(mean_spread > 0.0 && noise_min > 0.0 && noise_max >= noise_min)) {
    throw Error(ErrorCode::kParameterDomain, "mixture scales must be positive with min <= max");
  }
}

Matrix MixtureParams::class_means() const {
  CounterRng rng(layout_seed);
  Matrix means(dim, num_classes);
  for (int k = 0; k < num_classes; ++k) {
    for (int j = 0; j < dim; ++j) means(j, k) = mean_spread * rng.normal();
  }
  return means;
}

nlohmann::json to_json(const MixtureParams& p) {
  return {{"num_classes", p.num_classes}, {"dim", p.dim},           {"mean_spread", p.mean_spread},
          {"noise_min", p.noise_min},     {"noise_max", p.noise_max}, {"layout_seed", p.layout_seed}};
}

LabeledDataset sample_gaussian_mixture(const MixtureParams& p, std::size_t n, std::uint64_t seed) {
  p.validate();
  const Matrix means = p.class_means();
  Vector noise(p.dim);
  for (int j = 0; j < p.dim; ++j) {
    const double w = p.dim > 1 ? static_cast<double>(j) / (p.dim - 1) : 0.0;
    noise(j) = p.noise_min * std::pow(p.noise_max / p.noise_min, w);
  }
  CounterRng rng(seed);
  RowMatrix x(static_cast<Eigen::Index>(n), p.dim);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<int>(rng.below(static_cast<std::uint64_t>(p.num_classes)));
    labels[i] = k + 1;
    for (int j = 0; j < p.dim; ++j) {
      x(static_cast<Eigen::Index>(i), j) = means(j, k) + noise(j) * rng.normal();
    }
  }
  return LabeledDataset(std::move(x), std::move(labels), p.num_classes);
}

}  // namespace simroc
