#include "simroc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "simroc/errors.hpp"

namespace simroc {

namespace {

std::vector<double> cell_edges(double lo, double hi, std::vector<double> breakpoints) {
  std::vector<double> edges{lo};
  std::sort(breakpoints.begin(), breakpoints.end());
  for (double b : breakpoints) {
    if (b > edges.back() && b < hi) edges.push_back(b);
  }
  edges.push_back(hi);
  return edges;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 std::vector<double> breakpoints, QuadratureOptions opt) {
  using boost::math::quadrature::gauss_kronrod;
  const std::vector<double> edges = cell_edges(lo, hi, std::move(breakpoints));
  double total = 0.0;
  for (std::size_t c = 0; c + 1 < edges.size(); ++c) {
    double err = 0.0;
    double l1 = 0.0;
    double v = gauss_kronrod<double, 61>::integrate(f, edges[c], edges[c + 1], opt.max_depth,
                                                    opt.tolerance, &err, &l1);
    auto failed = [&] { return !std::isfinite(v) || err > 10.0 * std::max(1e-12, opt.tolerance * l1); };
    if (failed()) {
      // Endpoint singularities in a derivative (e.g. (1-2x)^p with p < 1)
      // defeat Gauss-Kronrod; the double-exponential rule handles them.
      static thread_local boost::math::quadrature::tanh_sinh<double> ts;
      v = ts.integrate(f, edges[c], edges[c + 1], opt.tolerance, &err, &l1);
    }
    if (failed()) {
      std::ostringstream msg;
      msg << "quadrature did not converge on [" << edges[c] << ", " << edges[c + 1]
          << "]: error estimate " << err;
      throw Error(ErrorCode::kNumerical, msg.str());
    }
    total += v;
  }
  return total;
}

double integrate_square(const std::function<double(double, double)>& f, double lo, double hi,
                        const std::vector<double>& breakpoints, QuadratureOptions opt) {
  // The outer rule sees inner round-off as noise, so the inner one runs tighter.
  QuadratureOptions inner = opt;
  inner.tolerance = std::max(1e-14, opt.tolerance * 1e-2);
  return integrate(
      [&](double x) {
        return integrate([&](double y) { return f(x, y); }, lo, hi, breakpoints, inner);
      },
      lo, hi, breakpoints, opt);
}

}  // namespace simroc
