#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstddef>
#include <vector>

#include "pepsblend/errors.hpp"
#include "pepsblend/rational.hpp"

namespace pepsblend {

// Total-variation bounds used to control how far the blended instance
// distribution drifts from the reference product Gaussian. The two exact
// bounds come straight from the triangle-inequality argument; the numeric
// routine evaluates the true one-dimensional TV distance by quadrature so the
// bounds can be checked with an independent method.

// || N(0, (1-eps) sigma)^M - N(0, sigma)^M || <= 2 M eps, for 0 <= eps < 1.
inline Rational tv_bound_scale(std::size_t M, const Rational& eps_scale) {
  if (M < 1) throw ConfigInvalid("M must be at least 1");
  if (eps_scale.sign() < 0 || eps_scale >= Rational(1)) {
    throw ConfigInvalid("scale perturbation must lie in [0, 1)");
  }
  return Rational(2) * Rational(static_cast<long>(M)) * eps_scale;
}

// || prod_i N(v_i, sigma) - N(0, sigma)^M || <= ||v||_1 / sigma.
inline Rational tv_bound_shift(const std::vector<Rational>& v, const Rational& sigma) {
  if (sigma.sign() <= 0) throw ConfigInvalid("sigma must be positive");
  Rational norm1;
  for (const auto& x : v) norm1 += x.abs();
  return norm1 / sigma;
}

namespace detail {

inline double normal_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
}

inline double tv_quadrature(double mu1, double s1, double mu2, double s2) {
  auto integrand = [&](double x) { return std::abs(normal_pdf(x, mu1, s1) - normal_pdf(x, mu2, s2)); };
  const double lo = std::min(mu1 - 12 * s1, mu2 - 12 * s2);
  const double hi = std::max(mu1 + 12 * s1, mu2 + 12 * s2);
  double err = 0;
  double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, lo, hi, 12, 1e-12, &err);
  return 0.5 * integral;
}

}  // namespace detail

// True TV distance between N(0, (1-eps) sigma) and N(0, sigma), by adaptive
// Gauss-Kronrod quadrature of the density difference.
inline double numeric_tv_scale(double eps, double sigma = 1.0) {
  if (eps < 0 || eps >= 1) throw ConfigInvalid("scale perturbation must lie in [0, 1)");
  if (eps == 0) return 0.0;
  return detail::tv_quadrature(0.0, (1.0 - eps) * sigma, 0.0, sigma);
}

// True TV distance between N(v, sigma) and N(0, sigma).
inline double numeric_tv_shift(double v, double sigma = 1.0) {
  if (sigma <= 0) throw ConfigInvalid("sigma must be positive");
  if (v == 0) return 0.0;
  return detail::tv_quadrature(v, sigma, 0.0, sigma);
}

}  // namespace pepsblend
