#pragma once

// Small quadrature toolbox shared by the special-function and time-integration
// code: double-exponential rules for endpoint singularities, cached
// Gauss-Legendre rules, and the composite rules used on sampled data.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace rlfrac::quad {

struct Estimate {
  double value = 0.0;
  double error = 0.0;  // difference between the last two refinement levels
  int levels = 0;
};

// Tanh-sinh rule on [a, b]. The integrand is called as f(x, x - a, b - x) with
// both distances computed without cancellation, so endpoint singularities such
// as (b - x)^(beta - 1) can be evaluated accurately.
template <class F>
Estimate tanh_sinh(F&& f, double a, double b, double rel_tol = 1e-13,
                   double abs_tol = 0.0, int max_level = 9) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  constexpr double t_max = 3.6;
  const double half = 0.5 * (b - a);

  auto node = [&](double t) {
    const double s = half_pi * std::sinh(t);
    const double w = half_pi * std::cosh(t);
    // 1 + tanh(s) and 1 - tanh(s) without cancellation
    const double e_minus = std::exp(-2.0 * s);
    const double e_plus = std::exp(2.0 * s);
    const double da = half * 2.0 / (1.0 + e_minus);
    const double db = half * 2.0 / (1.0 + e_plus);
    const double ch = std::cosh(s);
    const double weight = half * w / (ch * ch);
    if (!(da > 0.0) || !(db > 0.0) || weight == 0.0) return 0.0;
    const double x = (da < db) ? a + da : b - db;
    const double v = f(x, da, db);
    return std::isfinite(v) ? weight * v : 0.0;
  };

  double h = 1.0;
  double sum = node(0.0);
  for (int k = 1; k * h <= t_max; ++k) sum += node(k * h) + node(-k * h);
  Estimate est{sum * h, 0.0, 0};

  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    double fresh = 0.0;
    for (int k = 1; k * h <= t_max; k += 2) fresh += node(k * h) + node(-k * h);
    sum += fresh;
    const double next = sum * h;
    est.error = std::abs(next - est.value);
    est.value = next;
    est.levels = level;
    if (level >= 3 && est.error <= std::max(abs_tol, rel_tol * std::abs(next))) break;
  }
  return est;
}

// Exp-sinh rule on [a, inf). f is called as f(x, x - a).
template <class F>
Estimate exp_sinh(F&& f, double a, double rel_tol = 1e-13, double abs_tol = 0.0,
                  int max_level = 9) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  constexpr double t_lo = -4.5;
  constexpr double t_hi = 3.2;

  auto node = [&](double t) {
    const double d = std::exp(half_pi * std::sinh(t));
    if (d > 1e300 || d == 0.0) return 0.0;
    const double weight = d * half_pi * std::cosh(t);
    const double v = f(a + d, d);
    return std::isfinite(v) ? weight * v : 0.0;
  };

  double h = 0.5;
  double sum = node(0.0);
  for (int k = 1; k * h <= t_hi; ++k) sum += node(k * h);
  for (int k = 1; -k * h >= t_lo; ++k) sum += node(-k * h);
  Estimate est{sum * h, 0.0, 0};

  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    double fresh = 0.0;
    for (int k = 1; k * h <= t_hi; k += 2) fresh += node(k * h);
    for (int k = 1; -k * h >= t_lo; k += 2) fresh += node(-k * h);
    sum += fresh;
    const double next = sum * h;
    est.error = std::abs(next - est.value);
    est.value = next;
    est.levels = level;
    if (level >= 3 && est.error <= std::max(abs_tol, rel_tol * std::abs(next))) break;
  }
  return est;
}

// n-point Gauss-Legendre nodes/weights on [-1, 1], computed once per n.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

template <class F>
double gauss(F&& f, double a, double b, int n) {
  const GaussRule& rule = gauss_legendre(n);
  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(c + r * rule.nodes[i]);
  return r * s;
}

// Composite Simpson weights for an odd number of equispaced samples.
std::vector<double> simpson_weights(std::size_t n_points, double h);

double simpson(std::span<const double> values, double h);

// Trapezoid rule over arbitrary (strictly increasing) abscissae.
double trapezoid(std::span<const double> x, std::span<const double> y);

}  // namespace rlfrac::quad
