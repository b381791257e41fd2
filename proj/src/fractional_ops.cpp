#include "rlfrac/fractional_ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rlfrac/errors.hpp"
#include "rlfrac/mittag_leffler.hpp"

namespace rlfrac {

namespace {

void check_alpha(double alpha, const char* op) {
  if (!(alpha > 1.0 && alpha < 2.0))
    throw InvalidArgument(std::string(op) + ": alpha must lie in (1, 2), got " + std::to_string(alpha));
}

void check_cells(const TimeGrid& g, const char* op) {
  if (g.cells() < kMinDerivativeCells)
    throw InvalidArgument(std::string(op) + ": grid too coarse, need at least " +
                          std::to_string(kMinDerivativeCells) + " cells");
}

}  // namespace

SampledFunction frac_integral(Side side, double beta, const SampledFunction& f,
                              std::optional<double> origin_exponent, kernels::Exec exec) {
  if (side == Side::left) {
    auto v = kernels::product_integral(f.grid.points(), f.values, beta, origin_exponent, exec);
    return {f.grid, std::move(v)};
  }
  // I^b_{T-} f(t_k) equals the left integral of the reflected data at T - t_k.
  const SampledFunction r = f.reversed();
  auto v = kernels::product_integral(r.grid.points(), r.values, beta, origin_exponent, exec);
  std::reverse(v.begin(), v.end());
  return {f.grid, std::move(v)};
}

std::vector<double> fd_weights(double x0, const std::vector<double>& xs, int m) {
  const int n = static_cast<int>(xs.size()) - 1;
  if (m < 0 || n < m) throw InvalidArgument("fd_weights: stencil too short for derivative order");
  // c[j][k]: weight of xs[j] for the k-th derivative
  std::vector<std::vector<double>> c(xs.size(), std::vector<double>(static_cast<std::size_t>(m) + 1, 0.0));
  double c1 = 1.0;
  double c4 = xs[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[static_cast<std::size_t>(i)] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[static_cast<std::size_t>(i)] - xs[static_cast<std::size_t>(j)];
      c2 *= c3;
      auto& ci = c[static_cast<std::size_t>(i)];
      auto& cj = c[static_cast<std::size_t>(j)];
      if (j == i - 1) {
        const auto& cprev = c[static_cast<std::size_t>(i - 1)];
        for (int k = mn; k >= 1; --k)
          ci[static_cast<std::size_t>(k)] =
              c1 * (k * cprev[static_cast<std::size_t>(k - 1)] - c5 * cprev[static_cast<std::size_t>(k)]) / c2;
        ci[0] = -c1 * c5 * cprev[0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        cj[static_cast<std::size_t>(k)] =
            (c4 * cj[static_cast<std::size_t>(k)] - k * cj[static_cast<std::size_t>(k - 1)]) / c3;
      cj[0] = c4 * cj[0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) w[j] = c[j][static_cast<std::size_t>(m)];
  return w;
}

std::vector<double> fd_derivative(const TimeGrid& grid, const std::vector<double>& values, int order) {
  if (order != 1 && order != 2) throw InvalidArgument("fd_derivative: order must be 1 or 2");
  if (values.size() != grid.size()) throw InvalidArgument("fd_derivative: length mismatch");
  const std::size_t n = grid.size();
  std::vector<double> out(n);
  auto apply = [&](std::size_t at, std::size_t first, std::size_t count) {
    std::vector<double> xs(count);
    for (std::size_t k = 0; k < count; ++k) xs[k] = grid[first + k];
    const auto w = fd_weights(grid[at], xs, order);
    double s = 0.0;
    for (std::size_t k = 0; k < count; ++k) s += w[k] * values[first + k];
    return s;
  };
  const std::size_t end_len = order == 1 ? 3 : 4;
  out[0] = apply(0, 0, end_len);
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = apply(i, i - 1, 3);
  out[n - 1] = apply(n - 1, n - end_len, end_len);
  return out;
}

SampledFunction rl_derivative(RLOrder order, double alpha, const SampledFunction& f,
                              std::optional<double> origin_exponent) {
  check_alpha(alpha, "rl_derivative");
  check_cells(f.grid, "rl_derivative");
  SampledFunction inner = frac_integral(Side::left, 2.0 - alpha, f, origin_exponent);
  switch (order) {
    case RLOrder::alpha_minus_2: return inner;
    case RLOrder::alpha_minus_1: return {f.grid, fd_derivative(f.grid, inner.values, 1)};
    case RLOrder::alpha: return {f.grid, fd_derivative(f.grid, inner.values, 2)};
  }
  return inner;
}

SampledFunction caputo_derivative(double alpha, const SampledFunction& f) {
  check_alpha(alpha, "caputo_derivative");
  check_cells(f.grid, "caputo_derivative");
  SampledFunction second{f.grid, fd_derivative(f.grid, f.values, 2)};
  return frac_integral(Side::left, 2.0 - alpha, second);
}

double semigroup_residual(double beta, double gamma, const SampledFunction& f) {
  if (!(beta > 0.0) || !(gamma > 0.0)) throw InvalidArgument("semigroup_residual: orders must be positive");
  // I^g f behaves like t^g * (smooth) near 0 for smooth f
  const SampledFunction inner = frac_integral(Side::left, gamma, f);
  const SampledFunction twice = frac_integral(Side::left, beta, inner, gamma);
  const SampledFunction once = frac_integral(Side::left, beta + gamma, f);
  double r = 0.0;
  for (std::size_t j = 0; j < f.values.size(); ++j) r = std::max(r, std::abs(twice.values[j] - once.values[j]));
  return r;
}

double int_by_parts_residual(double beta, const SampledFunction& f, const SampledFunction& g) {
  if (!(beta > 0.0)) throw InvalidArgument("int_by_parts_residual: order must be positive");
  if (f.grid.points() != g.grid.points()) throw InvalidArgument("int_by_parts_residual: grids differ");
  const std::size_t n = f.values.size();
  const SampledFunction If = frac_integral(Side::left, beta, f);
  const SampledFunction Ig = frac_integral(Side::right, beta, g);
  std::vector<double> lhs(n);
  std::vector<double> rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    lhs[i] = If.values[i] * g.values[i];
    rhs[i] = f.values[i] * Ig.values[i];
  }
  // Outer integrals as order-1 integrals aware of the t^b (resp. (T-t)^b)
  // factor carried by the inner fractional integral.
  const double left = frac_integral(Side::left, 1.0, {f.grid, lhs}, beta).values.back();
  const double right = frac_integral(Side::right, 1.0, {f.grid, rhs}, beta).values.front();
  return std::abs(left - right);
}

double ml_integral_residual(double alpha, double beta, double lambda, const TimeGrid& grid) {
  check_alpha(alpha, "ml_integral_residual");
  if (!(beta > 0.0)) throw InvalidArgument("ml_integral_residual: beta must be positive");
  if (!std::isfinite(lambda)) throw InvalidArgument("ml_integral_residual: lambda must be finite");
  const SampledFunction f = SampledFunction::sample(
      grid, [&](double s) { return std::pow(s, beta - 1.0) * ml_value(alpha, beta, lambda * std::pow(s, alpha)); },
      beta < 1.0);
  std::optional<double> sigma;
  if (beta != 1.0) sigma = beta - 1.0;
  const SampledFunction lhs = frac_integral(Side::left, 2.0 - alpha, f, sigma);
  double r = 0.0;
  for (std::size_t j = 1; j < grid.size(); ++j) {
    const double t = grid[j];
    const double exact = std::pow(t, 1.0 - alpha + beta) * ml_value(alpha, 2.0 - alpha + beta, lambda * std::pow(t, alpha));
    r = std::max(r, std::abs(lhs.values[j] - exact));
  }
  return r;
}

}  // namespace rlfrac
