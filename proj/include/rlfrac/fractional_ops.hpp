#pragma once

// Riemann-Liouville and Caputo operators on sampled functions.
//
//   I^b_{0+} f(t) = 1/Gamma(b) int_0^t (t - s)^(b-1) f(s) ds
//   I^b_{T-} f(t) = 1/Gamma(b) int_t^T (s - t)^(b-1) f(s) ds
//   D^a f = (d/dt)^2 I^(2-a) f,   ^C D^a f = I^(2-a) f''   (1 < a < 2)

#include <cstddef>
#include <optional>
#include <vector>

#include "rlfrac/kernels.hpp"
#include "rlfrac/time_grid.hpp"

namespace rlfrac {

enum class Side { left, right };

// Product-trapezoid fractional integral at the grid nodes. origin_exponent
// declares f ~ s^sigma at the integration origin (t = 0 for left, t = T for
// right); the origin sample is then ignored.
SampledFunction frac_integral(Side side, double beta, const SampledFunction& f,
                              std::optional<double> origin_exponent = std::nullopt,
                              kernels::Exec exec = kernels::Exec::parallel);

enum class RLOrder { alpha, alpha_minus_1, alpha_minus_2 };

// Derivative values at nodes below this index sit in the first two cells,
// where the solutions of interest blow up like t^(alpha-2); they are returned
// but not trusted.
inline constexpr std::size_t kReliableFrom = 2;
inline constexpr int kMinDerivativeCells = 16;

// alpha_minus_2: I^(2-a) f; alpha_minus_1: d/dt of it; alpha: d^2/dt^2 of it.
SampledFunction rl_derivative(RLOrder order, double alpha, const SampledFunction& f,
                              std::optional<double> origin_exponent = std::nullopt);

// I^(2-a) applied to the finite-difference second derivative of f.
SampledFunction caputo_derivative(double alpha, const SampledFunction& f);

// Finite-difference weights for the derivative of order m at x0 over the
// stencil xs (Fornberg's recursion).
std::vector<double> fd_weights(double x0, const std::vector<double>& xs, int m);

// First (order 1) or second (order 2) derivative on a nonuniform grid,
// second-order accurate: 3-point central stencils inside, one-sided 3-point
// (order 1) or 4-point (order 2) stencils at the ends.
std::vector<double> fd_derivative(const TimeGrid& grid, const std::vector<double>& values, int order);

// max_j |I^b I^g f - I^(b+g) f| at the grid nodes.
double semigroup_residual(double beta, double gamma, const SampledFunction& f);

// |int_0^T (I^b_{0+} f) g dt - int_0^T f (I^b_{T-} g) dt|.
double int_by_parts_residual(double beta, const SampledFunction& f, const SampledFunction& g);

// max_j |I^(2-a)[s^(b-1) E_{a,b}(lambda s^a)](t_j) - t_j^(1-a+b) E_{a,2-a+b}(lambda t_j^a)|, j >= 1.
double ml_integral_residual(double alpha, double beta, double lambda, const TimeGrid& grid);

}  // namespace rlfrac
