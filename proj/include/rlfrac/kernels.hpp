#pragma once

// Data-parallel inner loops. Every kernel has a serial reference path and an
// OpenMP path that produce bitwise-identical results: the parallel loops only
// distribute independent outputs, each accumulated in the same order.

#include <optional>
#include <span>
#include <vector>

namespace rlfrac::kernels {

enum class Exec { serial, parallel };

// Left Riemann-Liouville integral (1/Gamma(beta)) int_0^{t_j} (t_j - s)^(beta-1) f(s) ds
// at every node, by product integration of the piecewise-linear interpolant.
//
// With origin_exponent = sigma the interpolant is s^sigma * g(s), g linear per
// cell, for data behaving like s^sigma near 0. f[0] is then ignored (it may be
// infinite) and g(0) is extrapolated from the first two cells.
std::vector<double> product_integral(std::span<const double> t, std::span<const double> f, double beta,
                                     std::optional<double> origin_exponent = std::nullopt,
                                     Exec exec = Exec::parallel);

// table[n * times.size() + k] = E_{alpha,beta}(-lambdas[n] * times[k]^alpha).
std::vector<double> ml_table(double alpha, double beta, std::span<const double> lambdas,
                             std::span<const double> times, Exec exec = Exec::parallel);

}  // namespace rlfrac::kernels
