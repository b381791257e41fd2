#include "rlfrac/rl_solver.hpp"

#include <cmath>
#include <string>

#include "rlfrac/errors.hpp"
#include "rlfrac/mittag_leffler.hpp"
#include "rlfrac/quadrature.hpp"

namespace rlfrac {

FracOrder::FracOrder(double alpha) : alpha_(alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw InvalidArgument("alpha must lie in (1, 2), got " + std::to_string(alpha));
}

void FracOrder::require_trace_regime(const char* op) const {
  if (!trace_regime())
    throw InvalidArgument(std::string(op) + ": requires alpha in (3/2, 2), got " + std::to_string(alpha_));
}

SeriesSolution::SeriesSolution(FracOrder a, ModalData d, double horizon) : alpha(a), data(std::move(d)), T(horizon) {
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidArgument("solution: horizon T must be positive");
}

double scalar_solution(double alpha, double lambda, double u1, double u2, double t) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw InvalidArgument("scalar_solution: alpha must lie in (1, 2)");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("scalar_solution: lambda must be >= 0");
  if (!std::isfinite(t) || t < 0.0) throw InvalidArgument("scalar_solution: t must be >= 0");
  if (t == 0.0) {
    if (u2 != 0.0) throw InvalidArgument("scalar_solution: solution is singular at t = 0 when u2 != 0");
    return 0.0;
  }
  const double z = -lambda * std::pow(t, alpha);
  double v = 0.0;
  if (u1 != 0.0) v += u1 * std::pow(t, alpha - 1.0) * ml_value(alpha, alpha, z);
  if (u2 != 0.0) v += u2 * std::pow(t, alpha - 2.0) * ml_value(alpha, alpha - 1.0, z);
  return v;
}

std::vector<FieldSnapshot> solve_series(const SeriesSolution& sol, std::span<const double> times,
                                        kernels::Exec exec) {
  for (double t : times)
    if (!(t > 0.0) || t > sol.T * (1.0 + 1e-12))
      throw InvalidArgument("solve_series: times must lie in (0, T], got " + std::to_string(t));
  const double a = sol.alpha;
  const auto lambdas = sol.lambdas();
  const auto ea = kernels::ml_table(a, a, lambdas, times, exec);
  const auto eb = kernels::ml_table(a, a - 1.0, lambdas, times, exec);
  const std::size_t nt = times.size();
  std::vector<FieldSnapshot> out(nt);
  for (std::size_t k = 0; k < nt; ++k) {
    const double t = times[k];
    const double p1 = std::pow(t, a - 1.0);
    const double p2 = std::pow(t, a - 2.0);
    out[k].t = t;
    out[k].modal_values.resize(lambdas.size());
    for (std::size_t n = 0; n < lambdas.size(); ++n)
      out[k].modal_values[n] = sol.data.c1[n] * p1 * ea[n * nt + k] + sol.data.c2[n] * p2 * eb[n * nt + k];
  }
  return out;
}

FieldSnapshot snapshot(const SeriesSolution& sol, double t) {
  const double times[] = {t};
  return solve_series(sol, times, kernels::Exec::serial).front();
}

std::vector<double> synthesize(const SeriesSolution& sol, const FieldSnapshot& s, std::span<const double> x) {
  return synthesize(sol.data.domain, s.modal_values, x);
}

double norm_h10(const SeriesSolution& sol, const FieldSnapshot& s) {
  return graded_norm(s.modal_values, 0.5, sol.lambdas());
}

double norm_h2(const SeriesSolution& sol, const FieldSnapshot& s) {
  return graded_norm(s.modal_values, 1.0, sol.lambdas());
}

std::vector<double> d_alpha_minus1(const SeriesSolution& sol, double t) {
  if (!(t > 0.0)) throw InvalidArgument("d_alpha_minus1: t must be positive");
  const double a = sol.alpha;
  const auto lambdas = sol.lambdas();
  std::vector<double> out(lambdas.size());
  for (std::size_t n = 0; n < lambdas.size(); ++n) {
    const double z = -lambdas[n] * std::pow(t, a);
    out[n] = sol.data.c1[n] * ml_value(a, 1.0, z) -
             lambdas[n] * sol.data.c2[n] * std::pow(t, a - 1.0) * ml_value(a, a, z);
  }
  return out;
}

std::vector<double> d_alpha(const SeriesSolution& sol, double t) {
  if (!(t > 0.0)) throw InvalidArgument("d_alpha: t must be positive");
  const auto s = snapshot(sol, t);
  const auto lambdas = sol.lambdas();
  std::vector<double> out(lambdas.size());
  for (std::size_t n = 0; n < lambdas.size(); ++n) out[n] = -lambdas[n] * s.modal_values[n];
  return out;
}

std::vector<double> i_two_minus_alpha(const SeriesSolution& sol, double t) {
  if (!(t > 0.0)) throw InvalidArgument("i_two_minus_alpha: t must be positive");
  const double a = sol.alpha;
  const auto lambdas = sol.lambdas();
  std::vector<double> out(lambdas.size());
  for (std::size_t n = 0; n < lambdas.size(); ++n) {
    const double z = -lambdas[n] * std::pow(t, a);
    out[n] = sol.data.c1[n] * t * ml_value(a, 2.0, z) + sol.data.c2[n] * ml_value(a, 1.0, z);
  }
  return out;
}

InitialCheck initial_check(const SeriesSolution& sol, std::span<const double> t_sequence, double theta) {
  const double a = sol.alpha;
  const double lo = (2.0 - a) / (2.0 * a);
  if (!(theta > lo && theta < 0.5))
    throw InvalidArgument("initial_check: theta must lie in (" + std::to_string(lo) + ", 1/2)");
  if (t_sequence.empty()) throw InvalidArgument("initial_check: empty t sequence");
  for (std::size_t k = 0; k < t_sequence.size(); ++k) {
    if (!(t_sequence[k] > 0.0)) throw InvalidArgument("initial_check: times must be positive");
    if (k > 0 && !(t_sequence[k] < t_sequence[k - 1]))
      throw InvalidArgument("initial_check: times must decrease");
  }
  const auto lambdas = sol.lambdas();
  InitialCheck out;
  for (double t : t_sequence) {
    const auto d1 = d_alpha_minus1(sol, t);
    const auto i2 = i_two_minus_alpha(sol, t);
    std::vector<double> r1(d1.size());
    std::vector<double> r2(i2.size());
    for (std::size_t n = 0; n < d1.size(); ++n) {
      r1[n] = d1[n] - sol.data.c1[n];
      r2[n] = i2[n] - sol.data.c2[n];
    }
    out.t.push_back(t);
    out.err1.push_back(graded_norm(r1, -theta, lambdas));
    out.err2.push_back(graded_norm(r2, 0.0, lambdas));
  }
  for (std::size_t k = 1; k < out.t.size(); ++k)
    if (out.err1[k] > out.err1[k - 1] || out.err2[k] > out.err2[k - 1]) out.monotone = false;
  return out;
}

double caputo_transform_check(const SeriesSolution& sol, double t0, double t1, int M) {
  if (M < 32) throw InvalidArgument("caputo_transform_check: grid too coarse, need M >= 32");
  if (!(t0 > 0.0) || !(t1 > t0) || t1 > sol.T * (1.0 + 1e-12))
    throw InvalidArgument("caputo_transform_check: need 0 < t0 < t1 <= T");
  const double h = (t1 - t0) / M;
  std::vector<std::vector<double>> v(static_cast<std::size_t>(M) + 1);
  std::vector<double> times(static_cast<std::size_t>(M) + 1);
  for (int k = 0; k <= M; ++k) {
    times[static_cast<std::size_t>(k)] = t0 + h * k;
    v[static_cast<std::size_t>(k)] = i_two_minus_alpha(sol, times[static_cast<std::size_t>(k)]);
  }
  const auto u = solve_series(sol, times);
  const auto lambdas = sol.lambdas();
  double r = 0.0;
  for (int k = 1; k < M; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    for (std::size_t n = 0; n < lambdas.size(); ++n) {
      const double vtt = (v[kk + 1][n] - 2.0 * v[kk][n] + v[kk - 1][n]) / (h * h);
      r = std::max(r, std::abs(vtt + lambdas[n] * u[kk].modal_values[n]));
    }
  }
  return r;
}

namespace {

// <grad u, grad e_m> by tensor Simpson over the synthesized gradient.
double gradient_pairing(const DomainSpec& d, const std::vector<double>& u, int m) {
  int max_index = 1;
  for (const Mode& mode : d.modes()) max_index = std::max({max_index, mode.i, mode.j});
  const int n = 16 * max_index + 1;
  const auto x = uniform_nodes(d.L1(), n);
  const auto wx = quad::simpson_weights(static_cast<std::size_t>(n), d.L1() / (n - 1));
  if (d.kind() == DomainKind::interval) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      double ux = 0.0;
      for (std::size_t q = 0; q < u.size(); ++q) ux += u[q] * d.eigenfunction_dx(static_cast<int>(q), x[k]);
      s += wx[k] * ux * d.eigenfunction_dx(m, x[k]);
    }
    return s;
  }
  const auto y = uniform_nodes(d.L2(), n);
  const auto wy = quad::simpson_weights(static_cast<std::size_t>(n), d.L2() / (n - 1));
  double s = 0.0;
  for (std::size_t b = 0; b < y.size(); ++b)
    for (std::size_t a = 0; a < x.size(); ++a) {
      double ux = 0.0;
      double uy = 0.0;
      for (std::size_t q = 0; q < u.size(); ++q) {
        ux += u[q] * d.eigenfunction_dx(static_cast<int>(q), x[a], y[b]);
        uy += u[q] * d.eigenfunction_dy(static_cast<int>(q), x[a], y[b]);
      }
      s += wx[a] * wy[b] * (ux * d.eigenfunction_dx(m, x[a], y[b]) + uy * d.eigenfunction_dy(m, x[a], y[b]));
    }
  return s;
}

}  // namespace

double weak_form_residual(const SeriesSolution& sol, int m, std::span<const double> times) {
  if (m < 1 || m > sol.n_modes()) throw InvalidArgument("weak_form_residual: test mode out of range");
  const double a = sol.alpha;
  const auto idx = static_cast<std::size_t>(m - 1);
  const double lambda = sol.data.domain.modes()[idx].lambda;
  const double c1 = sol.data.c1[idx];
  const double c2 = sol.data.c2[idx];
  const auto snaps = solve_series(sol, times);
  double r = 0.0;
  for (const auto& s : snaps) {
    const double t = s.t;
    const double z = -lambda * std::pow(t, a);
    // d/dt [c1 E_a(z) - l c2 t^(a-1) E_{a,a}(z)] through the derivative identities
    const double flux = -c1 * lambda * std::pow(t, a - 1.0) * ml_value(a, a, z) -
                        lambda * c2 * std::pow(t, a - 2.0) * ml_value(a, a - 1.0, z);
    const double stiffness = gradient_pairing(sol.data.domain, s.modal_values, m - 1);
    r = std::max(r, std::abs(flux + stiffness));
  }
  return r;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("loglog_slope: need matching samples");
  double sx = 0.0;
  double sy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += std::log(x[k]);
    sy += std::log(std::abs(y[k]));
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dx = std::log(x[k]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(std::abs(y[k])) - my);
  }
  return sxy / sxx;
}

DecaySlopes decay_slopes(const SeriesSolution& sol, double t0, double t1, int n_samples) {
  if (n_samples < 5) throw InvalidArgument("decay_slopes: window needs at least 5 samples");
  if (!(t0 > 0.0) || !(t1 > t0)) throw InvalidArgument("decay_slopes: need 0 < t0 < t1");
  std::vector<double> times(static_cast<std::size_t>(n_samples));
  for (int k = 0; k < n_samples; ++k)
    times[static_cast<std::size_t>(k)] = t0 * std::pow(t1 / t0, static_cast<double>(k) / (n_samples - 1));
  const double horizon = std::max(sol.T, t1);
  const auto n = static_cast<std::size_t>(sol.n_modes());
  const SeriesSolution only_u1(sol.alpha, ModalData(sol.data.domain, sol.data.c1, std::vector<double>(n, 0.0)),
                               horizon);
  const SeriesSolution only_u2(sol.alpha, ModalData(sol.data.domain, std::vector<double>(n, 0.0), sol.data.c2),
                               horizon);
  auto norms = [&](const SeriesSolution& s) {
    std::vector<double> v;
    for (const auto& snap : solve_series(s, times)) v.push_back(norm_h2(s, snap));
    return v;
  };
  return {loglog_slope(times, norms(only_u1)), loglog_slope(times, norms(only_u2))};
}

}  // namespace rlfrac
