#include "rlfrac/trace_duality.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rlfrac/errors.hpp"
#include "rlfrac/mittag_leffler.hpp"
#include "rlfrac/quadrature.hpp"

namespace rlfrac {

namespace {

void require_trace_alpha(double alpha, const char* op) {
  if (!(alpha > 1.5 && alpha < 2.0))
    throw InvalidArgument(std::string(op) + ": alpha must lie in (3/2, 2), got " + std::to_string(alpha));
}

bool any_nonzero(const std::vector<double>& c) {
  return std::any_of(c.begin(), c.end(), [](double v) { return v != 0.0; });
}

}  // namespace

// ------------------------------------------------------------------ windows

ThetaRange nabla_range(double alpha, double mu) { return {mu, (2.0 * alpha - 3.0) / (2.0 * alpha) + mu}; }

ThetaRange dalpha_range(double alpha, double mu) { return {(3.0 - alpha) / (2.0 * alpha) - mu, 0.5 - mu}; }

namespace {

ExponentWindow make_window(double alpha, double mu) {
  const auto a = nabla_range(alpha, mu);
  const auto b = dalpha_range(alpha, mu);
  ExponentWindow w;
  w.mu = mu;
  w.theta_lo = std::max(a.lo, b.lo);
  w.theta_hi = std::min(a.hi, b.hi);
  w.empty = !(w.theta_lo < w.theta_hi);
  w.overlap_condition = b.lo < a.hi;
  w.upper_condition = mu < 0.5 - mu;
  return w;
}

}  // namespace

AdmissibleIntervals admissible_intervals(double alpha, std::optional<double> mu) {
  require_trace_alpha(alpha, "admissible_intervals");
  AdmissibleIntervals out;
  out.mu_lo = 3.0 * (2.0 - alpha) / (4.0 * alpha);
  out.mu_hi = 0.25;
  if (mu) {
    if (!std::isfinite(*mu)) throw InvalidArgument("admissible_intervals: mu must be finite");
    out.window = make_window(alpha, *mu);
  }
  return out;
}

std::vector<XiSample> xi_sweep(double alpha, double lo, double hi, double step) {
  require_trace_alpha(alpha, "xi_sweep");
  if (!(step > 0.0) || !(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw InvalidArgument("xi_sweep: expected lo <= hi and step > 0");
  const double mu_lo = 3.0 * (2.0 - alpha) / (4.0 * alpha);
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  if (n > 1000000) throw InvalidArgument("xi_sweep: too many samples");
  std::vector<XiSample> out;
  for (long k = 0; k <= n; ++k) {
    XiSample s;
    s.xi = lo + static_cast<double>(k) * step;
    s.mu = mu_lo * s.xi + 0.25 * (1.0 - s.xi);
    s.nabla = nabla_range(alpha, s.mu);
    s.dalpha = dalpha_range(alpha, s.mu);
    s.window = make_window(alpha, s.mu);
    out.push_back(s);
  }
  return out;
}

// ------------------------------------------------------------------- traces

std::vector<BoundaryNode> boundary_nodes(const DomainSpec& d, int per_edge) {
  if (d.kind() == DomainKind::interval) return {{0.0, 0.0, 1.0, -1.0, 0.0}, {d.L(), 0.0, 1.0, 1.0, 0.0}};
  if (per_edge < 2) throw InvalidArgument("boundary_nodes: per_edge must be >= 2");
  const auto& rule = quad::gauss_legendre(per_edge);
  const double L1 = d.L1();
  const double L2 = d.L2();
  std::vector<BoundaryNode> out;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double s = 0.5 * (rule.nodes[i] + 1.0);
    out.push_back({s * L1, 0.0, 0.5 * L1 * rule.weights[i], 0.0, -1.0});
    out.push_back({L1, s * L2, 0.5 * L2 * rule.weights[i], 1.0, 0.0});
    out.push_back({s * L1, L2, 0.5 * L1 * rule.weights[i], 0.0, 1.0});
    out.push_back({0.0, s * L2, 0.5 * L2 * rule.weights[i], -1.0, 0.0});
  }
  return out;
}

std::vector<double> normal_trace_modal(const DomainSpec& d, std::span<const double> modal,
                                       const std::vector<BoundaryNode>& nodes) {
  if (static_cast<int>(modal.size()) != d.n_modes())
    throw InvalidArgument("normal_trace: modal vector size does not match the domain");
  std::vector<double> out(nodes.size(), 0.0);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const auto& b = nodes[k];
    double s = 0.0;
    for (int n = 0; n < d.n_modes(); ++n) {
      const double c = modal[static_cast<std::size_t>(n)];
      if (c == 0.0) continue;
      double dn = b.nx * d.eigenfunction_dx(n, b.x, b.y);
      if (b.ny != 0.0) dn += b.ny * d.eigenfunction_dy(n, b.x, b.y);
      s += c * dn;
    }
    out[k] = s;
  }
  return out;
}

std::vector<double> normal_trace(const SeriesSolution& sol, double t, int per_edge) {
  if (!(t > 0.0)) throw InvalidArgument("normal_trace: t must be positive");
  const auto nodes = boundary_nodes(sol.data.domain, per_edge);
  return normal_trace_modal(sol.data.domain, snapshot(sol, t).modal_values, nodes);
}

TraceSeries normal_trace(const SeriesSolution& sol, std::span<const double> times, int per_edge) {
  for (double t : times)
    if (!(t > 0.0)) throw InvalidArgument("normal_trace: times must be positive");
  TraceSeries out;
  out.nodes = boundary_nodes(sol.data.domain, per_edge);
  out.times.assign(times.begin(), times.end());
  const auto snaps = solve_series(sol, times);
  out.values.reserve(snaps.size());
  for (const auto& s : snaps) out.values.push_back(normal_trace_modal(sol.data.domain, s.modal_values, out.nodes));
  return out;
}

namespace {

// int_0^{t_last} e(t) dt over the given nodes: trapezoid plus e(t_1) t_1/(p+1)
// on the first cell for e ~ t^p.
double energy_rule(const std::vector<double>& t, const std::vector<double>& e, double p) {
  double s = e.front() * t.front() / (p + 1.0);
  s += quad::trapezoid(t, e);
  return s;
}

}  // namespace

TraceEnergy trace_energy(const SeriesSolution& sol, const TimeGrid& grid, int per_edge) {
  sol.alpha.require_trace_regime("trace_energy");
  TraceEnergy out;
  if (!any_nonzero(sol.data.c1) && !any_nonzero(sol.data.c2)) return out;

  const auto& pts = grid.points();
  const std::vector<double> times(pts.begin() + 1, pts.end());
  const auto tr = normal_trace(sol, times, per_edge);
  std::vector<double> e(times.size(), 0.0);
  for (std::size_t k = 0; k < times.size(); ++k)
    for (std::size_t j = 0; j < tr.nodes.size(); ++j) e[k] += tr.nodes[j].weight * tr.values[k][j] * tr.values[k][j];

  const double a = sol.alpha;
  const double p = any_nonzero(sol.data.c2) ? 2.0 * (a - 2.0) : 2.0 * (a - 1.0);
  out.value = energy_rule(times, e, p);

  // every other grid node (t_2, t_4, ..., plus t_M when M is odd)
  std::vector<double> tc;
  std::vector<double> ec;
  for (std::size_t k = 1; k < times.size(); k += 2) {
    tc.push_back(times[k]);
    ec.push_back(e[k]);
  }
  if (tc.back() != times.back()) {
    tc.push_back(times.back());
    ec.push_back(e.back());
  }
  out.coarse = energy_rule(tc, ec, p);
  out.discrepancy = std::abs(out.value - out.coarse) / out.value;
  if (!std::isfinite(out.value) || out.discrepancy > 0.1)
    throw NumericalFailure("trace_energy", "time grid under-resolved: coarse/fine discrepancy " +
                                               std::to_string(out.discrepancy));
  return out;
}

// --------------------------------------------------------------- regularity

ModeGram mode_gram(double alpha, double lambda, double T) {
  if (!(alpha > 1.5 && alpha < 2.0)) throw InvalidArgument("mode_gram: alpha must lie in (3/2, 2)");
  if (!(lambda > 0.0) || !(T > 0.0)) throw InvalidArgument("mode_gram: lambda and T must be positive");
  const double a = alpha;
  auto ea = [&](double t) { return ml_value(a, a, -lambda * std::pow(t, a)); };
  auto eb = [&](double t) { return ml_value(a, a - 1.0, -lambda * std::pow(t, a)); };

  ModeGram g;
  // (0, tc]: t = tc u^q removes the t^(2a-4) singularity of b^2.
  const double tc = std::min(T, std::pow(lambda, -1.0 / a));
  const double p = 2.0 * a - 4.0;
  const double q = 1.0 / (p + 1.0);
  const double scale = std::pow(tc, p + 1.0) * q;
  auto near = [&](int which) {
    return quad::tanh_sinh(
               [&](double u, double, double) {
                 const double t = tc * std::pow(u, q);
                 // integrand / t^p
                 if (which == 0) return t * t * ea(t) * ea(t);
                 if (which == 1) return t * ea(t) * eb(t);
                 return eb(t) * eb(t);
               },
               0.0, 1.0, 1e-12, 0.0, 10)
        .value;
  };
  g.aa = scale * near(0);
  g.ab = scale * near(1);
  g.bb = scale * near(2);

  auto fa = [&](double t) { return std::pow(t, a - 1.0) * ea(t); };
  auto fb = [&](double t) { return std::pow(t, a - 2.0) * eb(t); };
  for (double lo = tc; lo < T; lo *= 4.0) {
    const double hi = std::min(T, 4.0 * lo);
    g.aa += quad::tanh_sinh([&](double t, double, double) { return fa(t) * fa(t); }, lo, hi, 1e-12).value;
    g.ab += quad::tanh_sinh([&](double t, double, double) { return fa(t) * fb(t); }, lo, hi, 1e-12).value;
    g.bb += quad::tanh_sinh([&](double t, double, double) { return fb(t) * fb(t); }, lo, hi, 1e-12).value;
  }
  return g;
}

RegularityEvaluator::RegularityEvaluator(double alpha, const DomainSpec& d, double T)
    : alpha_(alpha), T_(T), lambdas_(d.lambdas()), grams_(lambdas_.size()) {
  if (!(alpha > 1.5 && alpha < 2.0)) throw InvalidArgument("regularity: alpha must lie in (3/2, 2)");
  if (!(T > 0.0)) throw InvalidArgument("regularity: T must be positive");
  const int n = static_cast<int>(lambdas_.size());
  bool failed = false;
  std::string what;
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < n; ++k) {
    try {
      grams_[static_cast<std::size_t>(k)] = mode_gram(alpha_, lambdas_[static_cast<std::size_t>(k)], T_);
    } catch (const std::exception& e) {
#pragma omp critical(regularity_gram)
      {
        failed = true;
        what = e.what();
      }
    }
  }
  if (failed) throw NumericalFailure("regularity_ratio", what);
}

RegularityRatio RegularityEvaluator::ratio(RegularityKind kind, const ModalData& data, double theta,
                                           double mu) const {
  if (data.c1.size() != lambdas_.size()) throw InvalidArgument("regularity_ratio: data/domain size mismatch");
  if (!(mu >= 0.0)) throw InadmissibleExponent("regularity_ratio: mu must be >= 0");
  const auto r = kind == RegularityKind::nabla ? nabla_range(alpha_, mu) : dalpha_range(alpha_, mu);
  if (!(theta > r.lo && theta < r.hi))
    throw InadmissibleExponent("regularity_ratio: theta = " + std::to_string(theta) + " outside (" +
                               std::to_string(r.lo) + ", " + std::to_string(r.hi) + ") for mu = " +
                               std::to_string(mu));
  const double w = kind == RegularityKind::nabla ? 1.0 + 2.0 * theta : 2.0 - 2.0 * theta;
  double lhs2 = 0.0;
  for (std::size_t n = 0; n < lambdas_.size(); ++n) {
    const double c1 = data.c1[n];
    const double c2 = data.c2[n];
    const auto& g = grams_[n];
    const double un2 = c1 * c1 * g.aa + 2.0 * c1 * c2 * g.ab + c2 * c2 * g.bb;
    lhs2 += std::pow(lambdas_[n], w) * un2;
  }
  RegularityRatio out;
  out.lhs = std::sqrt(std::max(lhs2, 0.0));
  out.rhs = graded_norm(data.c1, mu, lambdas_) + graded_norm(data.c2, mu + 0.5, lambdas_);
  if (out.rhs == 0.0) {
    out.zero_data = true;
    return out;
  }
  out.ratio = out.lhs / out.rhs;
  if (!std::isfinite(out.ratio)) throw NumericalFailure("regularity_ratio", "non-finite ratio");
  return out;
}

RegularityRatio regularity_ratio(RegularityKind kind, const SeriesSolution& sol, double theta, double mu) {
  sol.alpha.require_trace_regime("regularity_ratio");
  const auto r = kind == RegularityKind::nabla ? nabla_range(sol.alpha, mu) : dalpha_range(sol.alpha, mu);
  if (!(mu >= 0.0) || !(theta > r.lo && theta < r.hi))
    throw InadmissibleExponent("regularity_ratio: (theta, mu) = (" + std::to_string(theta) + ", " +
                               std::to_string(mu) + ") outside the admissible window");
  if (!any_nonzero(sol.data.c1) && !any_nonzero(sol.data.c2)) {
    RegularityRatio z;
    z.zero_data = true;
    return z;
  }
  return RegularityEvaluator(sol.alpha, sol.data.domain, sol.T).ratio(kind, sol.data, theta, mu);
}

DivergenceIndicator divergence_indicator(RegularityKind kind, double alpha, double theta, double mu, double T,
                                         double lambda_min) {
  require_trace_alpha(alpha, "divergence_indicator");
  if (!(T > 0.0) || !(lambda_min > 0.0)) throw InvalidArgument("divergence_indicator: T, lambda_min must be > 0");
  const double a = alpha;
  // lambda weights of unit-norm single-mode data: u1 = l^-mu e, u2 = l^-(mu+1/2) e
  const double s1 = kind == RegularityKind::nabla ? 1.0 + 2.0 * theta - 2.0 * mu : 2.0 - 2.0 * theta - 2.0 * mu;
  const double s2 = s1 - 1.0;

  DivergenceIndicator out;
  out.exponent = std::min(2.0 * a - 2.0 - a * s1, 2.0 * a - 4.0 - a * s2);

  constexpr int kDecades = 9;
  constexpr int kPerDecade = 12;
  const double t_min = T * std::pow(10.0, -kDecades);
  const double lambda_max = 100.0 * std::pow(t_min, -a);
  std::vector<double> lambdas;
  for (double l = lambda_min; l <= lambda_max; l *= std::sqrt(2.0)) lambdas.push_back(l);

  const int nt = kDecades * kPerDecade + 1;
  std::vector<double> t(static_cast<std::size_t>(nt));
  std::vector<double> env(t.size(), 0.0);
  for (int k = 0; k < nt; ++k) t[static_cast<std::size_t>(k)] = t_min * std::pow(10.0, double(k) / kPerDecade);
  t.back() = T;

  bool failed = false;
  std::string what;
#pragma omp parallel for schedule(dynamic, 4)
  for (int k = 0; k < nt; ++k) {
    try {
      const double tk = t[static_cast<std::size_t>(k)];
      double best = 0.0;
      for (double l : lambdas) {
        const double z = -l * std::pow(tk, a);
        const double ua = std::pow(tk, a - 1.0) * ml_value(a, a, z);
        const double ub = std::pow(tk, a - 2.0) * ml_value(a, a - 1.0, z);
        best = std::max({best, std::pow(l, s1) * ua * ua, std::pow(l, s2) * ub * ub});
      }
      env[static_cast<std::size_t>(k)] = best;
    } catch (const std::exception& e) {
#pragma omp critical(divergence_env)
      {
        failed = true;
        what = e.what();
      }
    }
  }
  if (failed) throw NumericalFailure("divergence_indicator", what);

  // slope over the first three decades
  const std::size_t nfit = 3 * kPerDecade + 1;
  out.fitted_exponent = loglog_slope(std::span(t).first(nfit), std::span(env).first(nfit));

  for (int d = 1; d <= kDecades; ++d) {
    const std::size_t first = static_cast<std::size_t>((kDecades - d) * kPerDecade);
    out.deltas.push_back(t[first]);
    out.integrals.push_back(quad::trapezoid(std::span(t).subspan(first), std::span(env).subspan(first)));
  }
  out.diverges = out.fitted_exponent <= -1.0;
  return out;
}

// ------------------------------------------------------------------ Rellich

VectorFieldH VectorFieldH::affine(double L) {
  if (!(L > 0.0)) throw InvalidArgument("VectorFieldH::affine: L must be positive");
  return {[L](double x) { return (2.0 * x - L) / L; }, [L](double) { return 2.0 / L; }};
}

void VectorFieldH::validate(double L) const {
  if (!h || !dh) throw InvalidArgument("VectorFieldH: h and its derivative are required");
  // outward normals: -1 at x = 0, +1 at x = L
  const double r0 = std::abs(-h(0.0) - 1.0);
  const double rL = std::abs(h(L) - 1.0);
  if (!(r0 <= 1e-12) || !(rL <= 1e-12))
    throw InvalidArgument("VectorFieldH: h must equal the outward normal on the boundary (|h.nu - 1| = " +
                          std::to_string(std::max(r0, rL)) + ")");
}

RellichResult rellich_residual(const SeriesSolution& sol, const VectorFieldH& h, double t, double theta,
                               int n_points) {
  const auto& d = sol.data.domain;
  if (d.kind() != DomainKind::interval) throw InvalidArgument("rellich_residual: interval domain required");
  if (!(t > 0.0)) throw InvalidArgument("rellich_residual: t must be positive");
  if (!(theta > 0.0 && theta < 1.0)) throw InvalidArgument("rellich_residual: theta must lie in (0, 1)");
  if (n_points < 9 || n_points % 2 == 0) throw InvalidArgument("rellich_residual: n_points must be odd and >= 9");
  const double L = d.L();
  h.validate(L);
  const int max_index = d.modes().back().i;
  if (2 * (n_points - 1) < 8 * max_index)
    throw InvalidArgument("rellich_residual: too few spatial points for the highest mode");

  const auto s = snapshot(sol, t);
  const auto lambdas = sol.lambdas();
  std::vector<double> dau(lambdas.size());
  for (std::size_t n = 0; n < lambdas.size(); ++n) dau[n] = -lambdas[n] * s.modal_values[n];

  const auto x = uniform_nodes(L, n_points);
  const auto ux = synthesize_dx(d, s.modal_values, x);
  const auto f = synthesize(d, dau, x);
  std::vector<double> pair(x.size());
  std::vector<double> grad(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    pair[k] = f[k] * h.h(x[k]) * ux[k];
    grad[k] = h.dh(x[k]) * ux[k] * ux[k];
  }
  const double dx = L / (n_points - 1);
  RellichResult out;
  out.rhs = quad::simpson(pair, dx) + 0.5 * quad::simpson(grad, dx);

  // sum over x in {0, L} of d_nu u (h u_x) - (1/2)(h nu) u_x^2
  const double nus[2] = {-1.0, 1.0};
  const double xs[2] = {0.0, L};
  for (int b = 0; b < 2; ++b) {
    const double u = ux[b == 0 ? 0 : ux.size() - 1];
    const double hb = h.h(xs[b]);
    out.lhs += nus[b] * u * hb * u - 0.5 * hb * nus[b] * u * u;
  }
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

// ------------------------------------------------------------------ adjoint

std::vector<FieldSnapshot> adjoint_solve(const ModalData& w, double alpha, double T, std::span<const double> times) {
  require_trace_alpha(alpha, "adjoint_solve");
  std::vector<double> s(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] >= 0.0 && times[k] < T)) throw InvalidArgument("adjoint_solve: times must lie in [0, T)");
    s[k] = T - times[k];
  }
  const SeriesSolution v(FracOrder(alpha), w, T);
  auto out = solve_series(v, s);
  for (std::size_t k = 0; k < out.size(); ++k) out[k].t = times[k];
  return out;
}

CaputoFdResult caputo_fd_solve(const TraceSeries& g, double alpha, double L, int nx, const TimeGrid& grid,
                               const SourceFn& source, kernels::Exec exec) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw InvalidArgument("caputo_fd_solve: alpha must lie in (1, 2)");
  if (!(L > 0.0)) throw InvalidArgument("caputo_fd_solve: L must be positive");
  if (nx < 129) throw InvalidArgument("caputo_fd_solve: at least 129 spatial nodes required");
  const int M = grid.cells();
  if (M < 256) throw InvalidArgument("caputo_fd_solve: at least 256 time cells required");
  const auto& t = grid.points();
  const double dt = grid.T() / M;
  for (int m = 0; m <= M; ++m)
    if (std::abs(t[static_cast<std::size_t>(m)] - m * dt) > 1e-9 * grid.T())
      throw InvalidArgument("caputo_fd_solve: uniform time grid required");
  if (g.nodes.size() != 2 || g.values.size() != t.size())
    throw InvalidArgument("caputo_fd_solve: boundary data must give 2 values at every grid time");
  for (const auto& row : g.values)
    for (double v : row)
      if (!std::isfinite(v)) throw InvalidArgument("caputo_fd_solve: boundary data must be finite");

  const double dx = L / (nx - 1);
  const int ni = nx - 2;  // interior unknowns
  const double beta = 2.0 - alpha;
  const double c0 = std::pow(dt, beta) * rgamma(beta + 2.0);
  // product-trapezoid weights of I^beta at t_m: w_{m,m} = c0, w_{m,i} = c0 * tw[m - i]
  std::vector<double> tw(static_cast<std::size_t>(M + 1), 0.0);
  for (int j = 1; j <= M; ++j)
    tw[static_cast<std::size_t>(j)] =
        std::pow(j + 1.0, beta + 1.0) - 2.0 * std::pow(j, beta + 1.0) + std::pow(j - 1.0, beta + 1.0);
  auto w0 = [&](int m) { return c0 * (std::pow(m - 1.0, beta + 1.0) - (m - 1.0 - beta) * std::pow(m, beta)); };

  auto xnode = [&](int i) { return (i + 1) * dx; };  // interior index -> x
  auto src = [&](int m, int i) { return source ? source(t[static_cast<std::size_t>(m)], xnode(i)) : 0.0; };
  auto bval = [&](int m, int side) { return g.values[static_cast<std::size_t>(m)][static_cast<std::size_t>(side)]; };

  std::vector<std::vector<double>> u(static_cast<std::size_t>(M + 1), std::vector<double>(ni, 0.0));
  std::vector<std::vector<double>> W(static_cast<std::size_t>(M + 1), std::vector<double>(ni, 0.0));

  // Tridiagonal solve of  a u_i - b (u_{i-1} + u_{i+1}) = r_i  (Thomas).
  auto solve = [&](double a, double b, std::vector<double>& r) {
    std::vector<double> cp(ni);
    double denom = a;
    cp[0] = -b / denom;
    r[0] /= denom;
    for (int i = 1; i < ni; ++i) {
      denom = a + b * cp[i - 1];
      cp[i] = -b / denom;
      r[i] = (r[i] + b * r[i - 1]) / denom;
    }
    for (int i = ni - 2; i >= 0; --i) r[i] -= cp[i] * r[i + 1];
  };
  auto lap = [&](const std::vector<double>& v, int m, int i) {
    const double l = i == 0 ? bval(m, 0) : v[i - 1];
    const double r = i == ni - 1 ? bval(m, 1) : v[i + 1];
    return (l - 2.0 * v[i] + r) / (dx * dx);
  };
  const double idx2 = 1.0 / (dx * dx);

  // first step: u_tt ~ 2 u_1 / dt^2 on [0, t_1], so I^beta u_tt(t_1) = 2 u_1 / (dt^2 Gamma(beta + 1)) dt^beta
  {
    const double a1 = 2.0 * std::pow(dt, beta) * rgamma(beta + 1.0) / (dt * dt);
    std::vector<double> r(ni);
    for (int i = 0; i < ni; ++i) r[i] = src(1, i);
    r[0] += bval(1, 0) * idx2;
    r[ni - 1] += bval(1, 1) * idx2;
    solve(a1 + 2.0 * idx2, idx2, r);
    u[1] = r;
    for (int i = 0; i < ni; ++i) W[0][i] = 2.0 * u[1][i] / (dt * dt);
  }

  double norm0 = 0.0;
  for (int m = 1; m < M; ++m) {
    std::vector<double> hist(ni, 0.0);
    const double wm0 = w0(m);
    auto history = [&](int i) {
      double s = wm0 * W[0][i];
      for (int k = 1; k < m; ++k) s += c0 * tw[static_cast<std::size_t>(m - k)] * W[static_cast<std::size_t>(k)][i];
      hist[i] = s;
    };
    if (exec == kernels::Exec::parallel) {
#pragma omp parallel for schedule(static)
      for (int i = 0; i < ni; ++i) history(i);
    } else {
      for (int i = 0; i < ni; ++i) history(i);
    }
    std::vector<double> r(ni);
    const auto& um = u[static_cast<std::size_t>(m)];
    const auto& up = u[static_cast<std::size_t>(m - 1)];
    for (int i = 0; i < ni; ++i)
      r[i] = c0 * (2.0 * um[i] - up[i]) / (dt * dt) + 0.5 * lap(up, m - 1, i) - hist[i] + src(m, i);
    r[0] += 0.5 * bval(m + 1, 0) * idx2;
    r[ni - 1] += 0.5 * bval(m + 1, 1) * idx2;
    solve(c0 / (dt * dt) + idx2, 0.5 * idx2, r);
    u[static_cast<std::size_t>(m + 1)] = r;
    for (int i = 0; i < ni; ++i)
      W[static_cast<std::size_t>(m)][i] = (r[i] - 2.0 * um[i] + up[i]) / (dt * dt);

    double nrm = 0.0;
    for (double v : r) nrm = std::max(nrm, std::abs(v));
    if (!std::isfinite(nrm)) throw NumericalFailure("caputo_fd_solve", "non-finite state at step " + std::to_string(m));
    if (m == 1) norm0 = std::max(nrm, 1e-300);
    if (nrm > 1e6 * std::max(norm0, 1.0))
      throw NumericalFailure("caputo_fd_solve", "unstable: state norm grew beyond 1e6 at step " + std::to_string(m));
  }

  CaputoFdResult out;
  out.x = uniform_nodes(L, nx);
  out.u_T.assign(static_cast<std::size_t>(nx), 0.0);
  out.ut_T.assign(static_cast<std::size_t>(nx), 0.0);
  auto full = [&](int m, int j) {
    if (j == 0) return bval(m, 0);
    if (j == nx - 1) return bval(m, 1);
    return u[static_cast<std::size_t>(m)][j - 1];
  };
  for (int j = 0; j < nx; ++j) {
    out.u_T[j] = full(M, j);
    out.ut_T[j] = (3.0 * full(M, j) - 4.0 * full(M - 1, j) + full(M - 2, j)) / (2.0 * dt);
  }
  return out;
}

DualityResult duality_check(const ModalData& w, double alpha, double T, int M, int nx) {
  require_trace_alpha(alpha, "duality_check");
  const auto& d = w.domain;
  if (d.kind() != DomainKind::interval) throw InvalidArgument("duality_check: interval domain required");
  if (any_nonzero(w.c2))
    throw InvalidArgument("duality_check: w2 must vanish (the boundary data would be unbounded at t = T)");
  DualityResult out;
  if (!any_nonzero(w.c1)) return out;

  // d/dt I_{T-} w(T) = w1 means the forward data of v(s) = w(T - s) are (-w1, w2)
  ModalData vd = w;
  for (std::size_t n = 0; n < w.c1.size(); ++n) vd.c1[n] = -w.c1[n];

  const auto grid = TimeGrid::uniform(T, M);
  const auto& t = grid.points();
  const std::vector<double> times(t.begin(), t.end() - 1);
  const auto snaps = adjoint_solve(vd, alpha, T, times);
  TraceSeries g;
  g.nodes = boundary_nodes(d);
  g.times = t;
  for (const auto& s : snaps) g.values.push_back(normal_trace_modal(d, s.modal_values, g.nodes));
  g.values.push_back({0.0, 0.0});  // v(0) = 0 when w2 = 0

  const auto fd = caputo_fd_solve(g, alpha, d.L(), nx, grid);
  const auto w1 = synthesize(d, w.c1, fd.x);
  const auto w2 = synthesize(d, w.c2, fd.x);
  std::vector<double> integrand(fd.x.size());
  for (std::size_t k = 0; k < fd.x.size(); ++k) integrand[k] = fd.u_T[k] * w1[k] - fd.ut_T[k] * w2[k];
  const double dx = d.L() / (nx - 1);
  out.lhs = nx % 2 == 1 ? quad::simpson(integrand, dx) : quad::trapezoid(fd.x, integrand);

  const SeriesSolution v(FracOrder(alpha), vd, T);
  out.rhs = trace_energy(v, TimeGrid::geometric(T, std::max(M, 256))).value;
  out.rel_err = std::abs(out.lhs - out.rhs) / std::max(out.rhs, 1e-300);
  return out;
}

}  // namespace rlfrac
