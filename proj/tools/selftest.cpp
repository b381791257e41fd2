#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "rlfrac/cli.hpp"
#include "rlfrac/errors.hpp"
#include "rlfrac/fractional_ops.hpp"
#include "rlfrac/kernels.hpp"
#include "rlfrac/mittag_leffler.hpp"
#include "rlfrac/random_data.hpp"
#include "rlfrac/rl_solver.hpp"
#include "rlfrac/spectral_domain.hpp"
#include "rlfrac/time_grid.hpp"
#include "rlfrac/trace_duality.hpp"

namespace rlfrac::cli {

namespace {

constexpr double kPi = std::numbers::pi;

struct Check {
  std::string name;
  double tol;
  std::function<double()> measure;  // value <= tol passes
};

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

std::vector<Check> checks(std::uint64_t seed) {
  std::vector<Check> c;

  c.push_back({"ml.exp", 1e-10, [] {
                 double e = 0.0;
                 for (int k = 0; k <= 40; ++k) {
                   const double x = -10.0 + 0.5 * k;
                   e = std::max(e, std::abs(ml_value(1.0, 1.0, x) - std::exp(x)) / std::max(1.0, std::exp(x)));
                 }
                 return e;
               }});
  c.push_back({"ml.cos", 1e-10, [] {
                 double e = 0.0;
                 for (int k = 0; k <= 40; ++k) {
                   const double x = 0.25 * k;
                   e = std::max(e, std::abs(ml_value(2.0, 1.0, -x * x) - std::cos(x)));
                 }
                 return e;
               }});
  c.push_back({"ml.at_zero", 1e-12, [] {
                 double e = 0.0;
                 for (double a : {0.5, 1.3, 1.8})
                   for (double b : {0.6, 1.0, 2.5}) e = std::max(e, std::abs(ml_value(a, b, 0.0) - rgamma(b)));
                 return e;
               }});
  c.push_back({"ml.branch_agreement", 1e-7, [] {
                 double e = 0.0;
                 for (double a : {1.3, 1.6, 1.9})
                   for (int k = 0; k <= 8; ++k) {
                     const double z = -4.0 - 0.5 * k;
                     e = std::max(e, std::abs(ml_taylor({a, a}, z, true).value - ml_contour({a, a}, z).value));
                   }
                 return e;
               }});
  c.push_back({"ml.bound_refinement", 0.05, [] {
                 const double s1 = ml_bound_sup({1.8, 1.8}, 1000.0, 2001);
                 const double s2 = ml_bound_sup({1.8, 1.8}, 1000.0, 20001);
                 return std::abs(s2 - s1) / s2;
               }});
  c.push_back({"kernels.serial_equals_parallel", 0.0, [] {
                 const auto g = TimeGrid::geometric(1.0, 200);
                 std::vector<double> f(g.size());
                 for (std::size_t k = 0; k < f.size(); ++k) f[k] = std::cos(3.0 * g[k]);
                 const auto a = kernels::product_integral(g.points(), f, 0.4, std::nullopt, kernels::Exec::serial);
                 const auto b = kernels::product_integral(g.points(), f, 0.4, std::nullopt, kernels::Exec::parallel);
                 const std::vector<double> lam{1.0, 4.0, 9.0, 100.0};
                 const auto ta = kernels::ml_table(1.7, 1.7, lam, g.points(), kernels::Exec::serial);
                 const auto tb = kernels::ml_table(1.7, 1.7, lam, g.points(), kernels::Exec::parallel);
                 return (a == b && ta == tb) ? 0.0 : 1.0;
               }});
  c.push_back({"ops.semigroup", 1e-4, [] {
                 const auto f = SampledFunction::sample(TimeGrid::uniform(1.0, 256), [](double t) { return std::cos(t); });
                 return semigroup_residual(0.4, 0.7, f);
               }});
  c.push_back({"ops.int_by_parts", 1e-4, [] {
                 const auto g = TimeGrid::uniform(1.0, 256);
                 const auto f = SampledFunction::sample(g, [](double t) { return std::exp(t); });
                 const auto h = SampledFunction::sample(g, [](double t) { return std::cos(2.0 * t); });
                 return int_by_parts_residual(0.6, f, h);
               }});
  c.push_back({"ops.ml_integral_identity", 1e-4, [] {
                 return ml_integral_residual(1.8, 1.0, -3.0, TimeGrid::uniform(1.0, 256));
               }});
  c.push_back({"domain.project_synthesize", 1e-12, [seed] {
                 const auto d = DomainSpec::interval(kPi, 8);
                 const auto m = random_modal_data(d, seed, DataProfile::parse("flat"));
                 const auto x = uniform_nodes(kPi, 257);
                 return max_abs_diff(project(d, synthesize(d, m.c1, x)), m.c1);
               }});
  c.push_back({"solver.caputo_transform", 1e-3, [seed] {
                 const auto d = DomainSpec::interval(kPi, 4);
                 const SeriesSolution s(FracOrder(1.7), random_modal_data(d, seed, DataProfile::parse("powerlaw(2)")),
                                        1.2);
                 return caputo_transform_check(s, 0.2, 1.2, 128);
               }});
  c.push_back({"solver.weak_form", 1e-10, [seed] {
                 const auto d = DomainSpec::interval(kPi, 6);
                 const SeriesSolution s(FracOrder(1.8), random_modal_data(d, seed, DataProfile::parse("powerlaw(2)")),
                                        1.0);
                 const std::vector<double> times{0.1, 0.5, 1.0};
                 return weak_form_residual(s, 2, times);
               }});
  c.push_back({"solver.initial_conditions", 1e-2, [seed] {
                 const auto d = DomainSpec::interval(kPi, 8);
                 const SeriesSolution s(FracOrder(1.8), random_modal_data(d, seed, DataProfile::parse("powerlaw(2)")),
                                        1.0);
                 const std::vector<double> t{1e-1, 1e-2, 1e-3};
                 const auto r = initial_check(s, t, 0.3);
                 return r.monotone ? std::max(r.err1.back(), r.err2.back()) : 1.0;
               }});
  c.push_back({"intervals.nonempty_inside", 0.0, [] {
                 int bad = 0;
                 for (int k = 1; k < 20; ++k) {
                   const double a = 1.5 + 0.025 * k;
                   const auto r = admissible_intervals(a);
                   for (int j = 1; j < 10; ++j) {
                     const double mu = r.mu_lo + (r.mu_hi - r.mu_lo) * j / 10.0;
                     if (admissible_intervals(a, mu).window->empty) ++bad;
                   }
                   if (!admissible_intervals(a, 0.0).window->empty) ++bad;
                 }
                 return static_cast<double>(bad);
               }});
  c.push_back({"trace.rellich", 1e-6, [seed] {
                 const auto d = DomainSpec::interval(kPi, 12);
                 const SeriesSolution s(FracOrder(1.8), random_modal_data(d, seed, DataProfile::parse("powerlaw(2)")),
                                        1.0);
                 double r = 0.0;
                 for (double t : {0.1, 0.5, 1.0})
                   r = std::max(r, rellich_residual(s, VectorFieldH::affine(kPi), t).residual);
                 return r;
               }});
  c.push_back({"trace.energy_quadratic", 1e-12, [seed] {
                 const auto d = DomainSpec::interval(kPi, 4);
                 const auto m = random_modal_data(d, seed, DataProfile::parse("powerlaw(2)"));
                 const auto g = TimeGrid::geometric(1.0, 128);
                 const double e1 = trace_energy(SeriesSolution(FracOrder(1.8), m, 1.0), g).value;
                 const double e2 = trace_energy(SeriesSolution(FracOrder(1.8), m.scaled(2.0), 1.0), g).value;
                 return std::abs(e2 - 4.0 * e1) / e2;
               }});
  c.push_back({"trace.regularity_finite", 0.0, [seed] {
                 const auto d = DomainSpec::interval(kPi, 8);
                 const RegularityEvaluator ev(1.8, d, 1.0);
                 const auto m = normalize_unit(random_modal_data(d, seed, DataProfile::parse("powerlaw(2)")), 0.15);
                 const double a = ev.ratio(RegularityKind::nabla, m, 0.25, 0.15).ratio;
                 const double b = ev.ratio(RegularityKind::dalpha, m, 0.25, 0.15).ratio;
                 return (std::isfinite(a) && std::isfinite(b) && a > 0.0 && b > 0.0) ? 0.0 : 1.0;
               }});
  c.push_back({"trace.duality", 2e-2, [] {
                 const ModalData w(DomainSpec::interval(kPi, 1), {1.0}, {0.0});
                 return duality_check(w, 1.8, 1.0, 256, 129).rel_err;
               }});
  return c;
}

}  // namespace

SelftestReport selftest(std::uint64_t seed) {
  SelftestReport r;
  r.text = "selftest seed=" + std::to_string(seed) + "\n";
  for (const auto& c : checks(seed)) {
    double v = 0.0;
    std::string note;
    try {
      v = c.measure();
    } catch (const std::exception& e) {
      v = std::numeric_limits<double>::quiet_NaN();
      note = std::string(" (") + e.what() + ")";
    }
    const bool pass = v <= c.tol;
    if (!pass) ++r.failures;
    char line[256];
    std::snprintf(line, sizeof line, "%-34s %s  value=%.6e  tol=%.1e", c.name.c_str(), pass ? "PASS" : "FAIL", v,
                  c.tol);
    r.text += line + note + "\n";
  }
  r.text += r.failures == 0 ? "all checks passed\n" : std::to_string(r.failures) + " check(s) failed\n";
  return r;
}

}  // namespace rlfrac::cli
