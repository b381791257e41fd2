#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rlfrac/errors.hpp"
#include "rlfrac/fractional_ops.hpp"
#include "rlfrac/mittag_leffler.hpp"
#include "rlfrac/random_data.hpp"
#include "rlfrac/rl_solver.hpp"

using namespace rlfrac;

namespace {

constexpr double kPi = std::numbers::pi;

SeriesSolution one_mode(double alpha, double c1, double c2, double T = 1.0) {
  return SeriesSolution(FracOrder(alpha), ModalData(DomainSpec::interval(kPi, 1), {c1}, {c2}), T);
}

SeriesSolution random_solution(double alpha, int n, std::uint64_t seed, double T = 1.0) {
  return SeriesSolution(FracOrder(alpha),
                        random_modal_data(DomainSpec::interval(kPi, n), seed, DataProfile::parse("powerlaw(2)")), T);
}

}  // namespace

TEST_CASE("FracOrder validation") {
  CHECK_THROWS_AS(FracOrder(1.0), InvalidArgument);
  CHECK_THROWS_AS(FracOrder(2.0), InvalidArgument);
  CHECK_FALSE(FracOrder(1.4).trace_regime());
  CHECK(FracOrder(1.6).trace_regime());
  CHECK_THROWS_AS(FracOrder(1.2).require_trace_regime("test"), InvalidArgument);
}

TEST_CASE("scalar_solution: closed forms and oracles") {
  CHECK(scalar_solution(1.8, 0.0, 1.0, 0.0, 1.0) == doctest::Approx(1.0736712740308343279).epsilon(1e-12));
  for (double t : {0.1, 1.0, 7.0}) CHECK(scalar_solution(1.8, 1.0, 0.0, 0.0, t) == 0.0);
  // mpmath series oracle
  CHECK(scalar_solution(1.7, 4.0, 1.0, 0.5, 0.8) == doctest::Approx(0.061816916331947095909).epsilon(1e-10));
  CHECK(scalar_solution(1.8, 4.0, 1.0, 0.5, 0.7) == doctest::Approx(0.32755498131399627802).epsilon(1e-10));
  CHECK(scalar_solution(1.6, 1.0, 0.0, 1.0, 2.0) == doctest::Approx(-0.48734105842144987576).epsilon(1e-10));
  CHECK(scalar_solution(1.8, 1.0, 1.0, 0.0, 0.0) == 0.0);
  CHECK_THROWS_AS(scalar_solution(1.8, 1.0, 1.0, 1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(scalar_solution(1.8, -1.0, 1.0, 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(scalar_solution(2.5, 1.0, 1.0, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("scalar_solution solves D^a u = -lambda u numerically") {
  // D^a u + 4u on [0.1, 1.5]; u ~ t^(a-2) at the origin
  const double a = 1.7;
  const auto g = TimeGrid::uniform(1.5, 512);
  const auto f = SampledFunction::sample(g, [&](double t) { return t > 0.0 ? scalar_solution(a, 4.0, 1.0, 0.5, t) : 0.0; });
  const auto d = rl_derivative(RLOrder::alpha, a, f, a - 2.0);
  double err = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (g[k] >= 0.1) err = std::max(err, std::abs(d.values[k] + 4.0 * f.values[k]));
  CHECK(err < 1e-3);
}

TEST_CASE("solve_series") {
  const auto s = one_mode(1.8, 1.0, 0.0);
  const std::vector<double> times{0.25, 0.5, 1.0};
  const auto snaps = solve_series(s, times);
  REQUIRE(snaps.size() == 3);
  for (const auto& sn : snaps)
    CHECK(sn.modal_values[0] ==
          doctest::Approx(std::pow(sn.t, 0.8) * ml_value(1.8, 1.8, -std::pow(sn.t, 1.8))).epsilon(1e-14));
  const SeriesSolution z(FracOrder(1.8), ModalData::zeros(DomainSpec::interval(kPi, 8)), 1.0);
  for (const auto& sn : solve_series(z, times))
    for (double v : sn.modal_values) CHECK(v == 0.0);
  const std::vector<double> bad{0.5, 1.5};
  CHECK_THROWS_AS(solve_series(s, bad), InvalidArgument);
  const std::vector<double> zero{0.0};
  CHECK_THROWS_AS(solve_series(s, zero), InvalidArgument);
}

TEST_CASE("solve_series: linear in the data, serial equals parallel") {
  const auto d = DomainSpec::interval(kPi, 12);
  const auto a = random_modal_data(d, 1, DataProfile::parse("flat"));
  const auto b = random_modal_data(d, 2, DataProfile::parse("flat"));
  std::vector<double> c1(12), c2(12);
  for (int n = 0; n < 12; ++n) {
    c1[n] = 2.0 * a.c1[n] - 3.0 * b.c1[n];
    c2[n] = 2.0 * a.c2[n] - 3.0 * b.c2[n];
  }
  const std::vector<double> times{0.01, 0.3, 1.0};
  const auto ua = solve_series(SeriesSolution(FracOrder(1.7), a, 1.0), times);
  const auto ub = solve_series(SeriesSolution(FracOrder(1.7), b, 1.0), times);
  const auto uc = solve_series(SeriesSolution(FracOrder(1.7), ModalData(d, c1, c2), 1.0), times);
  for (std::size_t k = 0; k < times.size(); ++k)
    for (int n = 0; n < 12; ++n) {
      const double lin = 2.0 * ua[k].modal_values[n] - 3.0 * ub[k].modal_values[n];
      CHECK(std::abs(uc[k].modal_values[n] - lin) <= 1e-13 * (1.0 + std::abs(lin)));
    }
  const auto sol = SeriesSolution(FracOrder(1.7), a, 1.0);
  const auto ser = solve_series(sol, times, kernels::Exec::serial);
  const auto par = solve_series(sol, times, kernels::Exec::parallel);
  for (std::size_t k = 0; k < times.size(); ++k) CHECK(ser[k].modal_values == par[k].modal_values);
}

TEST_CASE("energy envelopes: slopes a-2 and 2a-4") {
  // sup over unit data of ||u(t)||^2_{H1_0}: (u1 in L2) and (u2 in H1_0)
  const double a = 1.8;
  const auto l = DomainSpec::interval(kPi, 64).lambdas();
  // small-t windows: the u1 sup needs lambda_max t^a >> 1, the u2 sup lambda_1 t^a << 1
  std::vector<double> t1, t2, e1, e2;
  for (int k = 0; k <= 10; ++k) {
    const double ta = 0.05 * std::pow(4.0, k / 10.0);
    const double tb = 0.002 * std::pow(4.0, k / 10.0);
    double s1 = 0.0;
    double s2 = 0.0;
    for (double lam : l) {
      s1 = std::max(s1, lam * std::pow(scalar_solution(a, lam, 1.0, 0.0, ta), 2));
      s2 = std::max(s2, std::pow(scalar_solution(a, lam, 0.0, 1.0, tb), 2));
    }
    t1.push_back(ta);
    t2.push_back(tb);
    e1.push_back(s1);
    e2.push_back(s2);
  }
  CHECK(std::abs(loglog_slope(t1, e1) - (a - 2.0)) <= 0.1 * std::abs(a - 2.0));
  CHECK(std::abs(loglog_slope(t2, e2) - (2.0 * a - 4.0)) <= 0.1 * std::abs(2.0 * a - 4.0));
}

TEST_CASE("d_alpha_minus1 and d_alpha") {
  const auto s = one_mode(1.8, 1.0, 0.0);
  CHECK(d_alpha(s, 1.0)[0] == doctest::Approx(-ml_value(1.8, 1.8, -1.0)).epsilon(1e-14));
  CHECK(std::abs(d_alpha_minus1(s, 1e-8)[0] - 1.0) < 1e-6);
  CHECK_THROWS_AS(d_alpha_minus1(s, 0.0), InvalidArgument);
  CHECK_THROWS_AS(d_alpha(s, -1.0), InvalidArgument);
  const auto r = random_solution(1.8, 8, 9);
  const auto da = d_alpha(r, 0.4);
  const auto un = snapshot(r, 0.4).modal_values;
  const auto l = r.lambdas();
  for (int n = 0; n < 8; ++n) CHECK(da[n] == doctest::Approx(-l[n] * un[n]));
}

TEST_CASE("d_alpha_minus1 against the numeric operator") {
  const double a = 1.8;
  const auto s = one_mode(a, 1.0, 0.0);
  const auto g = TimeGrid::uniform(1.0, 512);
  const auto f = SampledFunction::sample(g, [&](double t) { return t > 0.0 ? snapshot(s, t).modal_values[0] : 0.0; });
  const auto d = rl_derivative(RLOrder::alpha_minus_1, a, f, a - 1.0);
  double err = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (g[k] >= 0.1) err = std::max(err, std::abs(d.values[k] - d_alpha_minus1(s, g[k])[0]));
  CHECK(err < 1e-3);
}

TEST_CASE("initial_check") {
  const std::vector<double> t{1e-1, 1e-2, 1e-3};
  const auto z = initial_check(SeriesSolution(FracOrder(1.8), ModalData::zeros(DomainSpec::interval(kPi, 4)), 1.0), t, 0.3);
  for (double e : z.err1) CHECK(e == 0.0);
  for (double e : z.err2) CHECK(e == 0.0);

  const auto d = DomainSpec::interval(kPi, 4);
  const auto r1 = initial_check(SeriesSolution(FracOrder(1.8), ModalData(d, {1, 0, 0, 0}, {0, 0, 0, 0}), 1.0), t, 0.3);
  CHECK(r1.err1.back() <= 1e-2);
  CHECK(r1.monotone);
  const auto r2 = initial_check(SeriesSolution(FracOrder(1.8), ModalData(d, {0, 0, 0, 0}, {0, 1, 0, 0}), 1.0), t, 0.3);
  CHECK(r2.err2.back() <= 1e-2);
  CHECK(r2.monotone);

  CHECK_THROWS_AS(initial_check(one_mode(1.8, 1, 0), t, 0.05), InvalidArgument);
  const std::vector<double> up{1e-3, 1e-2};
  CHECK_THROWS_AS(initial_check(one_mode(1.8, 1, 0), up, 0.3), InvalidArgument);
}

TEST_CASE("caputo_transform_check") {
  const SeriesSolution z(FracOrder(1.7), ModalData::zeros(DomainSpec::interval(kPi, 3)), 1.2);
  CHECK(caputo_transform_check(z, 0.2, 1.2, 64) == 0.0);
  const auto s = one_mode(1.7, 1.0, 0.5, 1.2);
  const double r128 = caputo_transform_check(s, 0.2, 1.2, 128);
  const double r256 = caputo_transform_check(s, 0.2, 1.2, 256);
  CHECK(r128 <= 1e-3);
  CHECK(r128 / r256 == doctest::Approx(4.0).epsilon(0.1));
  CHECK_THROWS_AS(caputo_transform_check(s, 0.2, 1.2, 16), InvalidArgument);

  // v = I^(2-a)u: v(0) = c2, v_t(0) = c1
  const auto m = random_solution(1.7, 5, 4);
  const double h = 1e-7;
  const auto v0 = i_two_minus_alpha(m, 1e-12);
  const auto v1 = i_two_minus_alpha(m, h);
  const auto v2 = i_two_minus_alpha(m, 2.0 * h);
  for (int n = 0; n < 5; ++n) {
    CHECK(std::abs(v0[n] - m.data.c2[n]) < 1e-8);
    CHECK(std::abs((v2[n] - v1[n]) / h - m.data.c1[n]) < 1e-4);
  }
}

TEST_CASE("weak_form_residual") {
  const auto s = random_solution(1.8, 6, 3);
  const std::vector<double> times{0.05, 0.3, 1.0};
  for (int m = 1; m <= 6; ++m) CHECK(weak_form_residual(s, m, times) <= 1e-9);
  const SeriesSolution z(FracOrder(1.8), ModalData::zeros(DomainSpec::interval(kPi, 6)), 1.0);
  CHECK(weak_form_residual(z, 2, times) == 0.0);
  CHECK_THROWS_AS(weak_form_residual(s, 7, times), InvalidArgument);

  // central difference of <D^(a-1)u, e_m> against -lambda_m u_m, O(h^2)
  const auto l = s.lambdas();
  auto fd_err = [&](double h) {
    double e = 0.0;
    for (double t : times) {
      if (t + h > s.T) t = s.T - h;
      const double dd = (d_alpha_minus1(s, t + h)[2] - d_alpha_minus1(s, t - h)[2]) / (2.0 * h);
      e = std::max(e, std::abs(dd + l[2] * snapshot(s, t).modal_values[2]));
    }
    return e;
  };
  const double e1 = fd_err(1e-2);
  const double e2 = fd_err(5e-3);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("norms of snapshots") {
  const auto s = one_mode(1.8, 1.0, 0.0);
  const auto sn = snapshot(s, 0.5);
  CHECK(norm_h10(s, sn) == doctest::Approx(std::abs(sn.modal_values[0])));
  const SeriesSolution s2(FracOrder(1.8), ModalData(DomainSpec::interval(kPi, 2), {0, 1}, {0, 0}), 1.0);
  const auto sn2 = snapshot(s2, 0.5);
  CHECK(norm_h10(s2, sn2) == doctest::Approx(2.0 * std::abs(sn2.modal_values[1])));
  CHECK(norm_h2(s2, sn2) == doctest::Approx(4.0 * std::abs(sn2.modal_values[1])));
}

TEST_CASE("loglog_slope and decay_slopes plumbing") {
  std::vector<double> x, y;
  for (int k = 1; k <= 8; ++k) {
    x.push_back(k);
    y.push_back(3.0 * std::pow(k, -1.5));
  }
  CHECK(loglog_slope(x, y) == doctest::Approx(-1.5));
  const auto s = one_mode(1.8, 1.0, 1.0, 100.0);
  CHECK_THROWS_AS(decay_slopes(s, 10.0, 100.0, 4), InvalidArgument);
  CHECK_THROWS_AS(decay_slopes(s, 10.0, 5.0), InvalidArgument);
  const auto d = decay_slopes(s, 10.0, 100.0);
  // both components decay, the u2 part faster
  CHECK(d.slope_u1 < 0.0);
  CHECK(d.slope_u2 < d.slope_u1);
}
