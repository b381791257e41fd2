#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rlfrac/errors.hpp"
#include "rlfrac/quadrature.hpp"
#include "rlfrac/random_data.hpp"
#include "rlfrac/spectral_domain.hpp"

using namespace rlfrac;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("eigenpairs: interval and rectangle") {
  const auto d = DomainSpec::interval(kPi, 3);
  CHECK(d.lambdas() == std::vector<double>{1.0, 4.0, 9.0});
  CHECK(DomainSpec::interval(1.0, 1).lambdas()[0] == doctest::Approx(kPi * kPi));
  const auto r = DomainSpec::rectangle(kPi, kPi, 6);
  const auto& m = r.modes();
  CHECK(m[0].lambda == doctest::Approx(2.0));
  // ties broken by (i, j)
  CHECK(m[1].i == 1);
  CHECK(m[1].j == 2);
  CHECK(m[2].i == 2);
  CHECK(m[2].j == 1);
  CHECK(m[3].lambda == doctest::Approx(8.0));
  for (std::size_t k = 1; k < m.size(); ++k) CHECK(m[k - 1].lambda <= m[k].lambda);
  CHECK_THROWS_AS(DomainSpec::interval(-1.0, 3), InvalidArgument);
  CHECK_THROWS_AS(DomainSpec::interval(1.0, 0), InvalidArgument);
}

TEST_CASE("interval eigenvalues are distinct and match (n pi / L)^2") {
  const auto d = DomainSpec::interval(2.5, 40);
  const auto l = d.lambdas();
  for (int n = 1; n <= 40; ++n) CHECK(l[n - 1] == doctest::Approx(std::pow(n * kPi / 2.5, 2)));
  for (std::size_t k = 1; k < l.size(); ++k) CHECK(l[k] > l[k - 1]);
}

TEST_CASE("project: unit vector, zero field, parabola") {
  const auto d = DomainSpec::interval(1.0, 6);
  const auto x = uniform_nodes(1.0, 257);
  std::vector<double> e2(x.size());
  std::vector<double> par(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    e2[k] = d.eigenfunction(1, x[k]);
    par[k] = x[k] * (1.0 - x[k]);
  }
  const auto c = project(d, e2);
  for (int n = 0; n < 6; ++n) CHECK(std::abs(c[n] - (n == 1 ? 1.0 : 0.0)) < 1e-8);
  const auto z = project(d, std::vector<double>(x.size(), 0.0));
  for (double v : z) CHECK(v == 0.0);
  const auto p = project(d, par);
  for (int n = 1; n <= 6; ++n) {
    // quadrature oracle: 2 sqrt2 (1 - (-1)^n) / (n pi)^3
    const double exact = 2.0 * std::sqrt(2.0) * (1.0 - std::pow(-1.0, n)) / std::pow(n * kPi, 3);
    CHECK(std::abs(p[n - 1] - exact) < 1e-8);
  }
}

TEST_CASE("project: resolution check") {
  const auto d = DomainSpec::interval(1.0, 16);
  CHECK_THROWS_AS(project(d, std::vector<double>(33, 0.0)), InvalidArgument);
  CHECK_NOTHROW(project(d, std::vector<double>(65, 0.0)));
}

TEST_CASE("synthesize and the project round trip") {
  const auto d = DomainSpec::interval(1.0, 8);
  const std::vector<double> one{1.0};
  const std::vector<double> x{0.5};
  CHECK(synthesize(d, one, x)[0] == doctest::Approx(std::sqrt(2.0)));
  const auto xs = uniform_nodes(1.0, 129);
  const auto zero = synthesize(d, std::vector<double>(8, 0.0), xs);
  for (double v : zero) CHECK(v == 0.0);
  const auto m = random_modal_data(d, 11, DataProfile::parse("flat"));
  const auto back = project(d, synthesize(d, m.c1, xs));
  for (int n = 0; n < 8; ++n) CHECK(std::abs(back[n] - m.c1[n]) < 1e-8);
}

TEST_CASE("rectangle project/synthesize round trip") {
  const auto d = DomainSpec::rectangle(1.0, 2.0, 10);
  const auto m = random_modal_data(d, 5, DataProfile::parse("flat"));
  const auto x = uniform_nodes(1.0, 65);
  const auto y = uniform_nodes(2.0, 129);
  const auto f = synthesize(d, m.c1, x, y);
  const auto back = project(d, f, 65, 129);
  for (int n = 0; n < 10; ++n) CHECK(std::abs(back[n] - m.c1[n]) < 1e-8);
}

TEST_CASE("orthonormality: quadrature Gram matrix is the identity") {
  for (const auto& d : {DomainSpec::interval(kPi, 12), DomainSpec::interval(0.7, 12)}) {
    const auto x = uniform_nodes(d.L(), 513);
    const auto w = quad::simpson_weights(x.size(), d.L() / 512.0);
    for (int a = 0; a < 12; ++a)
      for (int b = 0; b < 12; ++b) {
        double s = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) s += w[k] * d.eigenfunction(a, x[k]) * d.eigenfunction(b, x[k]);
        CHECK(std::abs(s - (a == b ? 1.0 : 0.0)) < 1e-8);
      }
  }
}

TEST_CASE("Parseval for band-limited fields") {
  const auto d = DomainSpec::interval(2.0, 10);
  const auto m = random_modal_data(d, 3, DataProfile::parse("powerlaw(1)"));
  const auto x = uniform_nodes(2.0, 257);
  const auto f = synthesize(d, m.c1, x);
  std::vector<double> f2(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) f2[k] = f[k] * f[k];
  const double l2 = std::sqrt(quad::simpson(f2, 2.0 / 256.0));
  CHECK(std::abs(l2 - graded_norm(m.c1, 0.0, d.lambdas())) < 1e-8);
}

TEST_CASE("graded_norm") {
  const auto l = DomainSpec::interval(kPi, 3).lambdas();
  const std::vector<double> c{3.0, 4.0, 0.0};
  CHECK(graded_norm(c, 0.0, l) == doctest::Approx(5.0));
  CHECK(graded_norm(std::vector<double>{1.0, 0.0, 0.0}, 0.5, l) == doctest::Approx(1.0));
  CHECK(graded_norm(std::vector<double>{0.0, 1.0, 0.0}, -0.5, l) == doctest::Approx(0.5));
  // H^1_0 pairing: ||e_1'||_{L2} = lambda_1^(1/2)
  const auto d = DomainSpec::interval(kPi, 1);
  const auto x = uniform_nodes(kPi, 257);
  std::vector<double> g2(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) g2[k] = std::pow(d.eigenfunction_dx(0, x[k]), 2);
  CHECK(std::sqrt(quad::simpson(g2, kPi / 256.0)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("graded_norm is nondecreasing in theta for modes with lambda >= 1") {
  const auto l = DomainSpec::interval(kPi, 8).lambdas();
  for (int n = 0; n < 8; ++n) {
    std::vector<double> c(8, 0.0);
    c[n] = 0.7;
    double prev = graded_norm(c, -1.0, l);
    for (double th = -0.9; th <= 1.5; th += 0.1) {
      const double v = graded_norm(c, th, l);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("ModalData validation and helpers") {
  const auto d = DomainSpec::interval(1.0, 3);
  CHECK_THROWS_AS(ModalData(d, {1.0, 2.0}, {0.0, 0.0, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(ModalData(d, {1.0, std::nan(""), 0.0}, {0.0, 0.0, 0.0}), InvalidArgument);
  const ModalData m(d, {1.0, 2.0, 3.0}, {4.0, 5.0, 6.0});
  const auto t = m.truncated(2);
  CHECK(t.domain.n_modes() == 2);
  CHECK(t.c2 == std::vector<double>{4.0, 5.0});
  CHECK(m.scaled(2.0).c1 == std::vector<double>{2.0, 4.0, 6.0});
  CHECK(ModalData::zeros(d).c1 == std::vector<double>(3, 0.0));
}

TEST_CASE("random data: deterministic, profile-weighted, normalizable") {
  const auto d = DomainSpec::interval(kPi, 16);
  const auto a = random_modal_data(d, 42, DataProfile::parse("powerlaw(2)"));
  const auto b = random_modal_data(d, 42, DataProfile::parse("powerlaw(2)"));
  const auto c = random_modal_data(d, 43, DataProfile::parse("powerlaw(2)"));
  CHECK(a.c1 == b.c1);
  CHECK(a.c2 == b.c2);
  CHECK(a.c1 != c.c1);
  const auto n = normalize_unit(a, 0.15);
  CHECK(graded_norm(n.c1, 0.15, d.lambdas()) == doctest::Approx(1.0));
  CHECK(graded_norm(n.c2, 0.65, d.lambdas()) == doctest::Approx(1.0));
  CHECK(DataProfile::parse("flat").str() == "flat");
  CHECK(DataProfile::parse("powerlaw(1.5)").weight(4) == doctest::Approx(0.125));
  CHECK_THROWS_AS(DataProfile::parse("powerlaw()"), InvalidArgument);
  CHECK_THROWS_AS(DataProfile::parse("gauss"), InvalidArgument);
}

TEST_CASE("normal stream: moments") {
  NormalStream s(7);
  double m = 0.0;
  double v = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double z = s.next();
    m += z;
    v += z * z;
  }
  m /= n;
  v = v / n - m * m;
  CHECK(std::abs(m) < 0.01);
  CHECK(std::abs(v - 1.0) < 0.02);
}
