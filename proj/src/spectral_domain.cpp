#include "rlfrac/spectral_domain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "rlfrac/errors.hpp"
#include "rlfrac/quadrature.hpp"

namespace rlfrac {

namespace {

constexpr double kPi = std::numbers::pi;

double sine_mode(int n, double L, double x) { return std::sqrt(2.0 / L) * std::sin(n * kPi * x / L); }
double sine_mode_dx(int n, double L, double x) {
  return std::sqrt(2.0 / L) * (n * kPi / L) * std::cos(n * kPi * x / L);
}

void check_resolution(double n_intervals, int max_index, const char* what) {
  // shortest wavelength 2L/k spans 2 n_intervals / k grid intervals
  if (2.0 * n_intervals < 8.0 * max_index)
    throw InvalidArgument(std::string("project: grid under-resolves the highest mode in ") + what);
}

}  // namespace

DomainSpec::DomainSpec(DomainKind k, double L1, double L2, int n_modes) : kind_(k), L1_(L1), L2_(L2) {
  if (!(L1 > 0.0) || !std::isfinite(L1) || (k == DomainKind::rectangle && (!(L2 > 0.0) || !std::isfinite(L2))))
    throw InvalidArgument("domain: side lengths must be positive");
  if (n_modes < 1) throw InvalidArgument("domain: need at least one mode");
  if (k == DomainKind::interval) {
    for (int n = 1; n <= n_modes; ++n) modes_.push_back({std::pow(n * kPi / L1, 2), n, 0});
    return;
  }
  std::vector<Mode> all;
  for (int i = 1; i <= n_modes; ++i)
    for (int j = 1; j <= n_modes; ++j)
      all.push_back({std::pow(i * kPi / L1, 2) + std::pow(j * kPi / L2, 2), i, j});
  std::sort(all.begin(), all.end(), [](const Mode& a, const Mode& b) {
    return std::tie(a.lambda, a.i, a.j) < std::tie(b.lambda, b.i, b.j);
  });
  modes_.assign(all.begin(), all.begin() + n_modes);
}

DomainSpec DomainSpec::interval(double L, int n_modes) { return {DomainKind::interval, L, 0.0, n_modes}; }

DomainSpec DomainSpec::rectangle(double L1, double L2, int n_modes) {
  return {DomainKind::rectangle, L1, L2, n_modes};
}

DomainSpec DomainSpec::with_modes(int n_modes) const { return {kind_, L1_, L2_, n_modes}; }

std::vector<double> DomainSpec::lambdas() const {
  std::vector<double> l(modes_.size());
  for (std::size_t n = 0; n < modes_.size(); ++n) l[n] = modes_[n].lambda;
  return l;
}

double DomainSpec::eigenfunction(int n, double x, double y) const {
  const Mode& m = modes_.at(static_cast<std::size_t>(n));
  if (kind_ == DomainKind::interval) return sine_mode(m.i, L1_, x);
  return sine_mode(m.i, L1_, x) * sine_mode(m.j, L2_, y);
}

double DomainSpec::eigenfunction_dx(int n, double x, double y) const {
  const Mode& m = modes_.at(static_cast<std::size_t>(n));
  if (kind_ == DomainKind::interval) return sine_mode_dx(m.i, L1_, x);
  return sine_mode_dx(m.i, L1_, x) * sine_mode(m.j, L2_, y);
}

double DomainSpec::eigenfunction_dy(int n, double x, double y) const {
  const Mode& m = modes_.at(static_cast<std::size_t>(n));
  if (kind_ == DomainKind::interval) return 0.0;
  return sine_mode(m.i, L1_, x) * sine_mode_dx(m.j, L2_, y);
}

std::vector<double> uniform_nodes(double L, int n) {
  if (n < 2) throw InvalidArgument("uniform_nodes: need at least 2 nodes");
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) x[static_cast<std::size_t>(k)] = L * k / (n - 1);
  x.back() = L;
  return x;
}

std::vector<double> project(const DomainSpec& d, std::span<const double> samples) {
  if (d.kind() != DomainKind::interval) throw InvalidArgument("project: rectangle needs nx, ny");
  const int nx = static_cast<int>(samples.size());
  check_resolution(nx - 1, d.modes().back().i, "x");
  const double h = d.L() / (nx - 1);
  const auto w = quad::simpson_weights(samples.size(), h);
  const auto x = uniform_nodes(d.L(), nx);
  std::vector<double> c(static_cast<std::size_t>(d.n_modes()), 0.0);
  for (int n = 0; n < d.n_modes(); ++n) {
    double s = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) s += w[k] * samples[k] * d.eigenfunction(n, x[k]);
    c[static_cast<std::size_t>(n)] = s;
  }
  return c;
}

std::vector<double> project(const DomainSpec& d, std::span<const double> samples, int nx, int ny) {
  if (d.kind() == DomainKind::interval) {
    if (ny != 1 || static_cast<int>(samples.size()) != nx) throw InvalidArgument("project: sample count mismatch");
    return project(d, samples);
  }
  if (static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) != samples.size())
    throw InvalidArgument("project: sample count mismatch");
  int max_i = 1;
  int max_j = 1;
  for (const Mode& m : d.modes()) {
    max_i = std::max(max_i, m.i);
    max_j = std::max(max_j, m.j);
  }
  check_resolution(nx - 1, max_i, "x");
  check_resolution(ny - 1, max_j, "y");
  const auto wx = quad::simpson_weights(static_cast<std::size_t>(nx), d.L1() / (nx - 1));
  const auto wy = quad::simpson_weights(static_cast<std::size_t>(ny), d.L2() / (ny - 1));
  const auto x = uniform_nodes(d.L1(), nx);
  const auto y = uniform_nodes(d.L2(), ny);
  std::vector<double> c(static_cast<std::size_t>(d.n_modes()), 0.0);
  for (int n = 0; n < d.n_modes(); ++n) {
    double s = 0.0;
    for (int b = 0; b < ny; ++b)
      for (int a = 0; a < nx; ++a)
        s += wx[static_cast<std::size_t>(a)] * wy[static_cast<std::size_t>(b)] *
             samples[static_cast<std::size_t>(b) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(a)] *
             d.eigenfunction(n, x[static_cast<std::size_t>(a)], y[static_cast<std::size_t>(b)]);
    c[static_cast<std::size_t>(n)] = s;
  }
  return c;
}

std::vector<double> synthesize(const DomainSpec& d, std::span<const double> c, std::span<const double> x) {
  if (d.kind() != DomainKind::interval) throw InvalidArgument("synthesize: rectangle needs x and y nodes");
  if (c.size() > static_cast<std::size_t>(d.n_modes())) throw InvalidArgument("synthesize: too many coefficients");
  std::vector<double> f(x.size(), 0.0);
  for (std::size_t k = 0; k < x.size(); ++k)
    for (std::size_t n = 0; n < c.size(); ++n) f[k] += c[n] * d.eigenfunction(static_cast<int>(n), x[k]);
  return f;
}

std::vector<double> synthesize(const DomainSpec& d, std::span<const double> c, std::span<const double> x,
                               std::span<const double> y) {
  if (d.kind() == DomainKind::interval) return synthesize(d, c, x);
  if (c.size() > static_cast<std::size_t>(d.n_modes())) throw InvalidArgument("synthesize: too many coefficients");
  std::vector<double> f(x.size() * y.size(), 0.0);
  for (std::size_t b = 0; b < y.size(); ++b)
    for (std::size_t a = 0; a < x.size(); ++a) {
      double s = 0.0;
      for (std::size_t n = 0; n < c.size(); ++n) s += c[n] * d.eigenfunction(static_cast<int>(n), x[a], y[b]);
      f[b * x.size() + a] = s;
    }
  return f;
}

std::vector<double> synthesize_dx(const DomainSpec& d, std::span<const double> c, std::span<const double> x) {
  if (d.kind() != DomainKind::interval) throw InvalidArgument("synthesize_dx: interval only");
  std::vector<double> f(x.size(), 0.0);
  for (std::size_t k = 0; k < x.size(); ++k)
    for (std::size_t n = 0; n < c.size(); ++n) f[k] += c[n] * d.eigenfunction_dx(static_cast<int>(n), x[k]);
  return f;
}

double graded_norm(std::span<const double> c, double theta, std::span<const double> lambdas) {
  if (c.size() > lambdas.size()) throw InvalidArgument("graded_norm: more coefficients than eigenvalues");
  if (!std::isfinite(theta)) throw InvalidArgument("graded_norm: theta must be finite");
  double s = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) s += std::pow(lambdas[n], 2.0 * theta) * c[n] * c[n];
  return std::sqrt(s);
}

ModalData::ModalData(DomainSpec d, std::vector<double> a, std::vector<double> b)
    : domain(std::move(d)), c1(std::move(a)), c2(std::move(b)) {
  const std::size_t n = static_cast<std::size_t>(domain.n_modes());
  if (c1.size() != n || c2.size() != n)
    throw InvalidArgument("modal data: expected " + std::to_string(n) + " coefficients for u1 and u2");
  for (std::size_t k = 0; k < n; ++k)
    if (!std::isfinite(c1[k]) || !std::isfinite(c2[k])) throw InvalidArgument("modal data: non-finite coefficient");
}

ModalData ModalData::zeros(const DomainSpec& d) {
  const std::size_t n = static_cast<std::size_t>(d.n_modes());
  return {d, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
}

ModalData ModalData::truncated(int n_modes) const {
  if (n_modes < 1 || n_modes > domain.n_modes()) throw InvalidArgument("modal data: bad truncation");
  return {domain.with_modes(n_modes), std::vector<double>(c1.begin(), c1.begin() + n_modes),
          std::vector<double>(c2.begin(), c2.begin() + n_modes)};
}

ModalData ModalData::scaled(double s) const {
  ModalData out = *this;
  for (auto& v : out.c1) v *= s;
  for (auto& v : out.c2) v *= s;
  return out;
}

}  // namespace rlfrac
