#include "rlfrac/kernels.hpp"

#include <cmath>
#include <string>

#include "rlfrac/errors.hpp"
#include "rlfrac/mittag_leffler.hpp"
#include "rlfrac/quadrature.hpp"

namespace rlfrac::kernels {

namespace {

struct CellWeights {
  double left = 0.0;   // multiplies the sample at t_i
  double right = 0.0;  // multiplies the sample at t_{i+1}
};

// Exact moments of (t_j - s)^(beta-1) against the two hat functions of
// [t_i, t_{i+1}], with a = t_j - t_{i+1}, b = t_j - t_i. The closed form
// cancels badly once a >> h, where an 8-point Gauss rule is already exact to
// rounding.
CellWeights plain_weights(double a, double b, double h, double beta, const quad::GaussRule& g8) {
  CellWeights w;
  if (a <= 8.0 * h) {
    const double p0 = (std::pow(b, beta) - std::pow(a, beta)) / beta;
    const double p1 = (std::pow(b, beta + 1.0) - std::pow(a, beta + 1.0)) / (beta + 1.0);
    w.left = (p1 - a * p0) / h;
    w.right = (b * p0 - p1) / h;
    return w;
  }
  const double r = 0.5 * h;
  for (std::size_t q = 0; q < g8.nodes.size(); ++q) {
    const double db = r * (1.0 - g8.nodes[q]);
    const double da = r * (1.0 + g8.nodes[q]);
    const double k = g8.weights[q] * r * std::pow(a + db, beta - 1.0);
    w.left += k * db / h;
    w.right += k * da / h;
  }
  return w;
}

// Moments of (t_j - s)^(beta-1) s^sigma against the hat functions.
CellWeights singular_weights(double ti, double a, double h, double beta, double sigma, bool endpoint_cell,
                             const quad::GaussRule& g8, const quad::GaussRule& g16) {
  CellWeights w;
  const double r = 0.5 * h;
  const quad::GaussRule* rule = nullptr;
  if (!endpoint_cell) {
    // Bernstein-ellipse parameter of the nearest singularity (s = 0 or s = t_j)
    const double x = 1.0 + std::min(ti, a) / r;
    const double rho = x + std::sqrt(x * x - 1.0);
    if (rho >= 6.0)
      rule = &g8;
    else if (rho >= 2.5)
      rule = &g16;
  }
  if (rule) {
    for (std::size_t q = 0; q < rule->nodes.size(); ++q) {
      const double db = r * (1.0 - rule->nodes[q]);
      const double da = r * (1.0 + rule->nodes[q]);
      const double k = rule->weights[q] * r * std::pow(a + db, beta - 1.0) * std::pow(ti + da, sigma);
      w.left += k * db / h;
      w.right += k * da / h;
    }
    return w;
  }
  // Endpoint cells carry x^p factors with p possibly close to -1, too strong
  // for the double-exponential rule alone; u = x^(p+1) removes them.
  auto power_moment = [](double p, double len, auto&& smooth) {
    const double q = p + 1.0;
    return quad::tanh_sinh([&](double u, double, double) { return smooth(std::pow(u, 1.0 / q)); }, 0.0,
                           std::pow(len, q), 1e-13, 1e-300)
               .value /
           q;
  };
  const bool first = ti == 0.0;
  const bool last = a == 0.0;
  for (int side = 0; side < 2; ++side) {
    // hat(da, db): db/h for the left weight, da/h for the right one
    auto hat = [&](double da, double db) { return (side == 0 ? db : da) / h; };
    double total = 0.0;
    if (first && last) {
      total += power_moment(sigma, 0.5 * h, [&](double da) {
        const double db = h - da;
        return std::pow(db, beta - 1.0) * hat(da, db);
      });
      total += power_moment(beta - 1.0, 0.5 * h, [&](double db) {
        const double da = h - db;
        return std::pow(da, sigma) * hat(da, db);
      });
    } else if (first) {
      total = power_moment(sigma, h, [&](double da) {
        const double db = h - da;
        return std::pow(a + db, beta - 1.0) * hat(da, db);
      });
    } else if (last) {
      total = power_moment(beta - 1.0, h, [&](double db) {
        const double da = h - db;
        return std::pow(ti + da, sigma) * hat(da, db);
      });
    } else {
      total = quad::tanh_sinh(
                  [&](double, double da, double db) {
                    return std::pow(a + db, beta - 1.0) * std::pow(ti + da, sigma) * hat(da, db);
                  },
                  0.0, h, 1e-13, 1e-300)
                  .value;
    }
    (side == 0 ? w.left : w.right) = total;
  }
  return w;
}

double integral_at(std::size_t j, std::span<const double> t, std::span<const double> f, double beta,
                   const quad::GaussRule& g8) {
  double s = 0.0;
  for (std::size_t i = 0; i < j; ++i) {
    const double h = t[i + 1] - t[i];
    const CellWeights w = plain_weights(t[j] - t[i + 1], t[j] - t[i], h, beta, g8);
    s += w.left * f[i] + w.right * f[i + 1];
  }
  return s;
}

double singular_integral_at(std::size_t j, std::span<const double> t, std::span<const double> g, double beta,
                            double sigma, const quad::GaussRule& g8, const quad::GaussRule& g16) {
  double s = 0.0;
  for (std::size_t i = 0; i < j; ++i) {
    const double h = t[i + 1] - t[i];
    const bool endpoint_cell = (i == 0) || (i + 1 == j);
    const CellWeights w = singular_weights(t[i], t[j] - t[i + 1], h, beta, sigma, endpoint_cell, g8, g16);
    s += w.left * g[i] + w.right * g[i + 1];
  }
  return s;
}

}  // namespace

std::vector<double> product_integral(std::span<const double> t, std::span<const double> f, double beta,
                                     std::optional<double> origin_exponent, Exec exec) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw InvalidArgument("frac_integral: order must be positive, got " + std::to_string(beta));
  if (t.size() != f.size()) throw InvalidArgument("frac_integral: grid/values length mismatch");
  const std::size_t n = t.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  const double scale = rgamma(beta);
  const quad::GaussRule& g8 = quad::gauss_legendre(8);
  const quad::GaussRule& g16 = quad::gauss_legendre(16);
  const long long count = static_cast<long long>(n);

  if (!origin_exponent) {
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 8)
      for (long long j = 1; j < count; ++j)
        out[static_cast<std::size_t>(j)] = scale * integral_at(static_cast<std::size_t>(j), t, f, beta, g8);
    } else {
      for (std::size_t j = 1; j < n; ++j) out[j] = scale * integral_at(j, t, f, beta, g8);
    }
    return out;
  }

  const double sigma = *origin_exponent;
  if (!(sigma > -1.0) || !std::isfinite(sigma))
    throw InvalidArgument("frac_integral: origin exponent must exceed -1");
  if (n < 3) throw InvalidArgument("frac_integral: origin exponent needs at least two cells");
  std::vector<double> g(n);
  for (std::size_t i = 1; i < n; ++i) g[i] = f[i] / std::pow(t[i], sigma);
  g[0] = g[1] - t[1] * (g[2] - g[1]) / (t[2] - t[1]);

  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (long long j = 1; j < count; ++j)
      out[static_cast<std::size_t>(j)] =
          scale * singular_integral_at(static_cast<std::size_t>(j), t, g, beta, sigma, g8, g16);
  } else {
    for (std::size_t j = 1; j < n; ++j) out[j] = scale * singular_integral_at(j, t, g, beta, sigma, g8, g16);
  }
  return out;
}

std::vector<double> ml_table(double alpha, double beta, std::span<const double> lambdas,
                             std::span<const double> times, Exec exec) {
  const std::size_t nt = times.size();
  std::vector<double> out(lambdas.size() * nt);
  const long long total = static_cast<long long>(out.size());
  auto cell = [&](std::size_t idx) {
    const double lambda = lambdas[idx / nt];
    const double t = times[idx % nt];
    return ml_value(alpha, beta, -lambda * std::pow(t, alpha));
  };
  if (exec == Exec::parallel) {
    // exceptions must not escape the parallel region
    std::string failure;
    bool numerical = false;
#pragma omp parallel for schedule(dynamic, 16)
    for (long long idx = 0; idx < total; ++idx) {
      try {
        out[static_cast<std::size_t>(idx)] = cell(static_cast<std::size_t>(idx));
      } catch (const Error& e) {
#pragma omp critical(rlfrac_ml_table)
        if (failure.empty()) {
          failure = e.what();
          numerical = dynamic_cast<const NumericalFailure*>(&e) != nullptr;
        }
      }
    }
    if (!failure.empty()) {
      if (numerical) throw NumericalFailure("ml_table", failure);
      throw InvalidArgument(failure);
    }
  } else {
    for (std::size_t idx = 0; idx < out.size(); ++idx) out[idx] = cell(idx);
  }
  return out;
}

}  // namespace rlfrac::kernels
