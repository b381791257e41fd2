// Serial reference vs OpenMP path of the data-parallel kernels.
// Prints one CSV row per (kernel, size): best-of-k wall times and whether the
// two paths agree bitwise.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "rlfrac/kernels.hpp"
#include "rlfrac/time_grid.hpp"

using rlfrac::kernels::Exec;

namespace {

template <class F>
double best_ms(F&& f, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void row(const char* kernel, int size, double ts, double tp, bool same) {
  std::printf("%s,%d,%d,%.3f,%.3f,%.2f,%s\n", kernel, size, omp_get_max_threads(), ts, tp, ts / tp,
              same ? "true" : "false");
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 3;
  std::printf("kernel,size,threads,serial_ms,parallel_ms,speedup,identical\n");

  for (int M : {256, 1024, 2048}) {
    const auto g = rlfrac::TimeGrid::geometric(1.0, M);
    std::vector<double> f(g.size());
    for (std::size_t k = 1; k < f.size(); ++k) f[k] = std::pow(g[k], -0.2) * std::cos(5.0 * g[k]);
    std::vector<double> a, b;
    const double ts = best_ms([&] { a = rlfrac::kernels::product_integral(g.points(), f, 0.3, -0.2, Exec::serial); }, reps);
    const double tp = best_ms([&] { b = rlfrac::kernels::product_integral(g.points(), f, 0.3, -0.2, Exec::parallel); }, reps);
    row("product_integral", M, ts, tp, a == b);
  }

  for (int N : {16, 64, 256}) {
    std::vector<double> lambdas(static_cast<std::size_t>(N));
    for (int n = 1; n <= N; ++n) lambdas[static_cast<std::size_t>(n - 1)] = double(n) * n;
    const auto g = rlfrac::TimeGrid::geometric(1.0, 256);
    std::vector<double> a, b;
    const double ts = best_ms([&] { a = rlfrac::kernels::ml_table(1.8, 1.8, lambdas, g.points(), Exec::serial); }, reps);
    const double tp = best_ms([&] { b = rlfrac::kernels::ml_table(1.8, 1.8, lambdas, g.points(), Exec::parallel); }, reps);
    row("ml_table", N, ts, tp, a == b);
  }
  return 0;
}
