#pragma once

// Dirichlet Laplacian eigenpairs on (0, L) and (0, L1) x (0, L2), modal
// projection and synthesis, and the norms of D((-Delta)^theta).

#include <span>
#include <string>
#include <vector>

namespace rlfrac {

enum class DomainKind { interval, rectangle };

struct Mode {
  double lambda = 0.0;
  int i = 1;  // 1-D index (interval) or x-index (rectangle)
  int j = 0;  // y-index (rectangle), 0 for the interval
};

class DomainSpec {
 public:
  static DomainSpec interval(double L, int n_modes);
  static DomainSpec rectangle(double L1, double L2, int n_modes);

  DomainKind kind() const { return kind_; }
  double L() const { return L1_; }
  double L1() const { return L1_; }
  double L2() const { return L2_; }
  int n_modes() const { return static_cast<int>(modes_.size()); }

  // Sorted by eigenvalue; rectangle ties broken by (i, j).
  const std::vector<Mode>& modes() const { return modes_; }
  std::vector<double> lambdas() const;

  // Same geometry with a different truncation.
  DomainSpec with_modes(int n_modes) const;

  // n-th eigenfunction (0-based) and its derivatives.
  double eigenfunction(int n, double x, double y = 0.0) const;
  double eigenfunction_dx(int n, double x, double y = 0.0) const;
  double eigenfunction_dy(int n, double x, double y = 0.0) const;

 private:
  DomainSpec(DomainKind k, double L1, double L2, int n_modes);
  DomainKind kind_;
  double L1_;
  double L2_;
  std::vector<Mode> modes_;
};

// Alias kept for readability at call sites that list eigenpairs.
inline const std::vector<Mode>& eigenpairs(const DomainSpec& d) { return d.modes(); }

// Uniform nodes x_k = k L / (n - 1), k = 0..n-1.
std::vector<double> uniform_nodes(double L, int n);

// Coefficients <f, e_n> by composite Simpson over uniform nodes including
// the boundary. Interval: samples.size() nodes. Rectangle: nx * ny samples,
// row-major with x fastest. Requires >= 8 nodes per shortest wavelength.
std::vector<double> project(const DomainSpec& d, std::span<const double> samples);
std::vector<double> project(const DomainSpec& d, std::span<const double> samples, int nx, int ny);

// sum_n c_n e_n at the given points (interval) or tensor grid (rectangle).
std::vector<double> synthesize(const DomainSpec& d, std::span<const double> c, std::span<const double> x);
std::vector<double> synthesize(const DomainSpec& d, std::span<const double> c, std::span<const double> x,
                               std::span<const double> y);
// d/dx of the interval synthesis.
std::vector<double> synthesize_dx(const DomainSpec& d, std::span<const double> c, std::span<const double> x);

// (sum_n lambda_n^(2 theta) c_n^2)^(1/2).
double graded_norm(std::span<const double> c, double theta, std::span<const double> lambdas);

struct ModalData {
  DomainSpec domain;
  std::vector<double> c1;  // <u1, e_n>
  std::vector<double> c2;  // <u2, e_n>

  ModalData(DomainSpec d, std::vector<double> c1, std::vector<double> c2);
  static ModalData zeros(const DomainSpec& d);
  ModalData truncated(int n_modes) const;
  ModalData scaled(double s) const;
};

}  // namespace rlfrac
