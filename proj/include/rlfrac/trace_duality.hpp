#pragma once

// Boundary traces, exponent windows, regularity ratios, the Rellich-type
// identity and the adjoint/duality pairing for the Riemann-Liouville problem.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rlfrac/rl_solver.hpp"
#include "rlfrac/time_grid.hpp"

namespace rlfrac {

// ---------------------------------------------------------------- windows

struct ExponentWindow {
  double mu = 0.0;
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  bool empty = true;
  // (3-a)/(2a) - mu < (2a-3)/(2a) + mu  and  mu < 1/2 - mu
  bool overlap_condition = false;
  bool upper_condition = false;
};

struct AdmissibleIntervals {
  double mu_lo = 0.0;  // 3(2-a)/(4a)
  double mu_hi = 0.25;
  std::optional<ExponentWindow> window;
};

// theta ranges of the two regularity estimates for a given mu.
struct ThetaRange {
  double lo = 0.0;
  double hi = 0.0;
};
ThetaRange nabla_range(double alpha, double mu);   // (mu, (2a-3)/(2a) + mu)
ThetaRange dalpha_range(double alpha, double mu);  // ((3-a)/(2a) - mu, 1/2 - mu)

// alpha in (3/2, 2).
AdmissibleIntervals admissible_intervals(double alpha, std::optional<double> mu = std::nullopt);

struct XiSample {
  double xi = 0.0;
  double mu = 0.0;
  ThetaRange nabla;
  ThetaRange dalpha;
  ExponentWindow window;
};

// mu(xi) = 3(2-a) xi / (4a) + (1 - xi)/4 on xi = lo, lo + step, ..., <= hi.
std::vector<XiSample> xi_sweep(double alpha, double lo, double hi, double step);

// ----------------------------------------------------------------- traces

struct BoundaryNode {
  double x = 0.0;
  double y = 0.0;
  double weight = 1.0;  // d sigma quadrature weight (1 at interval endpoints)
  double nx = 0.0;      // outward unit normal
  double ny = 0.0;
};

// Interval: the two endpoints. Rectangle: per_edge Gauss-Legendre nodes on
// each of the four edges.
std::vector<BoundaryNode> boundary_nodes(const DomainSpec& d, int per_edge = 16);

struct TraceSeries {
  std::vector<BoundaryNode> nodes;
  std::vector<double> times;
  std::vector<std::vector<double>> values;  // values[k][node] = d_nu u(times[k], node)
};

// d_nu u at the boundary nodes for given modal values.
std::vector<double> normal_trace_modal(const DomainSpec& d, std::span<const double> modal,
                                       const std::vector<BoundaryNode>& nodes);
std::vector<double> normal_trace(const SeriesSolution& sol, double t, int per_edge = 16);
TraceSeries normal_trace(const SeriesSolution& sol, std::span<const double> times, int per_edge = 16);

struct TraceEnergy {
  double value = 0.0;
  double coarse = 0.0;       // same rule on every other grid node
  double discrepancy = 0.0;  // |value - coarse| / value
};

// int_0^T int_{boundary} |d_nu u|^2 over the grid (trapezoid on t_1..t_M,
// power-law extrapolation on (0, t_1)). Throws NumericalFailure when the
// coarse/fine discrepancy exceeds 10%.
TraceEnergy trace_energy(const SeriesSolution& sol, const TimeGrid& grid, int per_edge = 16);

// ------------------------------------------------------------- regularity

enum class RegularityKind { nabla, dalpha };

// int_0^T of a^2, a b, b^2 with a = t^(a-1) E_{a,a}(-l t^a), b = t^(a-2) E_{a,a-1}(-l t^a).
struct ModeGram {
  double aa = 0.0;
  double ab = 0.0;
  double bb = 0.0;
};
ModeGram mode_gram(double alpha, double lambda, double T);

struct RegularityRatio {
  double ratio = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool zero_data = false;
};

// Holds the per-mode time integrals so repeated data draws are cheap.
class RegularityEvaluator {
 public:
  RegularityEvaluator(double alpha, const DomainSpec& d, double T);
  RegularityRatio ratio(RegularityKind kind, const ModalData& data, double theta, double mu) const;
  int n_modes() const { return static_cast<int>(grams_.size()); }

 private:
  double alpha_;
  double T_;
  std::vector<double> lambdas_;
  std::vector<ModeGram> grams_;
};

// lhs: ||grad u||_{L2(0,T; D(A^theta))} (nabla) or ||D^a u||_{L2(0,T; D(A^-theta))}
// (dalpha); rhs: ||u1||_{D(A^mu)} + ||grad u2||_{D(A^mu)}. Throws
// InadmissibleExponent outside the matching theta range.
RegularityRatio regularity_ratio(RegularityKind kind, const SeriesSolution& sol, double theta, double mu);

struct DivergenceIndicator {
  double exponent = 0.0;        // smallest envelope exponent p (integrable iff p > -1)
  double fitted_exponent = 0.0; // log-log slope of the sampled envelope near 0
  std::vector<double> deltas;   // lower cut-offs, decreasing
  std::vector<double> integrals;  // int_delta^T envelope dt
  bool diverges = false;
};

// Worst case over unit-norm single-mode data of the integrand of the
// regularity norm, sampled over lambda >= lambda_min; its integral is
// followed as the lower cut-off delta shrinks.
DivergenceIndicator divergence_indicator(RegularityKind kind, double alpha, double theta, double mu, double T,
                                         double lambda_min = 1.0);

// ---------------------------------------------------------------- Rellich

struct VectorFieldH {
  std::function<double(double)> h;
  std::function<double(double)> dh;

  // h(x) = (2x - L)/L: equals the outward normal at both ends.
  static VectorFieldH affine(double L);
  // Rejects fields with |h(s) nu(s) - 1| > 1e-12 at x = 0 or x = L.
  void validate(double L) const;
};

struct RellichResult {
  double lhs = 0.0;  // boundary terms
  double rhs = 0.0;  // duality term + interior terms
  double residual = 0.0;
};

// Interval domain; n_points odd (Simpson).
RellichResult rellich_residual(const SeriesSolution& sol, const VectorFieldH& h, double t, double theta = 0.3,
                               int n_points = 513);

// ----------------------------------------------------------------- adjoint

// w(t) = v(T - t), v the forward series solution with data (w1, w2); times in [0, T).
std::vector<FieldSnapshot> adjoint_solve(const ModalData& w, double alpha, double T, std::span<const double> times);

struct CaputoFdResult {
  std::vector<double> x;
  std::vector<double> u_T;
  std::vector<double> ut_T;
};

using SourceFn = std::function<double(double t, double x)>;

// Caputo problem on (0, L) with zero initial data and Dirichlet data
// u(t, 0) = g[0], u(t, L) = g[1] sampled on a uniform grid (M >= 256) with
// nx >= 129 spatial nodes. `source` adds a right-hand side (used by the
// manufactured-solution tests).
CaputoFdResult caputo_fd_solve(const TraceSeries& g, double alpha, double L, int nx, const TimeGrid& grid,
                               const SourceFn& source = {}, kernels::Exec exec = kernels::Exec::parallel);

struct DualityResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;
};

// lhs = int u(T) w1 - int u_t(T) w2 with u driven by g = d_nu w; rhs = the
// trace energy of w. Final data are taken in the sense
// d/dt I^(2-a)_{T-} w(T) = w1, I^(2-a)_{T-} w(T) = w2. Interval domain, w2 = 0.
DualityResult duality_check(const ModalData& w, double alpha, double T, int M, int nx);

}  // namespace rlfrac
