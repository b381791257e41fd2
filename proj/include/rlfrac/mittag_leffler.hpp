#pragma once

// Gamma and the two-parameter Mittag-Leffler function on the real line.
//
//   E_{a,b}(z) = sum_{k>=0} z^k / Gamma(a k + b)
//
// Evaluation is tuned for the negative half-line and 1 < a <= 2, where the
// Riemann-Liouville solution operators live. Small |z| uses the Taylor series;
// large negative z uses the exact Hankel-contour representation
//
//   E_{a,b}(-mu) = (2/a) Re[zeta^(1-b) exp(zeta)] + int_0^inf K(r) dr,
//   zeta = mu^(1/a) exp(i pi / a),
//
// whose pole terms carry the oscillating, slowly damped part that the purely
// algebraic asymptotic series misses for a close to 2.

#include <string_view>

namespace rlfrac {

double gamma(double x);
// 1/Gamma(x); exactly 0 at the poles x = 0, -1, -2, ...
double rgamma(double x);
// sin(pi x) with exact zeros at the integers.
double sin_pi(double x);

struct MLParams {
  double alpha = 1.0;
  double beta = 1.0;
};

enum class MLBranch { taylor, crossover, contour };

std::string_view to_string(MLBranch b);

struct MLResult {
  double value = 0.0;
  double est_abs_error = 0.0;
  MLBranch branch = MLBranch::taylor;
};

// Validated evaluation with automatic branch selection. Requires
// 0 < alpha <= 2 and beta > 0.
MLResult ml(MLParams p, double z);

// Shorthand for ml(p, z).value.
double ml_value(double alpha, double beta, double z);

// Forced-branch evaluators, exposed for cross-checking the branches.
MLResult ml_taylor(MLParams p, double z, bool compensated = false);
MLResult ml_contour(MLParams p, double z);  // z < 0, alpha != 1

// Algebraic asymptotic series -sum_{k=1..K} (-mu)^(-k) / Gamma(beta - alpha k)
// truncated at its smallest term. Only meaningful when the pole terms of the
// contour representation are negligible (large mu, alpha not close to 2).
// beta may be any real here.
MLResult ml_asymptotic_series(MLParams p, double mu);

// max over mu_j = mu_max * j/(n-1) of (1 + mu_j) |E_{a,b}(-mu_j)|.
double ml_bound_sup(MLParams p, double mu_max, int n_samples);

struct XBetaMax {
  double argmax = 0.0;
  double maxval = 0.0;
};

// Maximiser and maximum of x^beta / (1 + x) on [0, inf), beta in (0, 1).
XBetaMax xbeta_max(double beta);

enum class MLIdentity {
  Ea1,   // d/dt E_a(-l t^a)            = -l t^(a-1) E_{a,a}(-l t^a)
  Eaa1,  // d/dt (t E_{a,2}(-l t^a))    = E_{a,1}(-l t^a)
  Eaaa,  // d/dt (t^(a-1) E_{a,a}(-l t^a)) = t^(a-2) E_{a,a-1}(-l t^a)
};

// |central difference of the left side - closed-form right side| at t.
double ml_deriv_residual(MLIdentity kind, double alpha, double lambda, double t, double h);

}  // namespace rlfrac
