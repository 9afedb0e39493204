#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace evitherm {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_subdivisions = 2000;
  int gl_points = 32;
};

// Thrown when an iterative scheme fails to reach its tolerance. The best
// estimate available at abort time rides along so callers can inspect it.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& msg, double best)
      : std::runtime_error(msg), best_estimate(best) {}
  double best_estimate;
};

// ln Gamma(z), z > 0. Lanczos approximation, relative error below 1e-13
// on [0.5, 1e6].
double log_gamma(double z);

// ln B(a,b) for a, b > 0.
double log_beta(double a, double b);

// Regularized incomplete beta I_p(a,b), evaluated by modified Lentz
// continued fraction with a log-domain prefactor. Switches to the
// symmetric form when p is past the distribution bulk.
double reg_inc_beta(double p, double a, double b);

// ln of integral over [lo, hi] of exp(f_log(t)) dt. Panel-wise
// Gauss-Legendre, adaptive bisection, all sums done as log-sum-exp so the
// integrand may span thousands of orders of magnitude. Returns -inf for a
// zero integrand. Throws ConvergenceError (with the unrefined estimate
// attached) if the subdivision budget runs out.
double log_quadrature(const std::function<double(double)>& f_log, double lo,
                      double hi, const QuadratureConfig& cfg);

// Expectation of ln(t/(1-t)) under the density proportional to
// t^x (1-t)^(n-x) restricted to (0, 1/2). Always negative there.
double posterior_log_odds_mean(double n, double x, const QuadratureConfig& cfg);

}  // namespace evitherm
