#include "evitherm/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace evitherm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on the
// Legendre polynomial (symmetric pairs computed once per rule).
void gauss_legendre(int npts, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  nodes.assign(npts, 0.0);
  weights.assign(npts, 0.0);
  const int m = (npts + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (npts + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < npts; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = npts * (z * p1 - p2) / (z * z - 1.0);
      double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    nodes[i] = -z;
    nodes[npts - 1 - i] = z;
    weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    weights[npts - 1 - i] = weights[i];
  }
}

struct Panel {
  double lo, hi, estimate;
};

}  // namespace

double log_gamma(double z) {
  if (!(z > 0.0)) throw std::domain_error("log_gamma: argument must be > 0");
  // Lanczos, g = 7, 9 coefficients.
  static const double c[9] = {
      0.99999999999980993,      676.5203681218851,    -1259.1392167224028,
      771.32342877765313,       -176.61502916214059,  12.507343278686905,
      -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z < 0.5) {
    // reflection keeps the series argument in its sweet spot
    return std::log(M_PI / std::sin(M_PI * z)) - log_gamma(1.0 - z);
  }
  double zz = z - 1.0;
  double a = c[0];
  double t = zz + 7.5;
  for (int i = 1; i < 9; ++i) a += c[i] / (zz + i);
  return 0.5 * std::log(2.0 * M_PI) + (zz + 0.5) * std::log(t) - t +
         std::log(a);
}

double log_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::domain_error("log_beta: arguments must be > 0");
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz). Assumes the
// caller has already arranged p < (a+1)/(a+b+2).
double beta_cf(double p, double a, double b) {
  const double fpmin = 1e-300;
  const double eps = 1e-15;
  const int max_iter = 20000;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * p / qap;
  if (std::abs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * p / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * p / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) return h;
  }
  throw ConvergenceError("reg_inc_beta: continued fraction did not converge",
                         h);
}

}  // namespace

double reg_inc_beta(double p, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::domain_error("reg_inc_beta: shape parameters must be > 0");
  if (p < 0.0 || p > 1.0)
    throw std::domain_error("reg_inc_beta: p must lie in [0, 1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  double log_front = a * std::log(p) + b * std::log1p(-p) - log_beta(a, b);
  if (p < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(log_front) * beta_cf(p, a, b) / a;
  }
  return 1.0 - std::exp(log_front) * beta_cf(1.0 - p, b, a) / b;
}

double log_quadrature(const std::function<double(double)>& f_log, double lo,
                      double hi, const QuadratureConfig& cfg) {
  if (!(lo < hi)) throw std::domain_error("log_quadrature: need lo < hi");
  if (cfg.gl_points < 2 || cfg.max_subdivisions < 1 || !(cfg.rel_tol > 0.0))
    throw std::domain_error("log_quadrature: bad config");

  std::vector<double> nodes, weights;
  gauss_legendre(cfg.gl_points, nodes, weights);

  auto panel_estimate = [&](double a, double b) {
    double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double fmax = kNegInf;
    std::vector<double> fv(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i) {
      fv[i] = f_log(mid + half * nodes[i]);
      fmax = std::max(fmax, fv[i]);
    }
    if (fmax == kNegInf) return kNegInf;
    double s = 0.0;
    for (size_t i = 0; i < nodes.size(); ++i)
      s += weights[i] * std::exp(fv[i] - fmax);
    return fmax + std::log(s * half);
  };

  const double min_width = 1e-14 * (hi - lo);
  // panels whose whole mass sits this far (in log) below the banked total
  // cannot move it at the requested tolerance, even max_subdivisions of them
  const double drop_gap =
      std::log(cfg.rel_tol > 0.0 ? cfg.rel_tol : 1e-12) -
      std::log(2.0 * cfg.max_subdivisions + 2.0);
  auto by_estimate = [](const Panel& a, const Panel& b) {
    return a.estimate < b.estimate;
  };
  std::vector<Panel> work{{lo, hi, panel_estimate(lo, hi)}};
  double accepted = kNegInf;
  int splits = 0;
  while (!work.empty()) {
    std::pop_heap(work.begin(), work.end(), by_estimate);
    Panel p = work.back();
    work.pop_back();
    if (p.estimate == kNegInf || (p.hi - p.lo) < min_width) {
      accepted = log_add_exp(accepted, p.estimate);
      continue;
    }
    double mid = 0.5 * (p.lo + p.hi);
    double left = panel_estimate(p.lo, mid);
    double right = panel_estimate(mid, p.hi);
    double refined = log_add_exp(left, right);
    double slack = cfg.rel_tol;
    if (cfg.abs_tol > 0.0 && refined < 700.0)
      slack += cfg.abs_tol * std::exp(-refined);
    if (std::abs(refined - p.estimate) <= slack ||
        refined <= accepted + drop_gap) {
      accepted = log_add_exp(accepted, refined);
      continue;
    }
    if (++splits > cfg.max_subdivisions) {
      double best = log_add_exp(accepted, refined);
      for (const Panel& q : work) best = log_add_exp(best, q.estimate);
      throw ConvergenceError("log_quadrature: subdivision budget exhausted",
                             best);
    }
    work.push_back({p.lo, mid, left});
    std::push_heap(work.begin(), work.end(), by_estimate);
    work.push_back({mid, p.hi, right});
    std::push_heap(work.begin(), work.end(), by_estimate);
  }
  return accepted;
}

double posterior_log_odds_mean(double n, double x,
                               const QuadratureConfig& cfg) {
  if (!(n > 0.0)) throw std::domain_error("posterior_log_odds_mean: n > 0");
  if (x < 0.0 || x > 0.5 * n)
    throw std::domain_error("posterior_log_odds_mean: need 0 <= x <= n/2");
  auto kernel = [n, x](double t) {
    if (t <= 0.0) return x > 0.0 ? kNegInf : (n - x) * std::log1p(-t);
    return x * std::log(t) + (n - x) * std::log1p(-t);
  };
  double log_den = log_quadrature(kernel, 0.0, 0.5, cfg);
  // ln(t/(1-t)) < 0 on (0, 1/2); integrate its magnitude in the log domain
  auto weighted = [&](double t) {
    double lw = std::log(-(std::log(t) - std::log1p(-t)));
    return kernel(t) + lw;
  };
  double log_num_mag = log_quadrature(weighted, 0.0, 0.5, cfg);
  return -std::exp(log_num_mag - log_den);
}

}  // namespace evitherm
