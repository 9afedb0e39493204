#include "evitherm/fisher.hpp"

#include <cmath>
#include <stdexcept>

namespace evitherm {

namespace {
constexpr double kLn2 = 0.6931471805599453094172321;
constexpr double kTwoPi = 6.283185307179586476925287;
}  // namespace

double fi_obs(double n, double x) {
  if (!(n > 0.0) || !(x > 0.0) || !(x < n))
    throw std::domain_error("fi_obs: need 0 < x < n");
  return n * n * n / (x * (n - x));
}

double e_approx(double n, double x) {
  if (!(n > 0.0) || !(x > 0.0) || !(x < n))
    throw std::domain_error("e_approx: need 0 < x < n");
  double np1 = n + 1.0;
  return np1 * np1 * np1 / (kTwoPi * x * (n - x));
}

double log_factorial_volume(long long n, long long x) {
  if (n < 0 || x < 0 || x > n)
    throw std::domain_error("log_factorial_volume: need 0 <= x <= n");
  auto log_fact = [](long long m) {
    double acc = 0.0;
    for (long long k = 2; k <= m; ++k) acc += std::log(static_cast<double>(k));
    return acc;
  };
  return n * kLn2 + log_fact(x) + log_fact(n - x) - log_fact(n + 1);
}

double log_volume_stirling(double n, double x) {
  if (!(n > 0.0) || !(x > 0.0) || !(x < n))
    throw std::domain_error("log_volume_stirling: need 0 < x < n");
  return n * kLn2 + x * std::log(x) + (n - x) * std::log(n - x) -
         (n + 1.0) * std::log(n + 1.0) + 1.0 +
         0.5 * std::log(kTwoPi * x * (n - x) / (n + 1.0));
}

std::vector<FisherComparison> compare_series(
    double n, const std::vector<double>& ratio_grid,
    const ModelConstants& consts, const QuadratureConfig& cfg) {
  if (!(n > 0.0)) throw std::domain_error("compare_series: n must be > 0");
  if (std::abs(consts.c_v - 0.5 * consts.r) > 1e-12 * std::abs(consts.r))
    throw std::domain_error("compare_series: requires c_v = r/2");
  ModelConstants one_sided = consts;
  one_sided.side = Side::one_sided;
  std::vector<FisherComparison> out;
  out.reserve(ratio_grid.size());
  for (double rho : ratio_grid) {
    if (!(rho > 0.0) || rho > 0.5)
      throw std::domain_error("compare_series: ratios must lie in (0, 1/2]");
    double x = rho * n;
    FisherComparison row;
    row.n = n;
    row.x = x;
    row.e_exact = make_state({n, x}, one_sided, cfg).e();
    row.e_approx = e_approx(n, x);
    row.fi_over_2pi = fi_obs(n, x) / kTwoPi;
    out.push_back(row);
  }
  return out;
}

}  // namespace evitherm
