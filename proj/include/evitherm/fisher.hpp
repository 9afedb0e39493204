#pragma once

#include <vector>

#include "evitherm/core.hpp"

namespace evitherm {

struct FisherComparison {
  double n = 0.0;
  double x = 0.0;
  double e_exact = 0.0;     // evidence from the full state map at c_v = r/2
  double e_approx = 0.0;    // (n+1)^3 / (2 pi x (n-x))
  double fi_over_2pi = 0.0; // n^3 / (2 pi x (n-x))
};

// Observed information of the binomial at its maximizing parameter:
// n^3 / (x (n-x)). Infinite at x = 0 or x = n (domain error).
double fi_obs(double n, double x);

// Large-n closed form (n+1)^3 / (2 pi x (n-x)); same poles as fi_obs.
double e_approx(double n, double x);

// ln(2^n x! (n-x)! / (n+1)!) for integer inputs, accumulated from exact
// log factorials. Serves as an independent oracle for the two-sided
// volume.
double log_factorial_volume(long long n, long long x);

// Stirling-approximation form of the two-sided log volume:
// n ln2 + x ln x + (n-x) ln(n-x) - (n+1) ln(n+1) + 1
//   + (1/2) ln(2 pi x (n-x) / (n+1)).
double log_volume_stirling(double n, double x);

// Per-grid-point comparison of exact evidence against its closed-form
// approximations. Requires c_v = r/2 (the derivation fixes it); any other
// value is a domain error. The ratio grid holds x/n values in (0, 1/2].
std::vector<FisherComparison> compare_series(double n,
                                             const std::vector<double>& ratio_grid,
                                             const ModelConstants& consts,
                                             const QuadratureConfig& cfg);

}  // namespace evitherm
