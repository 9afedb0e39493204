#pragma once

#include <cmath>

#include "evitherm/numerics.hpp"

namespace evitherm {

enum class Side { one_sided, two_sided };

struct ModelConstants {
  double r = 1.0;
  double c_v = 1.5;
  Side side = Side::one_sided;
  double entropy_offset_k = 0.0;
};

// Continuous observation pair: n tosses, x heads. One-sided mode restricts
// x to [0, n/2]; two-sided allows [0, n].
struct ObservationPoint {
  double n = 0.0;
  double x = 0.0;
};

struct EvidentialState {
  ObservationPoint point;
  double log_v_e = 0.0;  // ln of the area under the likelihood-ratio curve
  double s_e = 0.0;      // ln of the maximized likelihood ratio, plus offset k
  double log_e = 0.0;    // ln evidence; log_e = (s_e - r*log_v_e)/c_v
  double p_e = 0.0;      // r * E / V_E

  double v_e() const { return std::exp(log_v_e); }
  double e() const { return std::exp(log_e); }
};

// Throws std::domain_error if the point violates the configured side.
void validate_point(const ObservationPoint& pt, const ModelConstants& consts);

// ln LR(theta) = n ln2 + x ln(theta) + (n-x) ln(1-theta), with 0*ln0 = 0.
// Returns -inf where the likelihood vanishes.
double log_lr(double theta, const ObservationPoint& pt);

// One-sided: n ln2 + ln B(x+1, n-x+1) + ln I_{1/2}(x+1, n-x+1).
// Two-sided drops the incomplete-beta factor.
double log_volume(const ObservationPoint& pt, const ModelConstants& consts,
                  const QuadratureConfig& cfg);

// n[(x/n)ln(x/n) + (1-x/n)ln(1-x/n) + ln2] + k. Nonnegative for k = 0,
// zero exactly at x = n/2.
double entropy(const ObservationPoint& pt, const ModelConstants& consts);

EvidentialState make_state(const ObservationPoint& pt,
                           const ModelConstants& consts,
                           const QuadratureConfig& cfg);

}  // namespace evitherm
