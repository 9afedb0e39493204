#include "evitherm/core.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace evitherm {

namespace {
constexpr double kLn2 = 0.6931471805599453094172321;
}

void validate_point(const ObservationPoint& pt, const ModelConstants& consts) {
  if (!(pt.n >= 0.0) || !std::isfinite(pt.n))
    throw std::domain_error("observation: n must be finite and >= 0");
  double x_max = consts.side == Side::one_sided ? 0.5 * pt.n : pt.n;
  if (!(pt.x >= 0.0) || !(pt.x <= x_max))
    throw std::domain_error(
        "observation: x out of range [0, " + std::to_string(x_max) + "]");
}

double log_lr(double theta, const ObservationPoint& pt) {
  if (theta < 0.0 || theta > 1.0)
    throw std::domain_error("log_lr: theta must lie in [0, 1]");
  double v = pt.n * kLn2;
  if (pt.x > 0.0) {
    if (theta == 0.0) return -std::numeric_limits<double>::infinity();
    v += pt.x * std::log(theta);
  }
  if (pt.n - pt.x > 0.0) {
    if (theta == 1.0) return -std::numeric_limits<double>::infinity();
    v += (pt.n - pt.x) * std::log1p(-theta);
  }
  return v;
}

double log_volume(const ObservationPoint& pt, const ModelConstants& consts,
                  const QuadratureConfig& cfg) {
  (void)cfg;
  validate_point(pt, consts);
  double lv = pt.n * kLn2 + log_beta(pt.x + 1.0, pt.n - pt.x + 1.0);
  if (consts.side == Side::one_sided)
    lv += std::log(reg_inc_beta(0.5, pt.x + 1.0, pt.n - pt.x + 1.0));
  return lv;
}

double entropy(const ObservationPoint& pt, const ModelConstants& consts) {
  validate_point(pt, consts);
  if (pt.n == 0.0) return consts.entropy_offset_k;
  double rho = pt.x / pt.n;
  double h = kLn2;
  if (rho > 0.0) h += rho * std::log(rho);
  if (rho < 1.0) h += (1.0 - rho) * std::log1p(-rho);
  return pt.n * h + consts.entropy_offset_k;
}

EvidentialState make_state(const ObservationPoint& pt,
                           const ModelConstants& consts,
                           const QuadratureConfig& cfg) {
  EvidentialState st;
  st.point = pt;
  st.log_v_e = log_volume(pt, consts, cfg);
  st.s_e = entropy(pt, consts);
  st.log_e = (st.s_e - consts.r * st.log_v_e) / consts.c_v;
  st.p_e = std::exp(std::log(consts.r) + st.log_e - st.log_v_e);
  return st;
}

}  // namespace evitherm
