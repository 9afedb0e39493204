#include "evitherm/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace evitherm {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321;
constexpr double kGolden = 0.6180339887498948482;

double entropy_no_offset(double n, double x) {
  if (n <= 0.0) return 0.0;
  double rho = x / n;
  double h = kLn2;
  if (rho > 0.0) h += rho * std::log(rho);
  if (rho < 1.0) h += (1.0 - rho) * std::log1p(-rho);
  return n * h;
}

// Brent root finder on [a, b] with f(a), f(b) of opposite sign.
template <typename F>
double brent(F f, double a, double b, double fa, double fb, double xtol,
             int max_iter = 200) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw SolverError("brent: endpoints do not bracket");
  double c = a, fc = fa, d = b - a, e = b - a;
  for (int it = 0; it < max_iter; ++it) {
    if (fb * fc > 0.0) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) +
                  0.5 * xtol;
    double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double s = fb / fa, p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        double qq = fa / fc, r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q),
                             std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
  }
  return b;
}

// Golden-section minimizer for a unimodal function on [a, b].
template <typename F>
double golden_min(F f, double a, double b, double xtol, int max_iter = 300) {
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

double log_e_of(double n, double x, const ModelConstants& consts,
                const QuadratureConfig& cfg) {
  ObservationPoint pt{n, x};
  return (entropy(pt, consts) - consts.r * log_volume(pt, consts, cfg)) /
         consts.c_v;
}

// Stationarity gap of ln E in x at fixed n: negative left of the
// transition point, positive right of it.
double trp_gap(double n, double x, const ModelConstants& consts,
               const QuadratureConfig& cfg) {
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(x / (n - x)) -
         consts.r * posterior_log_odds_mean(n, x, cfg);
}

bool classify_left(double n, double x, const ModelConstants& consts,
                   const QuadratureConfig& cfg) {
  if (consts.side == Side::two_sided) return x < 0.5 * n * (1.0 - 1e-12);
  return trp_gap(n, x, consts, cfg) < 0.0;
}

// Fixed-n minimizer of ln E over the x range, by golden section. Cheap
// (no posterior quadrature); used by the tracers. The quadrature-based
// transition_point is the authoritative root of the stationarity equation.
TransitionPoint min_evidence_point(double n, const ModelConstants& consts,
                                   const QuadratureConfig& cfg) {
  double x_max = consts.side == Side::one_sided ? 0.5 * n : n;
  auto f = [&](double x) { return log_e_of(n, x, consts, cfg); };
  double xs = golden_min(f, 0.0, x_max, 1e-11 * std::max(1.0, n));
  TransitionPoint tp;
  tp.n = n;
  tp.x_star = xs;
  tp.e_min = std::exp(f(xs));
  tp.residual = std::numeric_limits<double>::quiet_NaN();
  return tp;
}

double solve_x_for_evidence_between(double n, double e_target, double x_lo,
                                    double x_hi, bool increasing,
                                    const ModelConstants& consts,
                                    const QuadratureConfig& cfg) {
  double target = std::log(e_target);
  double lo = x_lo, hi = x_hi;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    double mid = 0.5 * (lo + hi);
    bool above = log_e_of(n, mid, consts, cfg) > target;
    if (above == increasing)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

double solve_x_for_evidence_impl(double n, double e_target, Branch branch,
                                 const TransitionPoint& tp,
                                 const ModelConstants& consts,
                                 const QuadratureConfig& cfg) {
  if (!(e_target > 0.0))
    throw std::domain_error("solve_x_for_evidence: e_target must be > 0");
  double slack = 1e-12 * e_target;
  if (e_target < tp.e_min - slack) {
    std::ostringstream msg;
    msg << "solve_x_for_evidence: level " << e_target
        << " is below the fixed-n minimum " << tp.e_min;
    throw NoSolutionError(msg.str(), tp.e_min);
  }
  if (e_target <= tp.e_min + slack) return tp.x_star;
  double x_max = consts.side == Side::one_sided ? 0.5 * n : n;
  if (branch == Branch::left_of_trp) {
    double e_end = std::exp(log_e_of(n, 0.0, consts, cfg));
    if (e_target > e_end * (1.0 + 1e-12))
      throw std::range_error(
          "solve_x_for_evidence: level exceeds the left-branch endpoint");
    return solve_x_for_evidence_between(n, e_target, 0.0, tp.x_star, false,
                                        consts, cfg);
  }
  double e_end = std::exp(log_e_of(n, x_max, consts, cfg));
  if (e_target > e_end * (1.0 + 1e-12))
    throw std::range_error(
        "solve_x_for_evidence: level exceeds the right-branch endpoint");
  return solve_x_for_evidence_between(n, e_target, tp.x_star, x_max, true,
                                      consts, cfg);
}

}  // namespace

namespace detail {

double isentrope_log_volume(double n, double s0, const ModelConstants& consts,
                            const QuadratureConfig& cfg) {
  if (n <= 0.0) return log_volume({0.0, 0.0}, consts, cfg);
  double x = solve_x_for_entropy(n, s0 + consts.entropy_offset_k, consts);
  return log_volume({n, x}, consts, cfg);
}

IsentropePeak isentrope_peak(double s0, const ModelConstants& consts,
                             const QuadratureConfig& cfg) {
  double n_floor = s0 / kLn2;
  auto g = [&](double n) { return isentrope_log_volume(n, s0, consts, cfg); };
  double h = std::max(1e-6 * (1.0 + n_floor), 1e-9);
  double prev2 = n_floor, prev = n_floor;
  double g_prev = g(n_floor > 0.0 ? n_floor : 0.0);
  bool bracketed = false;
  double t = n_floor;
  for (int i = 0; i < 200; ++i) {
    t = n_floor + h;
    double gt = g(t);
    if (gt < g_prev) {
      bracketed = true;
      break;
    }
    prev2 = prev;
    prev = t;
    g_prev = gt;
    h *= 2.0;
  }
  if (!bracketed)
    throw SolverError("isentrope_peak: volume never turned over");
  double n_pk = golden_min(
      [&](double n) { return -g(n); }, prev2, t,
      1e-11 * std::max(1.0, t));
  return {n_pk, g(n_pk)};
}

double isentrope_volume_root_near(double s0, double log_v_target,
                                  double n_start, double n_floor,
                                  const ModelConstants& consts,
                                  const QuadratureConfig& cfg) {
  auto f = [&](double n) {
    return isentrope_log_volume(n, s0, consts, cfg) - log_v_target;
  };
  double fac = 1.05;
  double lo = n_start, hi = n_start;
  double flo = f(n_start), fhi = flo;
  if (flo == 0.0) return n_start;
  for (int i = 0; i < 80; ++i) {
    lo = std::max(n_floor * (1.0 + 1e-14), lo / fac);
    hi = hi * fac;
    flo = f(lo);
    fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi < 0.0) break;
    // both ends on the same side: the root may sit between them and the
    // start value if the curve folds; check the half-brackets too
    double fs = f(n_start);
    if (flo * fs < 0.0) {
      hi = n_start;
      fhi = fs;
      break;
    }
    if (fs * fhi < 0.0) {
      lo = n_start;
      flo = fs;
      break;
    }
    fac *= fac;
    if (fac > 1e6) break;
  }
  if (flo * fhi > 0.0)
    throw SolverError(
        "isentrope_volume_root_near: no sign change near the start count");
  return brent(f, lo, hi, flo, fhi, 1e-13 * std::max(1.0, hi));
}

PathSample sample_from_state(const EvidentialState& st) {
  return {st.point, st.log_v_e, st.p_e, st.e(), st.s_e};
}

bool classify_branch(double n, double x, const ModelConstants& consts,
                     const QuadratureConfig& cfg) {
  return classify_left(n, x, consts, cfg);
}

}  // namespace detail

TransitionPoint transition_point(double n, double tol,
                                 const ModelConstants& consts,
                                 const QuadratureConfig& cfg) {
  if (!(n > 0.0)) throw std::domain_error("transition_point: n must be > 0");
  if (!(tol > 0.0)) throw std::domain_error("transition_point: tol must be > 0");
  if (consts.side == Side::two_sided) {
    // the two-sided model is symmetric about x = n/2, so the minimum sits
    // exactly at the midpoint
    TransitionPoint tp;
    tp.n = n;
    tp.x_star = 0.5 * n;
    tp.e_min = std::exp(log_e_of(n, tp.x_star, consts, cfg));
    tp.residual = 0.0;
    return tp;
  }
  QuadratureConfig tight = cfg;
  tight.rel_tol = std::min(cfg.rel_tol, 1e-12);
  auto h = [&](double x) { return trp_gap(n, x, consts, tight); };

  double hi = 0.5 * n;
  double fhi = h(hi);
  if (!(fhi > 0.0))
    throw SolverError("transition_point: no sign change up to x = n/2");
  double lo = hi, flo = fhi;
  bool found = false;
  for (int i = 0; i < 200; ++i) {
    lo *= 0.5;
    flo = h(lo);
    if (flo < 0.0) {
      found = true;
      break;
    }
    hi = lo;
    fhi = flo;
  }
  if (!found)
    throw SolverError("transition_point: bracket scan found no sign change");
  double xs = brent(h, lo, hi, flo, fhi, 1e-13 * std::max(1.0, n));
  TransitionPoint tp;
  tp.n = n;
  tp.x_star = xs;
  tp.residual = consts.r * posterior_log_odds_mean(n, xs, tight) -
                std::log(xs / (n - xs));
  if (std::abs(tp.residual) > tol)
    throw SolverError("transition_point: residual above tolerance");
  tp.e_min = std::exp(log_e_of(n, xs, consts, cfg));
  return tp;
}

double solve_x_for_entropy(double n, double s_target,
                           const ModelConstants& consts) {
  if (!(n > 0.0)) throw std::domain_error("solve_x_for_entropy: n must be > 0");
  double s0 = s_target - consts.entropy_offset_k;
  double s_max = n * kLn2;
  double slack = 1e-9 * std::max(1.0, s_max);
  if (s0 < -slack || s0 > s_max + slack)
    throw std::range_error("solve_x_for_entropy: entropy target out of range");
  s0 = std::clamp(s0, 0.0, s_max);
  if (s0 == 0.0) return 0.5 * n;
  if (s0 == s_max) return 0.0;
  double lo = 0.0, hi = 0.5 * n;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    double mid = 0.5 * (lo + hi);
    if (entropy_no_offset(n, mid) > s0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double solve_x_for_evidence(double n, double e_target, Branch branch,
                            const ModelConstants& consts,
                            const QuadratureConfig& cfg) {
  SolverConfig scfg;
  TransitionPoint tp = transition_point(n, scfg.residual_tol, consts, cfg);
  return solve_x_for_evidence_impl(n, e_target, branch, tp, consts, cfg);
}

EvidentialState solve_state(double e_target, double log_v_target,
                            double n_hint, Branch branch,
                            const ModelConstants& consts,
                            const QuadratureConfig& cfg) {
  if (!(e_target > 0.0))
    throw std::domain_error("solve_state: e_target must be > 0");
  if (!(n_hint > 0.0))
    throw std::domain_error("solve_state: n_hint must be > 0");
  double s = consts.c_v * std::log(e_target) + consts.r * log_v_target;
  double s0 = s - consts.entropy_offset_k;
  if (s0 < -1e-12 * std::max(1.0, std::abs(s))) {
    std::ostringstream msg;
    msg << "solve_state: targets force entropy " << s
        << " below its floor " << consts.entropy_offset_k;
    throw InfeasibleTargetError(msg.str());
  }
  s0 = std::max(s0, 0.0);
  double n_floor = s0 / kLn2;

  detail::IsentropePeak pk = detail::isentrope_peak(s0, consts, cfg);
  if (log_v_target > pk.log_v_peak + 1e-11 * std::max(1.0, std::abs(pk.log_v_peak))) {
    std::ostringstream msg;
    msg << "solve_state: volume target " << log_v_target
        << " exceeds the isentrope's maximum log-volume " << pk.log_v_peak;
    throw InfeasibleTargetError(msg.str());
  }

  auto f = [&](double n) {
    return detail::isentrope_log_volume(n, s0, consts, cfg) - log_v_target;
  };

  std::vector<double> candidates;
  // descending side: volume falls monotonically for n past the peak
  {
    double lo = pk.n_peak, flo = f(lo);
    double hi = std::max(2.0 * pk.n_peak + 1.0, 2.0 * n_hint);
    double fhi = f(hi);
    int guard = 0;
    while (fhi > 0.0 && guard++ < 200 && std::isfinite(hi)) {
      hi *= 2.0;
      fhi = f(hi);
    }
    if (fhi > 0.0 || !std::isfinite(hi))
      throw SolverError("solve_state: volume target unreachable at large n");
    if (flo < 0.0) flo = 0.0;  // peak within round-off of the target
    candidates.push_back(brent(f, lo, hi, flo, fhi,
                               1e-13 * std::max(1.0, hi)));
  }
  // ascending side: exists when the x = 0 endpoint sits below the target
  if (pk.n_peak > n_floor * (1.0 + 1e-12) || n_floor == 0.0) {
    double lo = n_floor, flo = f(std::max(lo, 0.0));
    if (flo <= 0.0) {
      double hi = pk.n_peak, fhi = f(hi);
      if (fhi < 0.0) fhi = 0.0;
      double root = brent(f, lo, hi, flo, fhi, 1e-13 * std::max(1.0, hi));
      if (std::abs(root - candidates.front()) >
          1e-9 * (1.0 + std::abs(candidates.front())))
        candidates.push_back(root);
    }
  }

  std::vector<EvidentialState> matching;
  std::ostringstream seen;
  for (double nc : candidates) {
    double xc = solve_x_for_entropy(nc, s0 + consts.entropy_offset_k, consts);
    bool left = classify_left(nc, xc, consts, cfg);
    seen << " (n=" << nc << ", " << (left ? "left" : "right") << ")";
    if (left == (branch == Branch::left_of_trp))
      matching.push_back(make_state({nc, xc}, consts, cfg));
  }
  if (matching.empty()) {
    std::ostringstream msg;
    msg << "solve_state: no state on the requested transition-point side; "
           "candidates:" << seen.str();
    throw SolverError(msg.str());
  }
  auto dist = [&](const EvidentialState& st) {
    return std::abs(std::log((st.point.n + 1.0) / (n_hint + 1.0)));
  };
  EvidentialState best = matching.front();
  for (const auto& st : matching)
    if (dist(st) < dist(best)) best = st;
  if (std::abs(best.log_e - std::log(e_target)) > 1e-6)
    throw SolverError("solve_state: solution failed the target cross-check");
  return best;
}

std::vector<PathSample> trace_isotherm(double e_level, double n_lo,
                                       double n_hi, int samples,
                                       const ModelConstants& consts,
                                       const QuadratureConfig& cfg) {
  if (!(e_level > 0.0))
    throw std::domain_error("trace_isotherm: e_level must be > 0");
  if (!(n_lo > 0.0) || !(n_hi > n_lo))
    throw std::domain_error("trace_isotherm: need 0 < n_lo < n_hi");
  if (samples < 2) throw std::domain_error("trace_isotherm: samples >= 2");

  std::vector<double> grid(samples);
  for (int i = 0; i < samples; ++i)
    grid[i] = n_lo + (n_hi - n_lo) * i / (samples - 1);
  std::vector<TransitionPoint> tps;
  tps.reserve(samples);
  double best_floor = std::numeric_limits<double>::infinity();
  for (double n : grid) {
    tps.push_back(min_evidence_point(n, consts, cfg));
    best_floor = std::min(best_floor, tps.back().e_min);
  }

  std::vector<PathSample> out;
  auto emit = [&](double n, const TransitionPoint& tp, Branch br) {
    try {
      double x = solve_x_for_evidence_impl(n, e_level, br, tp, consts, cfg);
      out.push_back(detail::sample_from_state(make_state({n, x}, consts, cfg)));
    } catch (const NoSolutionError&) {
    } catch (const std::range_error&) {
    }
  };
  for (int i = 0; i < samples; ++i)
    emit(grid[i], tps[i], Branch::left_of_trp);
  for (int i = samples - 1; i >= 0; --i)
    emit(grid[i], tps[i], Branch::right_of_trp);
  if (out.empty()) {
    std::ostringstream msg;
    msg << "trace_isotherm: level " << e_level
        << " unattainable anywhere on the range (smallest fixed-n minimum "
        << best_floor << ")";
    throw NoSolutionError(msg.str(), best_floor);
  }
  return out;
}

std::vector<PathSample> trace_adiabat(double s_level, double n_lo,
                                      double n_hi, int samples,
                                      const ModelConstants& consts,
                                      const QuadratureConfig& cfg) {
  if (!(n_lo > 0.0) || !(n_hi > n_lo))
    throw std::domain_error("trace_adiabat: need 0 < n_lo < n_hi");
  if (samples < 2) throw std::domain_error("trace_adiabat: samples >= 2");
  double s0 = s_level - consts.entropy_offset_k;
  if (s0 < 0.0)
    throw std::domain_error("trace_adiabat: entropy level below its floor");

  std::vector<PathSample> out;
  for (int i = 0; i < samples; ++i) {
    double n = n_lo + (n_hi - n_lo) * i / (samples - 1);
    if (n * kLn2 < s0) continue;  // entropy level unreachable at this n
    double x = solve_x_for_entropy(n, s_level, consts);
    out.push_back(detail::sample_from_state(make_state({n, x}, consts, cfg)));
  }
  if (out.empty())
    throw NoSolutionError(
        "trace_adiabat: entropy level unreachable on the whole range",
        std::numeric_limits<double>::quiet_NaN());
  return out;
}

}  // namespace evitherm
