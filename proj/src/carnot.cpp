#include "evitherm/carnot.hpp"

#include <cmath>
#include <sstream>

namespace evitherm {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321;

// place a cycle node on a known adiabat at a prescribed log-volume,
// continuing from the count of the node reached just before it; continuation
// keeps each node on the piece of the curve its stroke actually traverses
EvidentialState solve_node(const char* label, double s_level,
                           double log_v_target, double n_start,
                           const ModelConstants& consts,
                           const QuadratureConfig& cfg) {
  try {
    double s0 = s_level - consts.entropy_offset_k;
    if (s0 < -1e-12 * std::max(1.0, std::abs(s_level))) {
      std::ostringstream msg;
      msg << "entropy " << s_level << " lies below its floor "
          << consts.entropy_offset_k;
      throw InfeasibleTargetError(msg.str());
    }
    s0 = std::max(s0, 0.0);
    detail::IsentropePeak pk = detail::isentrope_peak(s0, consts, cfg);
    if (log_v_target >
        pk.log_v_peak + 1e-11 * std::max(1.0, std::abs(pk.log_v_peak))) {
      std::ostringstream msg;
      msg << "volume target " << log_v_target
          << " exceeds the adiabat's maximum log-volume " << pk.log_v_peak;
      throw InfeasibleTargetError(msg.str());
    }
    double n_floor = s0 / kLn2;
    double n = detail::isentrope_volume_root_near(s0, log_v_target, n_start,
                                                  n_floor, consts, cfg);
    double x = solve_x_for_entropy(n, s_level, consts);
    return make_state({n, x}, consts, cfg);
  } catch (const InfeasibleTargetError& e) {
    std::ostringstream msg;
    msg << "node " << label << " is infeasible: " << e.what();
    throw InfeasibleTargetError(msg.str());
  } catch (const SolverError& e) {
    std::ostringstream msg;
    msg << "node " << label << " could not be placed: " << e.what();
    throw SolverError(msg.str());
  }
}

// walk one stroke as a dense path, uniform in log V, keeping the sample
// count contract and landing each point by local root continuation
std::vector<PathSample> walk_stroke(const EvidentialState& start,
                                    double log_v_end, double s_of_log_v_slope,
                                    double s_at_start, int samples,
                                    const ModelConstants& consts,
                                    const QuadratureConfig& cfg) {
  std::vector<PathSample> path;
  path.reserve(samples);
  path.push_back(detail::sample_from_state(start));
  double lv0 = start.log_v_e;
  double n_prev = start.point.n;
  for (int i = 1; i < samples; ++i) {
    double lv = lv0 + (log_v_end - lv0) * i / (samples - 1);
    double s = s_at_start + s_of_log_v_slope * (lv - lv0);
    double s0 = s - consts.entropy_offset_k;
    double n_floor = s0 / kLn2;
    double n = detail::isentrope_volume_root_near(s0, lv, n_prev, n_floor,
                                                  consts, cfg);
    double x = solve_x_for_entropy(n, s, consts);
    path.push_back(detail::sample_from_state(make_state({n, x}, consts, cfg)));
    n_prev = n;
  }
  return path;
}

Stroke make_isothermal(const EvidentialState& a, const EvidentialState& b,
                       int samples, const ModelConstants& consts,
                       const QuadratureConfig& cfg) {
  Stroke st;
  st.kind = StrokeKind::isothermal;
  st.start = a;
  st.end = b;
  // along an isotherm S = c_v ln E + r ln V, so dS/d ln V = r
  st.path = walk_stroke(a, b.log_v_e, consts.r, a.s_e, samples, consts, cfg);
  st.w_analytic = consts.r * a.e() * (b.log_v_e - a.log_v_e);
  st.w_numeric = work_numeric(st.path);
  return st;
}

Stroke make_adiabatic(const EvidentialState& a, const EvidentialState& b,
                      int samples, const ModelConstants& consts,
                      const QuadratureConfig& cfg) {
  Stroke st;
  st.kind = StrokeKind::adiabatic;
  st.start = a;
  st.end = b;
  st.path = walk_stroke(a, b.log_v_e, 0.0, a.s_e, samples, consts, cfg);
  st.w_analytic = consts.c_v * (a.e() - b.e());
  st.w_numeric = work_numeric(st.path);
  return st;
}

}  // namespace

double work_numeric(const std::vector<PathSample>& path) {
  if (path.size() < 2)
    throw std::domain_error("work_numeric: need at least two path samples");
  double w = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    double v0 = std::exp(path[i - 1].log_v_e);
    double v1 = std::exp(path[i].log_v_e);
    w += 0.5 * (path[i - 1].p_e + path[i].p_e) * (v1 - v0);
  }
  return w;
}

CarnotCycle build_cycle(double e1, double e2, const EvidentialState& start,
                        double expansion_ratio, int path_samples,
                        const ModelConstants& consts,
                        const QuadratureConfig& cfg) {
  if (!(e1 > 0.0) || !(e2 > e1))
    throw std::domain_error("build_cycle: need 0 < e1 < e2");
  if (!(expansion_ratio > 1.0))
    throw std::domain_error("build_cycle: expansion_ratio must exceed 1");
  if (path_samples < 2)
    throw std::domain_error("build_cycle: path_samples must be >= 2");
  if (std::abs(start.log_e - std::log(e2)) >
      1e-6 * std::max(1.0, std::abs(std::log(e2))))
    throw std::domain_error("build_cycle: start state is not on the hot isotherm");

  const double ln_ratio = std::log(expansion_ratio);
  const double ln_e1 = std::log(e1);
  const EvidentialState& a = start;
  const double s_hot = a.s_e + consts.r * ln_ratio;

  EvidentialState b =
      solve_node("B", s_hot, a.log_v_e + ln_ratio,
                 a.point.n * expansion_ratio, consts, cfg);
  EvidentialState c =
      solve_node("C", s_hot, (s_hot - consts.c_v * ln_e1) / consts.r,
                 b.point.n, consts, cfg);
  EvidentialState d =
      solve_node("D", a.s_e, (a.s_e - consts.c_v * ln_e1) / consts.r,
                 c.point.n, consts, cfg);

  CarnotCycle cyc;
  cyc.e1 = e1;
  cyc.e2 = e2;
  cyc.strokes[0] = make_isothermal(a, b, path_samples, consts, cfg);
  cyc.strokes[1] = make_adiabatic(b, c, path_samples, consts, cfg);
  cyc.strokes[2] = make_isothermal(c, d, path_samples, consts, cfg);
  cyc.strokes[3] = make_adiabatic(d, a, path_samples, consts, cfg);

  cyc.q2 = cyc.strokes[0].w_analytic;
  cyc.q1 = -cyc.strokes[2].w_analytic;
  cyc.efficiency = 1.0 - cyc.q1 / cyc.q2;

  const PathSample& back = cyc.strokes[3].path.back();
  cyc.closure_residual = std::hypot(back.log_v_e - a.log_v_e,
                                    std::log(back.e) - a.log_e);
  return cyc;
}

AuditReport audit_cycle(const CarnotCycle& cycle, const ModelConstants& consts,
                        const CycleTolerances& tol) {
  (void)consts;
  AuditReport rep;
  auto add = [&rep](const std::string& name, double residual, double bound) {
    AuditEntry e;
    e.name = name;
    e.residual = residual;
    e.tolerance = bound;
    e.pass = residual <= bound;
    rep.entries.push_back(e);
  };

  double e_ratio = cycle.e1 / cycle.e2;
  add("q_ratio_vs_e_ratio",
      std::abs(cycle.q1 / cycle.q2 - e_ratio) / e_ratio, tol.q_ratio);
  add("efficiency_identity",
      std::abs(cycle.efficiency - (1.0 - cycle.q1 / cycle.q2)),
      tol.efficiency_identity);

  double wb = cycle.strokes[1].w_analytic;
  double wd = cycle.strokes[3].w_analytic;
  add("adiabatic_cancellation",
      std::abs(wb + wd) / std::max(1.0, std::abs(wb)),
      tol.adiabatic_cancellation);
  add("closure", cycle.closure_residual, tol.closure);

  static const char* names[4] = {"stroke_a_work", "stroke_b_work",
                                 "stroke_c_work", "stroke_d_work"};
  for (int i = 0; i < 4; ++i) {
    const Stroke& st = cycle.strokes[i];
    add(names[i],
        std::abs(st.w_numeric - st.w_analytic) /
            std::max(1.0, std::abs(st.w_analytic)),
        tol.stroke_work);
  }

  double net = 0.0;
  for (const Stroke& st : cycle.strokes) net += st.w_analytic;
  double heat = cycle.q2 - cycle.q1;
  add("net_work_vs_heat", std::abs(net - heat) / std::max(1.0, heat),
      tol.net_work);

  rep.all_pass = true;
  for (const AuditEntry& e : rep.entries) rep.all_pass = rep.all_pass && e.pass;
  return rep;
}

}  // namespace evitherm
