#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "evitherm/core.hpp"

namespace evitherm {

class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested evidence level lies below the minimum attainable on the curve.
class NoSolutionError : public std::runtime_error {
 public:
  NoSolutionError(const std::string& msg, double e_min_)
      : std::runtime_error(msg), e_min(e_min_) {}
  double e_min;
};

// Target (E, V) pair forces a negative entropy or a volume beyond the
// isentrope's reachable range; no state exists.
class InfeasibleTargetError : public std::runtime_error {
 public:
  explicit InfeasibleTargetError(const std::string& msg)
      : std::runtime_error(msg) {}
};

struct TransitionPoint {
  double n = 0.0;
  double x_star = 0.0;
  double e_min = 0.0;
  double residual = 0.0;  // stationarity equation residual at x_star
};

struct PathSample {
  ObservationPoint point;
  double log_v_e = 0.0;
  double p_e = 0.0;
  double e = 0.0;
  double s_e = 0.0;
};

// Which side of the transition point a state lies on. The side is part of
// the interpretation of an evidence value and travels with it.
enum class Branch { left_of_trp, right_of_trp };

struct SolverConfig {
  double residual_tol = 1e-10;
  double coord_rel_tol = 1e-8;
  int max_iterations = 200;
};

// x in (0, n/2) where E is minimized for fixed n: the root of
// posterior_log_odds_mean(n, x) = ln(x/(n-x)). Independent of c_v.
// Two-sided models are symmetric about x = n/2, which is returned directly.
TransitionPoint transition_point(double n, double tol,
                                 const ModelConstants& consts,
                                 const QuadratureConfig& cfg);

// Inverse of the strictly decreasing map x -> S_E(n, x) on [0, n/2].
double solve_x_for_entropy(double n, double s_target,
                           const ModelConstants& consts);

// x on the requested branch with E(n, x) = e_target. Throws
// NoSolutionError if e_target is below the fixed-n minimum, range_error if
// it exceeds the branch endpoint value.
double solve_x_for_evidence(double n, double e_target, Branch branch,
                            const ModelConstants& consts,
                            const QuadratureConfig& cfg);

// Solve (n, x) from targets (E, ln V). The entropy is forced to
// s = c_v ln E + r ln V; the outer search runs on n along that isentrope.
// ln V along an isentrope rises to a single interior maximum and then
// falls, so a volume target may have two preimages; candidates are
// filtered by the requested branch and ties broken toward n_hint.
EvidentialState solve_state(double e_target, double log_v_target,
                            double n_hint, Branch branch,
                            const ModelConstants& consts,
                            const QuadratureConfig& cfg);

// Constant-E curve sampled on a uniform n grid over [n_lo, n_hi].
// Traversal order: left branch by ascending n, then right branch by
// descending n, so consecutive samples are adjacent on the curve. Grid
// points where the level is unattainable are omitted (the gap shows as a
// missing n). Throws NoSolutionError if no grid point is feasible.
std::vector<PathSample> trace_isotherm(double e_level, double n_lo,
                                       double n_hi, int samples,
                                       const ModelConstants& consts,
                                       const QuadratureConfig& cfg);

// Constant-S_E curve sampled on a uniform n grid, ascending n. Grid points
// with n ln2 < s_level - k are omitted (entropy cannot reach the level).
std::vector<PathSample> trace_adiabat(double s_level, double n_lo,
                                      double n_hi, int samples,
                                      const ModelConstants& consts,
                                      const QuadratureConfig& cfg);

namespace detail {

// ln V at the point of the isentrope s0 (offset-free entropy) with toss
// count n.
double isentrope_log_volume(double n, double s0, const ModelConstants& consts,
                            const QuadratureConfig& cfg);

// Locate the interior maximum of ln V along the isentrope s0. Returns
// {n_peak, log_v_peak}.
struct IsentropePeak {
  double n_peak;
  double log_v_peak;
};
IsentropePeak isentrope_peak(double s0, const ModelConstants& consts,
                             const QuadratureConfig& cfg);

// Root of isentrope_log_volume(n) = log_v_target near n_start, found by a
// geometrically expanding local bracket. Used for stroke-path continuation
// where the neighbouring sample is known.
double isentrope_volume_root_near(double s0, double log_v_target,
                                  double n_start, double n_floor,
                                  const ModelConstants& consts,
                                  const QuadratureConfig& cfg);

PathSample sample_from_state(const EvidentialState& st);

// True when (n, x) sits left of the fixed-n transition point.
bool classify_branch(double n, double x, const ModelConstants& consts,
                     const QuadratureConfig& cfg);

}  // namespace detail

}  // namespace evitherm
