#pragma once

#include <array>
#include <string>
#include <vector>

#include "evitherm/solvers.hpp"

namespace evitherm {

enum class StrokeKind { isothermal, adiabatic };

struct Stroke {
  StrokeKind kind = StrokeKind::isothermal;
  EvidentialState start;
  EvidentialState end;
  std::vector<PathSample> path;
  double w_analytic = 0.0;
  double w_numeric = 0.0;
};

// Four-stroke reversible cycle between evidence levels e1 < e2, traversed
// A (isothermal expansion at e2), B (adiabatic expansion to e1),
// C (isothermal compression at e1), D (adiabatic compression back).
struct CarnotCycle {
  double e1 = 0.0;
  double e2 = 0.0;
  std::array<Stroke, 4> strokes;
  double q2 = 0.0;  // energy absorbed during stroke A (= W_A)
  double q1 = 0.0;  // energy rejected during stroke C (= |W_C|)
  double efficiency = 0.0;
  double closure_residual = 0.0;
};

struct AuditEntry {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct AuditReport {
  std::vector<AuditEntry> entries;
  bool all_pass = false;
};

struct CycleTolerances {
  double q_ratio = 1e-6;
  double adiabatic_cancellation = 1e-8;
  double closure = 1e-8;
  double stroke_work = 1e-4;
  double net_work = 1e-6;
  double efficiency_identity = 1e-12;
};

// Build the cycle from a start state on the e2 isotherm. Node B sits at
// V_B = expansion_ratio * V_A; nodes C and D complete the rectangle in
// (S, ln V). Paths are sampled uniformly in ln V with path_samples points
// per stroke. Throws InfeasibleTargetError naming the offending node when
// a target cannot be realized.
CarnotCycle build_cycle(double e1, double e2, const EvidentialState& start,
                        double expansion_ratio, int path_samples,
                        const ModelConstants& consts,
                        const QuadratureConfig& cfg);

// Trapezoidal integral of P dV over the samples in traversal order.
// Positive = work done by the system.
double work_numeric(const std::vector<PathSample>& path);

AuditReport audit_cycle(const CarnotCycle& cycle,
                        const ModelConstants& consts,
                        const CycleTolerances& tol = {});

}  // namespace evitherm
