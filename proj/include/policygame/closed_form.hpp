#pragma once

// Exact pure equilibrium of the one-dimensional game (k = 1).
//
// With scalar aggregates R_A = (z_A + z_B) Q_A / 2 + Q Q_A (z_A - z_B)^2 / 8,
// so R_A is convex in z_A when Q Q_A >= 0 (best response on the boundary) and
// concave otherwise (interior stationary point 1 - 2/Q, clamped to [-1, 1]).

#include "policygame/model.hpp"

#include <string>

namespace policygame {

struct ScalarInstance {
  double q_a = 0.0;
  double q_b = 0.0;
  // Permits |Q_X| > 1 so the interior branches (which need |Q| >= 1 with
  // opposite-sign Q_X) become reachable.
  bool relaxed = false;

  double q() const { return q_a + q_b; }
  double aggregate(Party p) const { return p == Party::A ? q_a : q_b; }

  // Throws ValidationError on non-finite input or |Q_X| > 1 without `relaxed`.
  void validate() const;
};

enum class Branch1d {
  boundary_up,      // Q Q_X >= 0, Q > 0: z_X = +1
  boundary_down,    // Q Q_X >= 0, Q < 0: z_X = -1
  indifferent,      // Q_X = 0: payoff constant in z_X; z_X = sgn(Q), +1 when Q = 0
  opposed,          // Q = 0, Q_X != 0: z_X = sgn(Q_X)
  clamped_down,     // Q > 0 > Q_X, Q < 1: z_X = -1
  interior_up,      // Q > 0 > Q_X, Q >= 1: z_X = 1 - 2/Q
  clamped_up,       // Q < 0 < Q_X, Q > -1: z_X = +1
  interior_down,    // Q < 0 < Q_X, Q <= -1: z_X = -1 - 2/Q
};

std::string to_string(Branch1d b);

struct Solution1d {
  double z_a = 0.0;
  double z_b = 0.0;
  Branch1d branch_a = Branch1d::boundary_up;
  Branch1d branch_b = Branch1d::boundary_up;

  // e.g. "A:interior_up,B:boundary_up"
  std::string case_tag() const;
};

Solution1d solve_1d(const ScalarInstance& inst);

double payoff_1d(double z_a, double z_b, const ScalarInstance& inst, Party party);

// Max over both parties of the best gain from a unilateral deviation to a
// uniform grid of `grid_points` on [-1, 1]. Never negative: staying put is
// always an option.
double verify_1d(double z_a, double z_b, const ScalarInstance& inst, int grid_points);

}  // namespace policygame
