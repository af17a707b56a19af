#include "policygame/closed_form.hpp"

#include "policygame/error.hpp"

#include <algorithm>
#include <cmath>

namespace policygame {

void ScalarInstance::validate() const {
  if (!std::isfinite(q_a) || !std::isfinite(q_b)) {
    throw ValidationError("scalar aggregates must be finite");
  }
  if (!relaxed && (std::abs(q_a) > 1.0 || std::abs(q_b) > 1.0)) {
    throw ValidationError("normalization violated: |q_a| and |q_b| must be <= 1 (got q_a = " +
                          std::to_string(q_a) + ", q_b = " + std::to_string(q_b) +
                          "); pass --relaxed to allow");
  }
}

std::string to_string(Branch1d b) {
  switch (b) {
    case Branch1d::boundary_up: return "boundary_up";
    case Branch1d::boundary_down: return "boundary_down";
    case Branch1d::indifferent: return "indifferent";
    case Branch1d::opposed: return "opposed";
    case Branch1d::clamped_down: return "clamped_down";
    case Branch1d::interior_up: return "interior_up";
    case Branch1d::clamped_up: return "clamped_up";
    case Branch1d::interior_down: return "interior_down";
  }
  return "unknown";
}

std::string Solution1d::case_tag() const {
  return "A:" + to_string(branch_a) + ",B:" + to_string(branch_b);
}

namespace {

struct Choice {
  double z;
  Branch1d branch;
};

Choice best_policy(double q_x, double q) {
  if (q_x == 0.0) return {q < 0.0 ? -1.0 : 1.0, Branch1d::indifferent};
  if (q == 0.0) return {q_x > 0.0 ? 1.0 : -1.0, Branch1d::opposed};
  if (q * q_x > 0.0) return q > 0.0 ? Choice{1.0, Branch1d::boundary_up} : Choice{-1.0, Branch1d::boundary_down};
  if (q > 0.0) {
    if (q < 1.0) return {-1.0, Branch1d::clamped_down};
    return {1.0 - 2.0 / q, Branch1d::interior_up};
  }
  if (q > -1.0) return {1.0, Branch1d::clamped_up};
  return {-1.0 - 2.0 / q, Branch1d::interior_down};
}

}  // namespace

Solution1d solve_1d(const ScalarInstance& inst) {
  inst.validate();
  const Choice a = best_policy(inst.q_a, inst.q());
  const Choice b = best_policy(inst.q_b, inst.q());
  return {a.z, b.z, a.branch, b.branch};
}

double payoff_1d(double z_a, double z_b, const ScalarInstance& inst, Party party) {
  const double q_x = inst.aggregate(party);
  const double own = party == Party::A ? z_a : z_b;
  const double other = party == Party::A ? z_b : z_a;
  return 0.5 * (own + other) * q_x + inst.q() * q_x * (own - other) * (own - other) / 8.0;
}

double verify_1d(double z_a, double z_b, const ScalarInstance& inst, int grid_points) {
  if (grid_points < 3) throw ValidationError("verify_1d needs at least 3 grid points");
  const double current_a = payoff_1d(z_a, z_b, inst, Party::A);
  const double current_b = payoff_1d(z_a, z_b, inst, Party::B);
  double gain = 0.0;
  const double spacing = 2.0 / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i) {
    const double s = i + 1 == grid_points ? 1.0 : -1.0 + i * spacing;
    gain = std::max(gain, payoff_1d(s, z_b, inst, Party::A) - current_a);
    gain = std::max(gain, payoff_1d(z_a, s, inst, Party::B) - current_b);
  }
  return gain;
}

}  // namespace policygame
