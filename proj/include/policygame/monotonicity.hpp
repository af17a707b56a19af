#pragma once

// Reduced two-variable form of the game on unit policies, x = cos theta_A and
// y = cos theta_B, and probes of the monotonicity of its pseudo-gradient.
//
// With C1 = cos rho_A, C2 = cos rho_B (S1, S2 the sines), D0 = ||Q|| / 8:
//   p_A = 1/2 + D0 (C1 x + S1 sqrt(1-x^2) - C2 y - S2 sqrt(1-y^2))
//   f(x, y) = ||Q_A|| (p_A x + (1 - p_A) M(y))
//   g(x, y) = ||Q_B|| ((1 - p_A) y + p_A M(x))
//   M(t) = K t + L sqrt(1-t^2),  K = cos(rho_A + rho_B), L = sin(rho_A + rho_B)

#include "policygame/model.hpp"
#include "policygame/parallel.hpp"

#include <array>
#include <cstdint>

namespace policygame {

struct ReducedParams {
  double norm_q_a = 0.0;
  double norm_q_b = 0.0;
  double norm_q = 0.0;
  double c1 = 1.0, c2 = 1.0;
  double s1 = 0.0, s2 = 0.0;
  double k = 1.0, l = 0.0;
  double d0 = 0.0;

  static ReducedParams make(double norm_q_a, double norm_q_b, double norm_q, double c1, double c2);
  static ReducedParams from_instance(const GameInstance& inst);

  double m(double t) const;
};

using Point2 = std::array<double, 2>;

struct ReducedPayoffs {
  double p_a = 0.5;
  double f = 0.0;  // R_A
  double g = 0.0;  // R_B
};

ReducedPayoffs reduced_payoffs(double x, double y, const ReducedParams& p);
ReducedPayoffs reduced_payoffs_theta(double theta_a, double theta_b, const ReducedParams& p);

// (df/dx, dg/dy). x, y in [0, 1].
Point2 pseudo_gradient(double x, double y, const ReducedParams& p);

// (df/dtheta_A, dg/dtheta_B). Angles in [0, pi/2].
Point2 theta_space_pseudo_gradient(double theta_a, double theta_b, const ReducedParams& p);

enum class ProbeSpace { cosine, angle };

// (F(u) - F(v))^T (u - v); positive values violate monotonicity.
double monotonicity_gap(const Point2& u, const Point2& v, const ReducedParams& p,
                        ProbeSpace space = ProbeSpace::cosine);

struct ProbeResult {
  std::int64_t pairs = 0;
  std::int64_t violations = 0;
  double violation_fraction = 0.0;
  Point2 witness_u{};
  Point2 witness_v{};
  double s = 0.0;  // gap at the witness, the largest sampled
};

// Pairs are drawn uniformly from [0,1]^2 (cosine space) or [0,pi/2]^2 (angle
// space) in fixed-size blocks with independent RNG streams, so the result
// does not depend on the thread count.
ProbeResult monotonicity_probe(const ReducedParams& p, std::int64_t pairs, std::uint64_t seed,
                               ProbeSpace space = ProbeSpace::cosine, Exec exec = Exec::parallel);

// The known witness: ||Q_A|| = ||Q_B|| = 1, C1 = C2 = 0.6, ||Q|| = 1.2 with
// z1 = (0.49, 0.1), z2 = (0.1, 0.94).
struct CounterexampleReport {
  ReducedParams params;
  Point2 z1{}, z2{};
  Point2 f_z1{}, f_z2{};
  double s_cosine = 0.0;
  double s_angle = 0.0;  // same pair mapped through arccos
};

CounterexampleReport known_counterexample();

}  // namespace policygame
