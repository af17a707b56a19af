#include "policygame/monotonicity.hpp"

#include "policygame/error.hpp"
#include "policygame/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace policygame {

namespace {

constexpr double kDomainSlack = 1e-12;

double checked_unit(double t, const char* name) {
  if (!std::isfinite(t) || t < -kDomainSlack || t > 1.0 + kDomainSlack) {
    throw ValidationError(std::string(name) + " = " + std::to_string(t) + " outside [0, 1]");
  }
  return std::clamp(t, 0.0, 1.0);
}

double co(double t) { return std::sqrt(std::max(0.0, 1.0 - t * t)); }

double checked_cosine(double c, const char* name) {
  if (!std::isfinite(c) || std::abs(c) > 1.0 + kDomainSlack) {
    throw ValidationError(std::string(name) + " = " + std::to_string(c) + " outside [-1, 1]");
  }
  return std::clamp(c, -1.0, 1.0);
}

}  // namespace

ReducedParams ReducedParams::make(double norm_q_a, double norm_q_b, double norm_q, double c1,
                                  double c2) {
  if (!(norm_q_a >= 0.0) || !(norm_q_b >= 0.0) || !(norm_q >= 0.0)) {
    throw ValidationError("aggregate norms must be non-negative");
  }
  ReducedParams p;
  p.norm_q_a = norm_q_a;
  p.norm_q_b = norm_q_b;
  p.norm_q = norm_q;
  p.c1 = checked_cosine(c1, "c1");
  p.c2 = checked_cosine(c2, "c2");
  p.s1 = co(p.c1);
  p.s2 = co(p.c2);
  p.k = p.c1 * p.c2 - p.s1 * p.s2;
  p.l = p.s1 * p.c2 + p.c1 * p.s2;
  p.d0 = norm_q / 8.0;
  return p;
}

ReducedParams ReducedParams::from_instance(const GameInstance& inst) {
  return make(inst.norm_q_a(), inst.norm_q_b(), inst.norm_q(), std::cos(inst.rho_a()),
              std::cos(inst.rho_b()));
}

double ReducedParams::m(double t) const { return k * t + l * co(t); }

ReducedPayoffs reduced_payoffs(double x, double y, const ReducedParams& p) {
  x = checked_unit(x, "x");
  y = checked_unit(y, "y");
  ReducedPayoffs out;
  out.p_a = 0.5 + p.d0 * (p.c1 * x + p.s1 * co(x) - p.c2 * y - p.s2 * co(y));
  out.f = p.norm_q_a * (out.p_a * x + (1.0 - out.p_a) * p.m(y));
  out.g = p.norm_q_b * ((1.0 - out.p_a) * y + out.p_a * p.m(x));
  return out;
}

ReducedPayoffs reduced_payoffs_theta(double theta_a, double theta_b, const ReducedParams& p) {
  return reduced_payoffs(std::cos(theta_a), std::cos(theta_b), p);
}

Point2 pseudo_gradient(double x, double y, const ReducedParams& p) {
  x = checked_unit(x, "x");
  y = checked_unit(y, "y");
  const double p_a = reduced_payoffs(x, y, p).p_a;
  // d sqrt(1-t^2)/dt is unbounded at t = 1, so F is infinite there unless the
  // matching sine vanishes. The angle form has no such singularity.
  const double sx = co(x);
  const double sy = co(y);
  const double dp_dx = p.d0 * (p.c1 - (p.s1 == 0.0 ? 0.0 : p.s1 * x / sx));
  const double dp_dy = p.d0 * (-p.c2 + (p.s2 == 0.0 ? 0.0 : p.s2 * y / sy));
  return {p.norm_q_a * (p_a + (x - p.m(y)) * dp_dx),
          p.norm_q_b * ((1.0 - p_a) + (p.m(x) - y) * dp_dy)};
}

Point2 theta_space_pseudo_gradient(double theta_a, double theta_b, const ReducedParams& p) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  for (double t : {theta_a, theta_b}) {
    if (!std::isfinite(t) || t < -tol::kAngle || t > half_pi + tol::kAngle) {
      throw ValidationError("angle " + std::to_string(t) + " outside [0, pi/2]");
    }
  }
  const double x = std::clamp(std::cos(theta_a), 0.0, 1.0);
  const double y = std::clamp(std::cos(theta_b), 0.0, 1.0);
  const double sx = std::sin(std::clamp(theta_a, 0.0, half_pi));
  const double sy = std::sin(std::clamp(theta_b, 0.0, half_pi));
  const double p_a = reduced_payoffs(x, y, p).p_a;
  const double dp_da = p.d0 * (-p.c1 * sx + p.s1 * x);
  const double dp_db = p.d0 * (p.c2 * sy - p.s2 * y);
  return {p.norm_q_a * (-p_a * sx + (x - p.m(y)) * dp_da),
          p.norm_q_b * (-(1.0 - p_a) * sy + (p.m(x) - y) * dp_db)};
}

double monotonicity_gap(const Point2& u, const Point2& v, const ReducedParams& p,
                        ProbeSpace space) {
  const auto field = [&](const Point2& z) {
    return space == ProbeSpace::cosine ? pseudo_gradient(z[0], z[1], p)
                                       : theta_space_pseudo_gradient(z[0], z[1], p);
  };
  const Point2 fu = field(u);
  const Point2 fv = field(v);
  return (fu[0] - fv[0]) * (u[0] - v[0]) + (fu[1] - fv[1]) * (u[1] - v[1]);
}

namespace {

constexpr std::int64_t kBlock = 4096;

struct BlockResult {
  std::int64_t violations = 0;
  Point2 u{}, v{};
  double s = -std::numeric_limits<double>::infinity();
};

BlockResult probe_block(const ReducedParams& p, std::int64_t block, std::int64_t count,
                        std::uint64_t seed, ProbeSpace space) {
  std::mt19937_64 rng(stream_seed(seed, static_cast<std::uint64_t>(block)));
  const double hi = space == ProbeSpace::cosine ? 1.0 : std::numbers::pi / 2.0;
  std::uniform_real_distribution<double> unit(0.0, hi);
  BlockResult out;
  for (std::int64_t i = 0; i < count; ++i) {
    Point2 u{unit(rng), unit(rng)};
    Point2 v{unit(rng), unit(rng)};
    const double s = monotonicity_gap(u, v, p, space);
    if (s > 0.0) ++out.violations;
    if (s > out.s) {
      out.s = s;
      out.u = u;
      out.v = v;
    }
  }
  return out;
}

}  // namespace

ProbeResult monotonicity_probe(const ReducedParams& p, std::int64_t pairs, std::uint64_t seed,
                               ProbeSpace space, Exec exec) {
  if (pairs < 1) throw ValidationError("pairs must be >= 1");
  const std::int64_t blocks = (pairs + kBlock - 1) / kBlock;
  std::vector<BlockResult> results(static_cast<std::size_t>(blocks));
  auto run = [&](std::int64_t b) {
    const std::int64_t count = std::min(kBlock, pairs - b * kBlock);
    results[static_cast<std::size_t>(b)] = probe_block(p, b, count, seed, space);
  };
  if (exec == Exec::serial) {
    for (std::int64_t b = 0; b < blocks; ++b) run(b);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t b = 0; b < blocks; ++b) run(b);
  }

  ProbeResult out;
  out.pairs = pairs;
  out.s = -std::numeric_limits<double>::infinity();
  for (const auto& r : results) {
    out.violations += r.violations;
    if (r.s > out.s) {  // strict: earliest block keeps ties
      out.s = r.s;
      out.witness_u = r.u;
      out.witness_v = r.v;
    }
  }
  out.violation_fraction = static_cast<double>(out.violations) / static_cast<double>(pairs);
  return out;
}

CounterexampleReport known_counterexample() {
  CounterexampleReport r;
  r.params = ReducedParams::make(1.0, 1.0, 1.2, 0.6, 0.6);
  r.z1 = {0.49, 0.1};
  r.z2 = {0.1, 0.94};
  r.f_z1 = pseudo_gradient(r.z1[0], r.z1[1], r.params);
  r.f_z2 = pseudo_gradient(r.z2[0], r.z2[1], r.params);
  r.s_cosine = monotonicity_gap(r.z1, r.z2, r.params, ProbeSpace::cosine);
  const Point2 t1{std::acos(r.z1[0]), std::acos(r.z1[1])};
  const Point2 t2{std::acos(r.z2[0]), std::acos(r.z2[1])};
  r.s_angle = monotonicity_gap(t1, t2, r.params, ProbeSpace::angle);
  return r;
}

}  // namespace policygame
