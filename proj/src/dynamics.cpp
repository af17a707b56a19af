#include "policygame/dynamics.hpp"

#include "policygame/error.hpp"
#include "policygame/tolerances.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <numbers>
#include <string>

namespace policygame {

void set_thread_count(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

int thread_count() { return omp_get_max_threads(); }

std::string_view to_string(Method m) {
  return m == Method::vanilla ? "vanilla" : "extragradient";
}

std::string_view to_string(ConvergenceKind k) {
  switch (k) {
    case ConvergenceKind::point: return "point";
    case ConvergenceKind::cycle: return "cycle";
    case ConvergenceKind::max_iterations: return "max-iterations";
  }
  return "unknown";
}

void AscentConfig::validate() const {
  if (!(step_exponent >= 0.5 && step_exponent <= 1.0)) {
    throw ValidationError("step exponent must lie in [0.5, 1], got " + std::to_string(step_exponent));
  }
  if (max_iterations < 1) throw ValidationError("max iterations must be >= 1");
  if (!(delta > 0.0)) throw ValidationError("convergence tolerance delta must be > 0");
  if (window < 1) throw ValidationError("history window must be >= 1");
  if (!(certify.spacing > 0.0)) throw ValidationError("certification spacing must be > 0");
}

namespace {

// Alternating reflections across the rays at 0 and rho compose to a triangle
// wave of period 2*rho on the unwrapped angle.
double fold_into_wedge(double phi, double rho) {
  if (rho <= 0.0) return 0.0;
  double m = std::fmod(phi, 2.0 * rho);
  if (m < 0.0) m += 2.0 * rho;
  return std::clamp(rho - std::abs(m - rho), 0.0, rho);
}

void clamp_box_slop(Vector& z) {
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (std::abs(z[i]) > 1.0) z[i] = std::copysign(1.0, z[i]);
  }
}

}  // namespace

Vector project(const Vector& z, const GameInstance& inst, Party party) {
  const PlaneBasis& basis = inst.basis(party);
  const double n = z.norm();
  const double scale = n > 1.0 ? 1.0 / n : 1.0;
  const double c1 = scale * z.dot(basis.b1);
  const double c2 = scale * z.dot(basis.b2);
  const double rho = inst.rho(party);
  const double phi = std::atan2(c2, c1);

  Vector out;
  if (phi >= 0.0 && phi <= rho) {
    out = c1 * basis.b1 + c2 * basis.b2;
  } else {
    const double s = std::hypot(c1, c2);
    const double psi = fold_into_wedge(phi, rho);
    out = s * (std::cos(psi) * basis.b1 + std::sin(psi) * basis.b2);
  }
  clamp_box_slop(out);
  return out;
}

AscentResult ascend(const GameInstance& inst, const Profile& init, const AscentConfig& cfg,
                    bool record_trajectory) {
  cfg.validate();
  if (init.a.size() != inst.k() || init.b.size() != inst.k()) {
    throw ValidationError("initial profile dimension does not match the instance");
  }
  if (!in_strategy_set(init.a, tol::kGeometric) || !in_strategy_set(init.b, tol::kGeometric)) {
    throw ValidationError("initial profile must lie in S");
  }
  const auto started = std::chrono::steady_clock::now();

  AscentResult result;
  Profile current = init;
  std::deque<Profile> history{current};
  if (record_trajectory) result.trajectory.push_back(current);

  auto step = [&](const Profile& base, const Profile& at, double eta) {
    Profile next;
    next.a = project(base.a + eta * grad_payoff(at, inst, Party::A), inst, Party::A);
    next.b = project(base.b + eta * grad_payoff(at, inst, Party::B), inst, Party::B);
    return next;
  };

  RunReport& report = result.report;
  report.kind = ConvergenceKind::max_iterations;
  int t = 1;
  for (; t <= cfg.max_iterations; ++t) {
    const double eta = std::pow(static_cast<double>(t), -cfg.step_exponent);
    Profile next;
    if (cfg.method == Method::vanilla) {
      next = step(current, current, eta);
    } else {
      const Profile mid = step(current, current, eta);
      next = step(current, mid, eta);
    }
    if (record_trajectory) result.trajectory.push_back(next);

    // Most recent first, so a match at t-1 is reported as a fixed point.
    bool converged = false;
    std::size_t back = 0;
    for (auto it = history.rbegin(); it != history.rend(); ++it, ++back) {
      const double d = std::max((next.a - it->a).norm(), (next.b - it->b).norm());
      if (d <= cfg.delta) {
        converged = true;
        break;
      }
    }
    history.push_back(next);
    if (history.size() > static_cast<std::size_t>(cfg.window)) history.pop_front();
    current = std::move(next);
    if (converged) {
      report.kind = back == 0 ? ConvergenceKind::point : ConvergenceKind::cycle;
      break;
    }
  }
  report.iterations = std::min(t, cfg.max_iterations);
  report.final_profile = current;
  report.certified_gain = certify(current, inst, cfg.certify).max_gain();
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

namespace {

Vector uniform_in_ball(int k, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector d(k);
  double n = 0.0;
  do {
    for (int i = 0; i < k; ++i) d[i] = normal(rng);
    n = d.norm();
  } while (n == 0.0);
  const double radius = std::pow(unit(rng), 1.0 / k);
  return d * (radius / n);
}

}  // namespace

GameInstance sample_instance(int k, Rng& rng) {
  if (k < 2) throw ValidationError("random instances need k >= 2 for wedge geometry");
  for (;;) {
    Vector q_a = uniform_in_ball(k, rng);
    Vector q_b = uniform_in_ball(k, rng);
    if (q_a.norm() == 0.0 || q_b.norm() == 0.0 || (q_a + q_b).norm() == 0.0) continue;
    return GameInstance::from_aggregates(std::move(q_a), std::move(q_b));
  }
}

std::vector<GameInstance> sample_instances(int count, int k, std::uint64_t seed) {
  if (count < 1) throw ValidationError("instance count must be >= 1");
  Rng rng(stream_seed(seed, 0x1a57a9ce));
  std::vector<GameInstance> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(sample_instance(k, rng));
  return out;
}

Profile sample_init(const GameInstance& inst, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&](Party p) {
    const double r = std::sqrt(unit(rng));
    const double theta = unit(rng) * inst.rho(p);
    return from_polar({p, r, theta, true}, inst);
  };
  Profile z;
  z.a = draw(Party::A);
  z.b = draw(Party::B);
  return z;
}

GainReport certify(const Profile& z, const GameInstance& inst, const CertifyOptions& opts) {
  if (!(opts.spacing > 0.0)) throw ValidationError("certification spacing must be > 0");
  const int n = static_cast<int>(std::floor(2.0 / opts.spacing + 1e-9)) + 1;
  GainReport report;

  for (Party party : {Party::A, Party::B}) {
    double& gain = party == Party::A ? report.gain_a : report.gain_b;
    std::size_t& points = party == Party::A ? report.points_a : report.points_b;
    if (inst.norm(party) == 0.0) continue;  // payoff identically zero

    const PlaneBasis& basis = inst.basis(party);
    const double limit = opts.full_span ? inst.rho_a() + inst.rho_b() : inst.rho(party);
    const double current = payoff(z, inst, party);
    Profile deviated = z;
    Vector& s = deviated.of(party);
    for (int i = 0; i < n; ++i) {
      const double u = -1.0 + i * opts.spacing;
      for (int j = 0; j < n; ++j) {
        const double v = -1.0 + j * opts.spacing;
        const double radius = std::hypot(u, v);
        if (radius > 1.0 + tol::kGeometric) continue;
        if (radius > tol::kGeometric) {
          const double angle = std::atan2(v, u);
          if (angle < -tol::kAngle || angle > limit + tol::kAngle) continue;
        }
        s.noalias() = u * basis.b1 + v * basis.b2;
        ++points;
        gain = std::max(gain, payoff(deviated, inst, party) - current);
      }
    }
  }
  return report;
}

namespace {

BatchRow run_one(const BatchSpec& spec, int run_id) {
  const int instance_id = run_id / spec.inits_per_instance;
  const GameInstance& inst = spec.instances[static_cast<std::size_t>(instance_id)];
  Rng rng(spec.config.seed + static_cast<std::uint64_t>(run_id));
  const Profile init = sample_init(inst, rng);
  BatchRow row;
  row.instance_id = instance_id;
  row.run_id = run_id;
  row.consensus_reachable = is_consensus_reachable(inst);
  row.report = ascend(inst, init, spec.config).report;
  row.is_approx_psne = row.report.certified_gain <= spec.approx_epsilon;
  return row;
}

}  // namespace

std::vector<BatchRow> run_batch(const BatchSpec& spec, Exec exec) {
  if (spec.instances.empty()) throw ValidationError("batch has no instances");
  if (spec.inits_per_instance < 1) throw ValidationError("inits per instance must be >= 1");
  spec.config.validate();
  for (std::size_t i = 0; i < spec.instances.size(); ++i) {
    const auto& inst = spec.instances[i];
    if (inst.k() < 2 || inst.degenerate_for(Party::A) || inst.degenerate_for(Party::B)) {
      throw ValidationError("instance " + std::to_string(i) +
                            " is degenerate or one-dimensional; ascent needs a wedge");
    }
  }
  const int total = static_cast<int>(spec.instances.size()) * spec.inits_per_instance;
  std::vector<BatchRow> rows(static_cast<std::size_t>(total));

  if (exec == Exec::serial) {
    for (int r = 0; r < total; ++r) rows[static_cast<std::size_t>(r)] = run_one(spec, r);
    return rows;
  }
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < total; ++r) rows[static_cast<std::size_t>(r)] = run_one(spec, r);
  return rows;
}

}  // namespace policygame
