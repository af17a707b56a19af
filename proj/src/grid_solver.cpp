#include "policygame/grid_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace policygame {

double lipschitz_bound(const GameInstance& inst) {
  return 2.0 * (inst.norm_q_a() + inst.norm_q_b());
}

double GridSpec::required_n(double max_rho, double lipschitz, double epsilon) {
  return std::ceil(2.0 * max_rho * lipschitz / epsilon) + 1.0;
}

GridSpec GridSpec::make(const GameInstance& inst, double epsilon, std::optional<long> n_override,
                        long cap) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ValidationError("epsilon must be a positive finite number");
  }
  GridSpec spec;
  spec.epsilon = epsilon;
  spec.lipschitz = lipschitz_bound(inst);
  const double max_rho = std::max(inst.rho_a(), inst.rho_b());

  const double needed = required_n(max_rho, spec.lipschitz, epsilon);
  if (needed > static_cast<double>(cap)) {
    throw ValidationError("epsilon " + std::to_string(epsilon) + " needs N = " +
                          std::to_string(needed) + " grid points, above the cap " +
                          std::to_string(cap));
  }
  const long required = static_cast<long>(needed);
  if (n_override) {
    if (*n_override < required) {
      throw ValidationError("n = " + std::to_string(*n_override) + " is below the required " +
                            std::to_string(required) + " for epsilon " + std::to_string(epsilon));
    }
    if (*n_override > cap) {
      throw ValidationError("n = " + std::to_string(*n_override) + " exceeds the cap " +
                            std::to_string(cap));
    }
  }
  spec.n = n_override.value_or(required);
  spec.h = spec.n > 1 ? max_rho / static_cast<double>(spec.n - 1) : 0.0;
  spec.epsilon_hat = epsilon - spec.lipschitz * spec.h;
  return spec;
}

namespace {

AngleGrid build_grid(const GameInstance& inst, const GridSpec& spec, Party party) {
  AngleGrid grid;
  grid.party = party;
  const double rho = inst.rho(party);
  const auto n = static_cast<std::size_t>(spec.n);
  grid.angles.reserve(n);
  grid.policies.reserve(n);
  grid.distinct = n;
  for (std::size_t i = 0; i < n; ++i) {
    const double raw = static_cast<double>(i) * spec.h;
    if (raw >= rho && grid.distinct == n) grid.distinct = i + 1;
    const double angle = std::min(raw, rho);
    grid.angles.push_back(angle);
    grid.policies.push_back(from_polar({party, 1.0, angle, true}, inst));
  }
  return grid;
}

// Inner products of every grid policy with the aggregates; the payoff at a
// pair of grid indices is then O(1).
struct Projections {
  std::vector<double> on_qa, on_qb, on_q;
};

Projections project_grid(const AngleGrid& grid, const GameInstance& inst, std::size_t count) {
  Projections p;
  p.on_qa.resize(count);
  p.on_qb.resize(count);
  p.on_q.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    p.on_qa[i] = grid.policies[i].dot(inst.q_a());
    p.on_qb[i] = grid.policies[i].dot(inst.q_b());
    p.on_q[i] = grid.policies[i].dot(inst.q());
  }
  return p;
}

struct PayoffTable {
  Projections a, b;

  double p_a(long i, long j) const { return 0.5 + (a.on_q[i] - b.on_q[j]) / 8.0; }
  double r_a(long i, long j) const {
    const double p = p_a(i, j);
    return p * a.on_qa[i] + (1.0 - p) * b.on_qa[j];
  }
  double r_b(long i, long j) const {
    const double p = p_a(i, j);
    return (1.0 - p) * b.on_qb[j] + p * a.on_qb[i];
  }
};

template <class F>
TbrResult best_response(F&& f, long count, BestResponse mode) {
  if (mode == BestResponse::ternary) return tbr(f, 0, count - 1);
  TbrResult out;
  out.value = -std::numeric_limits<double>::infinity();
  for (long i = 0; i < count; ++i) {
    const double v = f(i);
    if (v > out.value) {
      out.value = v;
      out.index = i;
    }
  }
  out.evaluations = count;
  return out;
}

struct Candidate {
  long x = 0;
  long y = 0;
  double gain_a = 0.0;
  double gain_b = 0.0;
  std::int64_t evals = 0;
};

Candidate evaluate_candidate(const PayoffTable& table, long y0, long count_a, long count_b,
                             BestResponse mode) {
  Candidate c;
  const auto x_hat = best_response([&](long i) { return table.r_a(i, y0); }, count_a, mode);
  c.x = x_hat.index;
  const auto y_hat = best_response([&](long j) { return table.r_b(c.x, j); }, count_b, mode);
  c.y = y_hat.index;
  const auto a_dev = best_response([&](long i) { return table.r_a(i, c.y); }, count_a, mode);
  const double r_a = table.r_a(c.x, c.y);
  // y_hat already maximizes R_B against x_hat over the grid, so B's gain is
  // the same best response compared to the payoff it attains.
  const double r_b = table.r_b(c.x, c.y);
  c.gain_a = std::max(0.0, a_dev.value - r_a);
  c.gain_b = std::max(0.0, y_hat.value - r_b);
  c.evals = x_hat.evaluations + y_hat.evaluations + a_dev.evaluations + 2;
  return c;
}

}  // namespace

GridPair build_grids(const GameInstance& inst, const GridSpec& spec) {
  for (Party p : {Party::A, Party::B}) {
    if (inst.degenerate_for(p)) {
      throw ValidationError("grid search needs nonzero Q_A, Q_B and Q; party " +
                            std::string(to_string(p)) + " is degenerate");
    }
  }
  if (spec.n < 1) throw ValidationError("grid count must be >= 1");
  return {build_grid(inst, spec, Party::A), build_grid(inst, spec, Party::B)};
}

TbrResult tbr(std::span<const double> values, long lo, long hi) {
  if (lo < 0 || hi >= static_cast<long>(values.size())) {
    throw ValidationError("tbr: range outside the sequence");
  }
  return tbr([&](long i) { return values[static_cast<std::size_t>(i)]; }, lo, hi);
}

GbaResult gba_psne(const GameInstance& inst, const GbaOptions& opts, Exec exec) {
  GbaResult result;
  result.spec = GridSpec::make(inst, opts.epsilon, opts.n_override, opts.n_cap);
  const GridPair grids = build_grids(inst, result.spec);
  const long count_a = static_cast<long>(grids.a.distinct);
  const long count_b = static_cast<long>(grids.b.distinct);
  const PayoffTable table{project_grid(grids.a, inst, grids.a.distinct),
                          project_grid(grids.b, inst, grids.b.distinct)};
  const double threshold = result.spec.epsilon_hat;

  // Candidates are evaluated in blocks; within a block they may run
  // concurrently, but acceptance scans in grid order so the answer and the
  // evaluation count match the serial loop.
  const long block = exec == Exec::serial ? 1 : std::max<long>(64, 16L * thread_count());
  std::vector<Candidate> scratch(static_cast<std::size_t>(std::min(block, count_b)));
  bool found = false;
  Candidate best;
  long best_index = -1;
  double best_gain = std::numeric_limits<double>::infinity();
  std::int64_t evals = 0;

  for (long start = 0; start < count_b && !found; start += block) {
    const long stop = std::min(count_b, start + block);
    if (exec == Exec::serial) {
      for (long y = start; y < stop; ++y) {
        scratch[static_cast<std::size_t>(y - start)] =
            evaluate_candidate(table, y, count_a, count_b, opts.best_response);
      }
    } else {
#pragma omp parallel for schedule(static)
      for (long y = start; y < stop; ++y) {
        scratch[static_cast<std::size_t>(y - start)] =
            evaluate_candidate(table, y, count_a, count_b, opts.best_response);
      }
    }
    for (long y = start; y < stop; ++y) {
      const Candidate& c = scratch[static_cast<std::size_t>(y - start)];
      evals += c.evals;
      const double gain = std::max(c.gain_a, c.gain_b);
      if (gain < best_gain) {
        best_gain = gain;
        best = c;
        best_index = y;
      }
      if (c.gain_a <= threshold && c.gain_b <= threshold) {
        found = true;
        best = c;
        best_index = y;
        break;
      }
    }
  }

  result.certified = found;
  result.index_a = best.x;
  result.index_b = best.y;
  result.candidate = best_index;
  result.gain_a = best.gain_a;
  result.gain_b = best.gain_b;
  result.max_gain = std::max(best.gain_a, best.gain_b);
  result.payoff_evals = evals;
  result.profile.a = grids.a.policies[static_cast<std::size_t>(best.x)];
  result.profile.b = grids.b.policies[static_cast<std::size_t>(best.y)];
  return result;
}

}  // namespace policygame
