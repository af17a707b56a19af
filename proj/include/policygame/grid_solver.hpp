#pragma once

// Grid-based epsilon-PSNE search over unit policies on each party's wedge,
// with ternary best response over the angle grids.

#include "policygame/error.hpp"
#include "policygame/model.hpp"
#include "policygame/parallel.hpp"

#include <cstdint>
#include <concepts>
#include <optional>
#include <span>
#include <vector>

namespace policygame {

// Lipschitz constant of the payoff map in the angles: 2(||Q_A|| + ||Q_B||).
double lipschitz_bound(const GameInstance& inst);

struct GridSpec {
  long n = 1;
  double h = 0.0;
  double epsilon = 0.0;
  double epsilon_hat = 0.0;
  double lipschitz = 0.0;

  static constexpr long kDefaultCap = 10'000'000;

  // ceil(2 max_rho L / eps) + 1, as a double so oversized requests can be
  // reported instead of overflowing.
  static double required_n(double max_rho, double lipschitz, double epsilon);

  // Smallest admissible N is ceil(2 max(rho_A, rho_B) L / eps) + 1. An
  // override below that is rejected, as is any N above `cap`.
  static GridSpec make(const GameInstance& inst, double epsilon,
                       std::optional<long> n_override = std::nullopt, long cap = kDefaultCap);
};

struct AngleGrid {
  Party party = Party::A;
  std::vector<double> angles;    // min(i h, rho_X)
  std::vector<Vector> policies;  // unit vectors at those angles
  // Number of leading entries before the clamp at rho_X repeats the last one.
  std::size_t distinct = 0;

  std::size_t size() const { return policies.size(); }
};

struct GridPair {
  AngleGrid a;
  AngleGrid b;
};

GridPair build_grids(const GameInstance& inst, const GridSpec& spec);

struct TbrResult {
  long index = 0;
  double value = 0.0;
  long evaluations = 0;
};

// Ternary search for the maximum of a unimodal f over [lo, hi]. Ties move the
// left end ("f(m1) <= f(m2) keeps the right part"); at most three indices are
// scanned linearly at the end, first maximum wins.
template <class F>
  requires std::invocable<F&, long>
TbrResult tbr(F&& f, long lo, long hi) {
  if (lo > hi) throw ValidationError("tbr: empty range");
  TbrResult out;
  while (hi - lo > 2) {
    const long third = (hi - lo) / 3;
    const long m1 = lo + third;
    const long m2 = hi - third;
    const double f1 = f(m1);
    const double f2 = f(m2);
    out.evaluations += 2;
    if (f1 <= f2) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  out.index = lo;
  out.value = f(lo);
  ++out.evaluations;
  for (long i = lo + 1; i <= hi; ++i) {
    const double v = f(i);
    ++out.evaluations;
    if (v > out.value) {
      out.value = v;
      out.index = i;
    }
  }
  return out;
}

TbrResult tbr(std::span<const double> values, long lo, long hi);

enum class BestResponse { ternary, exhaustive };

struct GbaOptions {
  double epsilon = 0.1;
  std::optional<long> n_override;
  long n_cap = GridSpec::kDefaultCap;
  BestResponse best_response = BestResponse::ternary;
};

struct GbaResult {
  Profile profile;
  GridSpec spec;
  bool certified = false;
  double gain_a = 0.0;  // grid gains at the returned profile
  double gain_b = 0.0;
  double max_gain = 0.0;
  long index_a = 0;
  long index_b = 0;
  long candidate = 0;  // position of the accepted y in the B grid
  std::int64_t payoff_evals = 0;
};

GbaResult gba_psne(const GameInstance& inst, const GbaOptions& opts, Exec exec = Exec::parallel);

}  // namespace policygame
