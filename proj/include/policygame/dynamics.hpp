#pragma once

// Decentralized projected gradient ascent (and its extragradient variant) on
// the policy game, with grid certification of approximate equilibria.

#include "policygame/model.hpp"
#include "policygame/parallel.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace policygame {

using Rng = std::mt19937_64;

enum class Method { vanilla, extragradient };
std::string_view to_string(Method m);

struct CertifyOptions {
  double spacing = 0.1;
  // Deviations range over the whole Q_A-to-Q_B sector instead of the
  // party's own Q_X-to-Q wedge.
  bool full_span = false;
};

struct AscentConfig {
  double step_exponent = 0.75;  // eta_t = t^-a
  int max_iterations = 10000;
  double delta = 1e-4;
  int window = 50;
  Method method = Method::vanilla;
  std::uint64_t seed = 42;
  CertifyOptions certify;

  // a in (0.5, 1]: sum eta = inf and sum eta^2 < inf.
  bool robbins_monro() const { return step_exponent > 0.5 && step_exponent <= 1.0; }
  // Accepts a in [0.5, 1]; throws ValidationError otherwise.
  void validate() const;
};

enum class ConvergenceKind { point, cycle, max_iterations };
std::string_view to_string(ConvergenceKind k);

struct RunReport {
  Profile final_profile;
  int iterations = 0;
  ConvergenceKind kind = ConvergenceKind::max_iterations;
  double certified_gain = 0.0;
  double seconds = 0.0;
};

struct AscentResult {
  RunReport report;
  // Iterates z^(0), z^(1), ... when recording was requested.
  std::vector<Profile> trajectory;
};

// Rescale into the unit ball, drop the out-of-plane residual, then fold the
// in-plane angle into [0, rho_X] by reflecting across the Q_X ray (negative
// angles) or the Q ray (angles beyond rho_X) until it lands in the wedge.
Vector project(const Vector& z, const GameInstance& inst, Party party);

AscentResult ascend(const GameInstance& inst, const Profile& init, const AscentConfig& cfg,
                    bool record_trajectory = false);

// Q_A, Q_B independently uniform in the unit ball of R^k.
GameInstance sample_instance(int k, Rng& rng);
std::vector<GameInstance> sample_instances(int count, int k, std::uint64_t seed);

// Each policy uniform (area-correct) over the party's unit-disk wedge.
Profile sample_init(const GameInstance& inst, Rng& rng);

struct GainReport {
  double gain_a = 0.0;
  double gain_b = 0.0;
  std::size_t points_a = 0;
  std::size_t points_b = 0;

  double max_gain() const { return gain_a > gain_b ? gain_a : gain_b; }
};

// Best unilateral gain over the Cartesian grid {-1 + i*spacing}^2 laid out in
// each party's plane basis, restricted to the unit disk and the wedge.
GainReport certify(const Profile& z, const GameInstance& inst, const CertifyOptions& opts = {});

struct BatchSpec {
  std::vector<GameInstance> instances;
  int inits_per_instance = 1;
  AscentConfig config;
  double approx_epsilon = 0.05;
};

struct BatchRow {
  int instance_id = 0;
  int run_id = 0;  // global run index; the run's RNG seed is config.seed + run_id
  bool consensus_reachable = false;
  RunReport report;
  bool is_approx_psne = false;
};

std::vector<BatchRow> run_batch(const BatchSpec& spec, Exec exec = Exec::parallel);

}  // namespace policygame
