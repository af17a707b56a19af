#pragma once

// Monte-Carlo elections: voters with random preference vectors vote between
// two policies, and the winner frequency is compared to the total utility
// difference Delta = sum_v q_v^T (z_A - z_B).

#include "policygame/model.hpp"
#include "policygame/parallel.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

namespace policygame {

enum class Criterion { hardmax, linear, softmax };
enum class Distribution { uniform, gaussian };

std::string_view to_string(Criterion c);
std::string_view to_string(Distribution d);
Criterion parse_criterion(std::string_view s);
Distribution parse_distribution(std::string_view s);

struct SimConfig {
  int voters = 100;
  int k = 1;
  int trials = 10000;
  Criterion criterion = Criterion::hardmax;
  Distribution distribution = Distribution::uniform;
  double xi = 0.01;
  double mu_lo = -0.005;
  double mu_hi = 0.005;
  // Half-width of the uniform box around mu, or the Gaussian sigma.
  double spread = 0.05;
  std::uint64_t seed = 42;
  std::optional<Profile> fixed_pair;

  void validate() const;
};

struct TrialRecord {
  double delta = 0.0;
  Party winner = Party::A;
  int votes_a = 0;
  int votes_b = 0;
};

// Probability that a voter with utilities (u_a, u_b) votes for A.
double vote_probability_a(double u_a, double u_b, Criterion c, double xi);

Party cast_vote(double u_a, double u_b, Criterion c, double xi, std::mt19937_64& rng);

using PolicySampler = std::function<Profile(std::mt19937_64&)>;

// Uniform over [-1,1]^k intersected with the unit ball.
Profile sample_policy_pair(int k, std::mt19937_64& rng);

// Trial t runs on its own generator seeded with seed + t.
std::vector<TrialRecord> run_trials(const SimConfig& cfg, const PolicySampler& sampler = {},
                                    Exec exec = Exec::parallel);

struct CurveBin {
  int index = 0;
  double delta_lo = 0.0;
  double delta_hi = 0.0;
  double win_freq = 0.0;
  int count = 0;
};

struct IsotonicityReport {
  std::vector<CurveBin> bins;
  // Goodman-Kruskal gamma between bin index and win frequency; tied
  // frequencies neither support nor contradict monotonicity.
  double score = 0.0;
  double spearman = 0.0;
};

// Equal-count bins over records sorted by Delta. Needs >= 100 records.
IsotonicityReport isotonicity_report(std::vector<TrialRecord> records, int bins = 20);

// Spearman correlation with average ranks for ties; 0 when either side is
// constant.
double spearman(const std::vector<double>& x, const std::vector<double>& y);
double goodman_kruskal_gamma(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace policygame
