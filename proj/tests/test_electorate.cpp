#include "doctest.h"

#include "policygame/electorate.hpp"
#include "policygame/error.hpp"

#include <cmath>
#include <random>

using namespace policygame;

TEST_CASE("vote probabilities") {
  for (Criterion c : {Criterion::hardmax, Criterion::linear, Criterion::softmax}) {
    CHECK(vote_probability_a(0.3, 0.3, c, 0.01) == 0.5);
  }
  CHECK(vote_probability_a(0.02, 0.01, Criterion::linear, 0.01) == 1.0);
  CHECK(vote_probability_a(0.5, 0.0, Criterion::linear, 0.01) == 1.0);
  CHECK(vote_probability_a(0.0, 0.5, Criterion::linear, 0.01) == 0.0);
  CHECK(vote_probability_a(0.01 * std::log(3.0), 0.0, Criterion::softmax, 0.01) ==
        doctest::Approx(0.75).epsilon(1e-14));
  CHECK(vote_probability_a(1000.0, 0.0, Criterion::softmax, 0.01) == 1.0);
  CHECK(vote_probability_a(0.0, 1000.0, Criterion::softmax, 0.01) == 0.0);
  CHECK(vote_probability_a(0.2, 0.1, Criterion::hardmax, 0.01) == 1.0);

  std::mt19937_64 rng(51);
  for (int i = 0; i < 100; ++i) {
    const double a = std::uniform_real_distribution<double>(-1, 1)(rng);
    const double b = std::uniform_real_distribution<double>(-1, 1)(rng);
    CHECK(std::abs(vote_probability_a(a, b, Criterion::linear, 1e6) - 0.5) <= 1e-4);
    CHECK(std::abs(vote_probability_a(a, b, Criterion::softmax, 1e6) - 0.5) <= 1e-4);
  }
}

TEST_CASE("parsing and validation") {
  CHECK(parse_criterion("softmax") == Criterion::softmax);
  CHECK(parse_distribution("gaussian") == Distribution::gaussian);
  CHECK_THROWS_AS(parse_criterion("majority"), ValidationError);
  CHECK_THROWS_AS(parse_distribution("cauchy"), ValidationError);
  SimConfig cfg;
  cfg.xi = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  cfg.fixed_pair = Profile{Vector::Constant(2, 0.1), Vector::Constant(2, 0.1)};
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("identical policies give a fair coin") {
  SimConfig cfg;
  cfg.trials = 4000;
  cfg.fixed_pair = Profile{Vector::Constant(1, 0.4), Vector::Constant(1, 0.4)};
  for (Criterion c : {Criterion::hardmax, Criterion::linear, Criterion::softmax}) {
    cfg.criterion = c;
    const auto records = run_trials(cfg);
    int wins = 0;
    for (const auto& r : records) {
      wins += r.winner == Party::A ? 1 : 0;
      CHECK(r.delta == 0.0);
      CHECK(r.votes_a + r.votes_b == cfg.voters);
    }
    const double freq = static_cast<double>(wins) / cfg.trials;
    CHECK(std::abs(freq - 0.5) <= 3.0 * std::sqrt(0.25 / cfg.trials));
  }
}

TEST_CASE("a single hardmax voter decides by sign") {
  SimConfig cfg;
  cfg.voters = 1;
  cfg.trials = 500;
  const auto records = run_trials(cfg);
  for (const auto& r : records) {
    if (r.delta > 0.0) CHECK(r.winner == Party::A);
    if (r.delta < 0.0) CHECK(r.winner == Party::B);
  }
}

TEST_CASE("trials are reproducible and thread-independent") {
  SimConfig cfg;
  cfg.trials = 1500;
  cfg.k = 2;
  cfg.criterion = Criterion::softmax;
  cfg.distribution = Distribution::gaussian;
  const auto a = run_trials(cfg, {}, Exec::parallel);
  const auto b = run_trials(cfg, {}, Exec::serial);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].delta == b[i].delta);
    CHECK(a[i].winner == b[i].winner);
    CHECK(a[i].votes_a == b[i].votes_a);
    CHECK(a[i].votes_a + a[i].votes_b == cfg.voters);
  }
}

TEST_CASE("policy sampler hook") {
  SimConfig cfg;
  cfg.trials = 200;
  int calls = 0;
  const auto records = run_trials(
      cfg,
      [&](std::mt19937_64&) {
        ++calls;
        return Profile{Vector::Constant(1, 1.0), Vector::Constant(1, -1.0)};
      },
      Exec::serial);
  CHECK(calls == 200);
  for (const auto& r : records) CHECK(r.delta != 0.0);
}

TEST_CASE("isotonicity report") {
  std::mt19937_64 rng(52);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<TrialRecord> step, noise;
  for (int i = 0; i < 2000; ++i) {
    TrialRecord r;
    r.delta = n(rng);
    r.winner = r.delta > 0.0 ? Party::A : Party::B;
    step.push_back(r);
    r.winner = std::uniform_real_distribution<double>(0, 1)(rng) < 0.5 ? Party::A : Party::B;
    noise.push_back(r);
  }
  const auto isotone = isotonicity_report(step);
  CHECK(isotone.score == 1.0);
  REQUIRE(isotone.bins.size() == 20);
  int total = 0;
  for (std::size_t b = 0; b < isotone.bins.size(); ++b) {
    total += isotone.bins[b].count;
    CHECK(isotone.bins[b].delta_lo <= isotone.bins[b].delta_hi);
    if (b > 0) CHECK(isotone.bins[b - 1].delta_hi <= isotone.bins[b].delta_lo);
  }
  CHECK(total == 2000);
  CHECK(std::abs(isotonicity_report(noise).score) < 0.5);

  CHECK_THROWS_AS(isotonicity_report(std::vector<TrialRecord>(99)), ValidationError);
}

TEST_CASE("rank statistics") {
  CHECK(spearman({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
  CHECK(spearman({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
  CHECK(spearman({1, 2, 3}, {5, 5, 5}) == 0.0);
  // average ranks on ties
  CHECK(spearman({1, 2, 3, 4}, {0, 0, 1, 1}) == doctest::Approx(0.894427191).epsilon(1e-9));
  CHECK(goodman_kruskal_gamma({1, 2, 3, 4}, {0, 0, 1, 1}) == 1.0);
  CHECK(goodman_kruskal_gamma({1, 2, 3}, {1, 3, 2}) == doctest::Approx(1.0 / 3.0));
}
