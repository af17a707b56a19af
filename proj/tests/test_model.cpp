#include "doctest.h"
#include "oracles.hpp"

#include "policygame/error.hpp"
#include "policygame/model.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace policygame;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

GameInstance random_instance(int k, std::mt19937_64& rng) {
  for (;;) {
    Vector a = oracle::random_aggregate(k, rng);
    Vector b = oracle::random_aggregate(k, rng);
    if ((a + b).norm() > 1e-3 && a.norm() > 1e-3 && b.norm() > 1e-3) {
      return GameInstance::from_aggregates(a, b);
    }
  }
}

}  // namespace

TEST_CASE("aggregates must lie in the unit ball unless rescaled") {
  CHECK_THROWS_AS(GameInstance::from_aggregates(vec({1.5, 0}), vec({0, 0.5})), ValidationError);
  auto inst = GameInstance::from_aggregates(vec({1.5, 0}), vec({0, 0.75}), true);
  CHECK(inst.norm_q_a() == doctest::Approx(1.0));
  CHECK(inst.norm_q_b() == doctest::Approx(0.5));
  CHECK_THROWS_AS(GameInstance::from_aggregates(vec({0.1}), vec({0.1, 0.2})), ValidationError);
}

TEST_CASE("aggregate sums voter preferences and checks them") {
  PreferenceSet a{Party::A, {vec({0.2, 0.1}), vec({0.1, 0.3})}};
  PreferenceSet b{Party::B, {vec({-0.2, 0.4})}};
  auto inst = aggregate(a, b);
  CHECK(inst.q_a()[0] == doctest::Approx(0.3));
  CHECK(inst.q_a()[1] == doctest::Approx(0.4));
  CHECK(inst.q()[1] == doctest::Approx(0.8));

  PreferenceSet bad{Party::B, {vec({-0.2, 0.4, 0.0})}};
  CHECK_THROWS_AS(aggregate(a, bad), ValidationError);
  PreferenceSet outside{Party::B, {vec({0.9, 0.9})}};
  CHECK_THROWS_AS(aggregate(a, outside), ValidationError);
  PreferenceSet many{Party::A, {vec({0.9, 0.0}), vec({0.9, 0.0})}};
  CHECK_THROWS_AS(aggregate(many, b), ValidationError);
  CHECK_NOTHROW(aggregate(many, b, true));
}

TEST_CASE("winning probabilities stay in [0,1] and sum to one") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 2000; ++trial) {
    const int k = 1 + trial % 5;
    auto inst = GameInstance::from_aggregates(oracle::random_aggregate(k, rng),
                                              oracle::random_aggregate(k, rng));
    Profile z{oracle::random_policy(k, rng), oracle::random_policy(k, rng)};
    auto p = win_prob(z, inst);
    CHECK(p.a >= 0.0);
    CHECK(p.a <= 1.0);
    CHECK(p.a + p.b == 1.0);
  }
}

TEST_CASE("payoff matches the definition evaluated with plain loops") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const int k = 1 + trial % 6;
    auto inst = GameInstance::from_aggregates(oracle::random_aggregate(k, rng),
                                              oracle::random_aggregate(k, rng));
    Profile z{oracle::random_policy(k, rng), oracle::random_policy(k, rng)};
    CHECK(payoff(z, inst, Party::A) ==
          doctest::Approx(oracle::payoff_loop(z.a, z.b, inst.q_a(), inst.q_b())).epsilon(1e-12));
    CHECK(payoff(z, inst, Party::B) ==
          doctest::Approx(oracle::payoff_loop(z.b, z.a, inst.q_b(), inst.q_a())).epsilon(1e-12));
  }
}

TEST_CASE("gradient and Hessian agree with finite differences") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 1 + trial % 5;
    auto inst = GameInstance::from_aggregates(oracle::random_aggregate(k, rng),
                                              oracle::random_aggregate(k, rng));
    Profile z{oracle::random_policy(k, rng), oracle::random_policy(k, rng)};
    for (Party party : {Party::A, Party::B}) {
      auto f = [&](const Vector& own) {
        Profile moved = z;
        moved.of(party) = own;
        return payoff(moved, inst, party);
      };
      const Vector g = grad_payoff(z, inst, party);
      const Vector fd = oracle::gradient_fd(f, z.of(party));
      CHECK((g - fd).cwiseAbs().maxCoeff() <= 1e-6);

      for (int i = 0; i < k; ++i) {
        auto gi = [&](const Vector& own) {
          Profile moved = z;
          moved.of(party) = own;
          return grad_payoff(moved, inst, party)[i];
        };
        const Vector row = oracle::gradient_fd(gi, z.of(party));
        for (int j = 0; j < k; ++j) CHECK(std::abs(hessian_entry(inst, party, i, j) - row[j]) <= 1e-6);
      }
    }
  }
  auto inst = GameInstance::from_aggregates(vec({0.1, 0.2}), vec({0.3, 0.1}));
  CHECK_THROWS_AS(hessian_entry(inst, Party::A, 2, 0), ValidationError);
}

TEST_CASE("egoistic and consensus-reachable predicates") {
  auto inst = GameInstance::from_aggregates(vec({0.6, 0.0}), vec({0.0, 0.6}));
  CHECK(is_consensus_reachable(inst));
  CHECK(is_egoistic({vec({1, 0}), vec({0, 1})}, inst).holds);
  auto check = is_egoistic({vec({0, 1}), vec({1, 0})}, inst);
  CHECK_FALSE(check.holds);
  CHECK(check.slack_a == doctest::Approx(-0.6));

  // Q_B points against Q.
  auto opposed = GameInstance::from_aggregates(vec({0.9, 0.0}), vec({-0.3, 0.1}));
  CHECK_FALSE(is_consensus_reachable(opposed));
}

TEST_CASE("angles and plane bases") {
  auto inst = GameInstance::from_aggregates(vec({0.5, 0.0, 0.0}), vec({0.0, 0.5, 0.0}));
  CHECK(inst.rho_a() == doctest::Approx(std::numbers::pi / 4));
  CHECK(inst.rho_b() == doctest::Approx(std::numbers::pi / 4));
  const auto& b = inst.basis(Party::A);
  CHECK(b.b1.dot(b.b2) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(b.b1.norm() == doctest::Approx(1.0));
  CHECK(b.b2.norm() == doctest::Approx(1.0));
  CHECK(b.b2.dot(inst.q()) >= 0.0);
  CHECK_FALSE(b.degenerate);

  // Q parallel to Q_A: the fallback direction is still orthonormal.
  auto parallel = GameInstance::from_aggregates(vec({0.3, 0.4}), vec({0.3, 0.4}));
  CHECK(parallel.rho_a() == doctest::Approx(0.0));
  const auto& pb = parallel.basis(Party::A);
  CHECK(pb.degenerate);
  CHECK(pb.b1.dot(pb.b2) == doctest::Approx(0.0).epsilon(1e-15));

  auto zero = GameInstance::from_aggregates(vec({0.3, 0.4}), vec({-0.3, -0.4}));
  CHECK(zero.degenerate().zero_q);
  CHECK_THROWS_AS(zero.basis(Party::A), ValidationError);
  CHECK_THROWS_AS(plane_basis(zero, Party::B), ValidationError);
}

TEST_CASE("polar form round-trips and drops only the out-of-plane residual") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 2 + trial % 4;
    auto inst = random_instance(k, rng);
    for (Party party : {Party::A, Party::B}) {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      const double r = u(rng);
      const double theta = u(rng) * inst.rho(party);
      const Vector z = from_polar({party, r, theta, true}, inst);
      CHECK(in_strategy_set(z));
      auto back = to_polar(z, inst, party);
      CHECK(back.polar.r == doctest::Approx(r).epsilon(1e-12));
      if (r > 1e-9) CHECK(back.polar.theta == doctest::Approx(theta).epsilon(1e-9));
      CHECK(back.residual <= 1e-12);
      CHECK(back.polar.canonical);
    }
  }
  auto inst = GameInstance::from_aggregates(vec({0.5, 0.0, 0.0}), vec({0.0, 0.5, 0.0}));
  auto d = to_polar(vec({0.0, 0.0, 0.7}), inst, Party::A);
  CHECK(d.zero);
  CHECK(d.residual == doctest::Approx(0.7));
  CHECK_THROWS_AS(from_polar({Party::A, 1.5, 0.0, true}, inst), ValidationError);
}

TEST_CASE("polar payoffs equal Cartesian payoffs") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    auto inst = random_instance(2 + trial % 4, rng);
    const double r_a = u(rng), r_b = u(rng);
    const double t_a = u(rng) * inst.rho_a(), t_b = u(rng) * inst.rho_b();
    Profile z{from_polar({Party::A, r_a, t_a, true}, inst),
              from_polar({Party::B, r_b, t_b, true}, inst)};
    auto polar = payoff_polar(r_a, t_a, r_b, t_b, inst);
    CHECK(polar.p_a == doctest::Approx(win_prob(z, inst).a).epsilon(1e-12));
    CHECK(polar.r_a == doctest::Approx(payoff(z, inst, Party::A)).epsilon(1e-12));
    CHECK(polar.r_b == doctest::Approx(payoff(z, inst, Party::B)).epsilon(1e-12));
  }
}

TEST_CASE("radial curvature is non-negative on consensus-reachable instances") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  while (checked < 300) {
    auto inst = random_instance(2 + checked % 3, rng);
    if (!is_consensus_reachable(inst)) continue;
    ++checked;
    const double t_a = u(rng) * inst.rho_a();
    const double r_b = u(rng), t_b = u(rng) * inst.rho_b();
    const double r_a = 0.05 + 0.9 * u(rng);
    auto f = [&](double r) { return payoff_polar(r, t_a, r_b, t_b, inst).r_a; };
    const double curvature = oracle::second_difference(f, r_a, 1e-3);
    const double closed = 0.25 * inst.norm_q_a() * inst.norm_q() * std::cos(t_a) *
                          std::cos(inst.rho_a() - t_a);
    CHECK(curvature >= -1e-8);
    CHECK(curvature == doctest::Approx(closed).epsilon(1e-6));
  }
}
