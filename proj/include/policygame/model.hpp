#pragma once

// Data model and payoff calculus of the two-party policy competition game.
//
// Two parties A and B propose policies z_A, z_B in
//   S = { z in [-1,1]^k : ||z|| <= 1 }.
// Voters of party X aggregate into Q_X; Q = Q_A + Q_B. Party A wins with
//   p_A = 1/2 + (z_A - z_B)^T Q / 8
// and its payoff is the expected utility of its supporters,
//   R_A = p_A z_A^T Q_A + (1 - p_A) z_B^T Q_A.
//
// Payoffs depend on policies only through their projection onto
// span{Q_A, Q_B}, so every policy has a polar form (r, theta) relative to
// its own party's aggregate, with theta measured toward Q.

#include <Eigen/Dense>

#include <optional>
#include <string_view>
#include <vector>

namespace policygame {

using Vector = Eigen::VectorXd;

enum class Party { A, B };

constexpr Party opponent(Party p) { return p == Party::A ? Party::B : Party::A; }
std::string_view to_string(Party p);

struct PreferenceSet {
  Party party = Party::A;
  std::vector<Vector> voters;

  // 0 when empty.
  int dimension() const;
};

// Throws ValidationError when a voter leaves S or dimensions disagree.
void validate(const PreferenceSet& prefs);

bool in_strategy_set(const Vector& z, double slack = 1e-12);

struct DegenerateFlags {
  bool zero_q_a = false;
  bool zero_q_b = false;
  bool zero_q = false;

  bool any() const { return zero_q_a || zero_q_b || zero_q; }
};

// Orthonormal basis of the plane span{Q_X, Q}: b1 along Q_X, b2 the unit
// component of Q orthogonal to b1 (so Q^T b2 >= 0). When Q is parallel to
// Q_X, b2 falls back to a deterministic coordinate-based direction and
// `degenerate` is set.
struct PlaneBasis {
  Vector b1;
  Vector b2;
  bool degenerate = false;
};

class GameInstance {
 public:
  // Aggregates must satisfy ||Q_X|| <= 1. With `rescale`, oversized aggregates
  // are both divided by max(||Q_A||, ||Q_B||) instead of being rejected.
  static GameInstance from_aggregates(Vector q_a, Vector q_b, bool rescale = false);

  int k() const { return static_cast<int>(q_a_.size()); }
  const Vector& q_a() const { return q_a_; }
  const Vector& q_b() const { return q_b_; }
  const Vector& q() const { return q_; }
  const Vector& aggregate(Party p) const { return p == Party::A ? q_a_ : q_b_; }

  double norm_q_a() const { return norm_a_; }
  double norm_q_b() const { return norm_b_; }
  double norm_q() const { return norm_q_; }
  double norm(Party p) const { return p == Party::A ? norm_a_ : norm_b_; }

  // Angle between Q_X and Q in [0, pi]; 0 when undefined.
  double rho_a() const { return rho_a_; }
  double rho_b() const { return rho_b_; }
  double rho(Party p) const { return p == Party::A ? rho_a_ : rho_b_; }

  const DegenerateFlags& degenerate() const { return flags_; }
  // True when the party's polar frame is undefined (zero Q_X or zero Q).
  bool degenerate_for(Party p) const;

  // Cached plane basis; throws ValidationError for degenerate parties or k = 1.
  const PlaneBasis& basis(Party p) const;

 private:
  GameInstance() = default;

  Vector q_a_, q_b_, q_;
  double norm_a_ = 0.0, norm_b_ = 0.0, norm_q_ = 0.0;
  double rho_a_ = 0.0, rho_b_ = 0.0;
  DegenerateFlags flags_;
  std::optional<PlaneBasis> basis_a_, basis_b_;
};

GameInstance aggregate(const PreferenceSet& prefs_a, const PreferenceSet& prefs_b,
                       bool rescale = false);

struct Profile {
  Vector a;
  Vector b;

  const Vector& of(Party p) const { return p == Party::A ? a : b; }
  Vector& of(Party p) { return p == Party::A ? a : b; }
};

struct WinProbability {
  double a = 0.5;
  double b = 0.5;
};

WinProbability win_prob(const Profile& z, const GameInstance& inst);
double payoff(const Profile& z, const GameInstance& inst, Party party);

// Gradient of R_X with respect to the party's own policy z_X.
Vector grad_payoff(const Profile& z, const GameInstance& inst, Party party);

// d^2 R_X / dz_X^2 [i, j] = (Q[i] Q_X[j] + Q[j] Q_X[i]) / 8. Profile-free.
double hessian_entry(const GameInstance& inst, Party party, int i, int j);

struct EgoisticCheck {
  bool holds = true;
  double slack_a = 0.0;  // z_A^T Q_A - z_B^T Q_A
  double slack_b = 0.0;  // z_B^T Q_B - z_A^T Q_B
};

EgoisticCheck is_egoistic(const Profile& z, const GameInstance& inst);
bool is_consensus_reachable(const GameInstance& inst);

PlaneBasis plane_basis(const GameInstance& inst, Party anchor);

struct PolarPolicy {
  Party party = Party::A;
  double r = 0.0;
  double theta = 0.0;
  // theta within [0, rho_X]
  bool canonical = true;
};

Vector from_polar(const PolarPolicy& pp, const GameInstance& inst);

struct PolarDecomposition {
  PolarPolicy polar;
  double residual = 0.0;  // norm of the component outside span{Q_A, Q_B}
  bool zero = false;      // in-plane part vanished; theta reported as 0
};

PolarDecomposition to_polar(const Vector& z, const GameInstance& inst, Party party);

struct PolarPayoffs {
  double p_a = 0.5;
  double r_a = 0.0;
  double r_b = 0.0;
};

PolarPayoffs payoff_polar(double r_a, double theta_a, double r_b, double theta_b,
                          const GameInstance& inst);

}  // namespace policygame
