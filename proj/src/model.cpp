#include "policygame/model.hpp"

#include "policygame/error.hpp"
#include "policygame/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace policygame {

std::string_view to_string(Party p) { return p == Party::A ? "A" : "B"; }

int PreferenceSet::dimension() const {
  return voters.empty() ? 0 : static_cast<int>(voters.front().size());
}

bool in_strategy_set(const Vector& z, double slack) {
  if (z.size() == 0) return false;
  if (!z.allFinite()) return false;
  if (z.cwiseAbs().maxCoeff() > 1.0 + slack) return false;
  return z.norm() <= 1.0 + slack;
}

void validate(const PreferenceSet& prefs) {
  const int k = prefs.dimension();
  for (std::size_t v = 0; v < prefs.voters.size(); ++v) {
    const Vector& q = prefs.voters[v];
    if (static_cast<int>(q.size()) != k) {
      throw ValidationError("party " + std::string(to_string(prefs.party)) + " voter " +
                            std::to_string(v) + " has dimension " + std::to_string(q.size()) +
                            ", expected " + std::to_string(k));
    }
    if (!in_strategy_set(q, tol::kGeometric)) {
      throw ValidationError("party " + std::string(to_string(prefs.party)) + " voter " +
                            std::to_string(v) + " preference vector lies outside S");
    }
  }
}

namespace {

// Angle between u and v using the orthogonal residual; better conditioned
// than arccos near 0 and pi.
double angle_between(const Vector& u, const Vector& v) {
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) return 0.0;
  const Vector b1 = u / nu;
  const double along = v.dot(b1);
  const double across = (v - along * b1).norm();
  return std::atan2(across, along);
}

PlaneBasis compute_basis(const Vector& anchor, const Vector& q) {
  const int k = static_cast<int>(anchor.size());
  PlaneBasis basis;
  basis.b1 = anchor / anchor.norm();
  Vector w = q - q.dot(basis.b1) * basis.b1;
  const double wn = w.norm();
  if (wn > tol::kGeometric * q.norm() && wn > 0.0) {
    basis.b2 = w / wn;
    return basis;
  }
  if (k < 2) {
    throw ValidationError("plane basis needs k >= 2 when Q is parallel to the anchor aggregate");
  }
  // Lowest-index coordinate axis that is well separated from b1.
  basis.degenerate = true;
  for (int i = 0; i < k; ++i) {
    if (1.0 - basis.b1[i] * basis.b1[i] < 0.5) continue;
    Vector e = Vector::Zero(k);
    e[i] = 1.0;
    e -= basis.b1[i] * basis.b1;
    basis.b2 = e / e.norm();
    return basis;
  }
  throw std::logic_error("no coordinate axis separated from the anchor direction");
}

}  // namespace

GameInstance GameInstance::from_aggregates(Vector q_a, Vector q_b, bool rescale) {
  if (q_a.size() == 0) throw ValidationError("aggregate dimension must be at least 1");
  if (q_a.size() != q_b.size()) {
    throw ValidationError("dimension mismatch: q_a has " + std::to_string(q_a.size()) +
                          " entries, q_b has " + std::to_string(q_b.size()));
  }
  if (!q_a.allFinite() || !q_b.allFinite()) throw ValidationError("aggregates must be finite");

  const double na = q_a.norm();
  const double nb = q_b.norm();
  const double largest = std::max(na, nb);
  if (largest > 1.0 + tol::kGeometric) {
    if (!rescale) {
      throw ValidationError("normalization violated: ||q_a|| = " + std::to_string(na) +
                            ", ||q_b|| = " + std::to_string(nb) + " (must be <= 1; use rescale)");
    }
    q_a /= largest;
    q_b /= largest;
  }

  GameInstance inst;
  inst.q_a_ = std::move(q_a);
  inst.q_b_ = std::move(q_b);
  inst.q_ = inst.q_a_ + inst.q_b_;
  inst.norm_a_ = inst.q_a_.norm();
  inst.norm_b_ = inst.q_b_.norm();
  inst.norm_q_ = inst.q_.norm();
  inst.flags_.zero_q_a = inst.norm_a_ == 0.0;
  inst.flags_.zero_q_b = inst.norm_b_ == 0.0;
  inst.flags_.zero_q = inst.norm_q_ == 0.0;

  if (!inst.flags_.zero_q) {
    inst.rho_a_ = angle_between(inst.q_a_, inst.q_);
    inst.rho_b_ = angle_between(inst.q_b_, inst.q_);
  }
  for (Party p : {Party::A, Party::B}) {
    if (inst.degenerate_for(p)) continue;
    if (inst.k() < 2) {
      // 1-D instances have no rotation plane; the polar frame is only
      // available when no rotation is needed.
      continue;
    }
    auto basis = compute_basis(inst.aggregate(p), inst.q_);
    (p == Party::A ? inst.basis_a_ : inst.basis_b_) = std::move(basis);
  }
  return inst;
}

bool GameInstance::degenerate_for(Party p) const {
  return flags_.zero_q || (p == Party::A ? flags_.zero_q_a : flags_.zero_q_b);
}

const PlaneBasis& GameInstance::basis(Party p) const {
  const auto& cached = p == Party::A ? basis_a_ : basis_b_;
  if (!cached) {
    if (degenerate_for(p)) {
      throw ValidationError("party " + std::string(to_string(p)) +
                            " has a degenerate instance (zero aggregate); polar frame undefined");
    }
    throw ValidationError("polar frame requires k >= 2");
  }
  return *cached;
}

GameInstance aggregate(const PreferenceSet& prefs_a, const PreferenceSet& prefs_b, bool rescale) {
  validate(prefs_a);
  validate(prefs_b);
  const int ka = prefs_a.dimension();
  const int kb = prefs_b.dimension();
  if (ka == 0 && kb == 0) throw ValidationError("both preference sets are empty");
  const int k = ka == 0 ? kb : ka;
  if (ka != 0 && kb != 0 && ka != kb) {
    throw ValidationError("dimension mismatch: party A voters have k = " + std::to_string(ka) +
                          ", party B voters have k = " + std::to_string(kb));
  }
  Vector q_a = Vector::Zero(k);
  Vector q_b = Vector::Zero(k);
  for (const auto& v : prefs_a.voters) q_a += v;
  for (const auto& v : prefs_b.voters) q_b += v;
  return GameInstance::from_aggregates(std::move(q_a), std::move(q_b), rescale);
}

WinProbability win_prob(const Profile& z, const GameInstance& inst) {
  const double p_a = 0.5 + (z.a - z.b).dot(inst.q()) / 8.0;
  return {p_a, 1.0 - p_a};
}

double payoff(const Profile& z, const GameInstance& inst, Party party) {
  const Vector& own = z.of(party);
  const Vector& other = z.of(opponent(party));
  const Vector& q_x = inst.aggregate(party);
  const double p_own = 0.5 + (own - other).dot(inst.q()) / 8.0;
  return p_own * own.dot(q_x) + (1.0 - p_own) * other.dot(q_x);
}

Vector grad_payoff(const Profile& z, const GameInstance& inst, Party party) {
  const Vector diff = z.of(party) - z.of(opponent(party));
  const Vector& q_x = inst.aggregate(party);
  return 0.5 * q_x + (diff.dot(inst.q()) / 8.0) * q_x + (diff.dot(q_x) / 8.0) * inst.q();
}

double hessian_entry(const GameInstance& inst, Party party, int i, int j) {
  if (i < 0 || j < 0 || i >= inst.k() || j >= inst.k()) {
    throw ValidationError("hessian index (" + std::to_string(i) + ", " + std::to_string(j) +
                          ") out of range for k = " + std::to_string(inst.k()));
  }
  const Vector& q_x = inst.aggregate(party);
  return (inst.q()[i] * q_x[j] + inst.q()[j] * q_x[i]) / 8.0;
}

EgoisticCheck is_egoistic(const Profile& z, const GameInstance& inst) {
  EgoisticCheck check;
  check.slack_a = z.a.dot(inst.q_a()) - z.b.dot(inst.q_a());
  check.slack_b = z.b.dot(inst.q_b()) - z.a.dot(inst.q_b());
  check.holds = check.slack_a >= -tol::kGeometric && check.slack_b >= -tol::kGeometric;
  return check;
}

bool is_consensus_reachable(const GameInstance& inst) {
  return inst.q_a().dot(inst.q()) >= 0.0 && inst.q_b().dot(inst.q()) >= 0.0;
}

PlaneBasis plane_basis(const GameInstance& inst, Party anchor) {
  if (inst.degenerate_for(anchor)) {
    throw ValidationError("plane basis undefined: zero aggregate for party " +
                          std::string(to_string(anchor)));
  }
  return compute_basis(inst.aggregate(anchor), inst.q());
}

Vector from_polar(const PolarPolicy& pp, const GameInstance& inst) {
  if (!(pp.r >= 0.0 && pp.r <= 1.0)) {
    throw ValidationError("polar radius " + std::to_string(pp.r) + " outside [0, 1]");
  }
  if (inst.k() == 1 && !inst.degenerate_for(pp.party) && pp.theta == 0.0) {
    return pp.r * inst.aggregate(pp.party) / inst.norm(pp.party);
  }
  const PlaneBasis& basis = inst.basis(pp.party);
  Vector z = pp.r * (std::cos(pp.theta) * basis.b1 + std::sin(pp.theta) * basis.b2);
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double excess = std::abs(z[i]) - 1.0;
    if (excess <= 0.0) continue;
    if (excess > tol::kGeometric) throw std::logic_error("from_polar left the box: basis corrupted");
    z[i] = std::copysign(1.0, z[i]);
  }
  return z;
}

PolarDecomposition to_polar(const Vector& z, const GameInstance& inst, Party party) {
  const PlaneBasis& basis = inst.basis(party);
  const double c1 = z.dot(basis.b1);
  const double c2 = z.dot(basis.b2);
  PolarDecomposition out;
  out.polar.party = party;
  out.polar.r = std::hypot(c1, c2);
  out.residual = (z - c1 * basis.b1 - c2 * basis.b2).norm();
  if (out.polar.r == 0.0) {
    out.zero = true;
    out.polar.theta = 0.0;
  } else {
    out.polar.theta = std::atan2(c2, c1);
  }
  const double rho = inst.rho(party);
  out.polar.canonical = out.polar.theta >= -tol::kAngle && out.polar.theta <= rho + tol::kAngle;
  return out;
}

PolarPayoffs payoff_polar(double r_a, double theta_a, double r_b, double theta_b,
                          const GameInstance& inst) {
  const double rho_a = inst.rho_a();
  const double rho_b = inst.rho_b();
  const double nq = inst.norm_q();
  PolarPayoffs out;
  out.p_a = 0.5 + nq * (r_a * std::cos(rho_a - theta_a) - r_b * std::cos(rho_b - theta_b)) / 8.0;
  // z_B sits at angle rho_A + rho_B - theta_B from Q_A, and symmetrically.
  out.r_a = inst.norm_q_a() * (out.p_a * r_a * std::cos(theta_a) +
                               (1.0 - out.p_a) * r_b * std::cos(rho_a + rho_b - theta_b));
  out.r_b = inst.norm_q_b() * ((1.0 - out.p_a) * r_b * std::cos(theta_b) +
                               out.p_a * r_a * std::cos(rho_a + rho_b - theta_a));
  return out;
}

}  // namespace policygame
