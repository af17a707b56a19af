#include "policygame/electorate.hpp"

#include "policygame/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace policygame {

std::string_view to_string(Criterion c) {
  switch (c) {
    case Criterion::hardmax: return "hardmax";
    case Criterion::linear: return "linear";
    case Criterion::softmax: return "softmax";
  }
  return "unknown";
}

std::string_view to_string(Distribution d) {
  return d == Distribution::uniform ? "uniform" : "gaussian";
}

Criterion parse_criterion(std::string_view s) {
  if (s == "hardmax") return Criterion::hardmax;
  if (s == "linear") return Criterion::linear;
  if (s == "softmax") return Criterion::softmax;
  throw ValidationError("criterion must be hardmax, linear or softmax, got '" + std::string(s) + "'");
}

Distribution parse_distribution(std::string_view s) {
  if (s == "uniform") return Distribution::uniform;
  if (s == "gaussian") return Distribution::gaussian;
  throw ValidationError("distribution must be uniform or gaussian, got '" + std::string(s) + "'");
}

void SimConfig::validate() const {
  if (voters < 1) throw ValidationError("voters must be >= 1");
  if (k < 1) throw ValidationError("dimension k must be >= 1");
  if (trials < 1) throw ValidationError("trials must be >= 1");
  if (!(xi > 0.0) || !std::isfinite(xi)) throw ValidationError("xi must be > 0");
  if (!(mu_lo <= mu_hi)) throw ValidationError("mu range is empty");
  if (!(spread >= 0.0)) throw ValidationError("spread must be >= 0");
  if (fixed_pair) {
    if (fixed_pair->a.size() != k || fixed_pair->b.size() != k) {
      throw ValidationError("fixed policy pair must have dimension k = " + std::to_string(k));
    }
    if (!in_strategy_set(fixed_pair->a) || !in_strategy_set(fixed_pair->b)) {
      throw ValidationError("fixed policy pair must lie in S");
    }
  }
}

double vote_probability_a(double u_a, double u_b, Criterion c, double xi) {
  switch (c) {
    case Criterion::hardmax:
      return u_a > u_b ? 1.0 : (u_a < u_b ? 0.0 : 0.5);
    case Criterion::linear:
      return std::clamp(0.5 + (u_a - u_b) / (2.0 * xi), 0.0, 1.0);
    case Criterion::softmax:
      // e^{u_a/xi} / (e^{u_a/xi} + e^{u_b/xi}) with the larger exponent factored out.
      return 1.0 / (1.0 + std::exp((u_b - u_a) / xi));
  }
  return 0.5;
}

Party cast_vote(double u_a, double u_b, Criterion c, double xi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return unit(rng) < vote_probability_a(u_a, u_b, c, xi) ? Party::A : Party::B;
}

Profile sample_policy_pair(int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  auto draw = [&] {
    Vector z(k);
    do {
      for (int i = 0; i < k; ++i) z[i] = box(rng);
    } while (z.norm() > 1.0);
    return z;
  };
  Profile pair;
  pair.a = draw();
  pair.b = draw();
  return pair;
}

namespace {

TrialRecord run_trial(const SimConfig& cfg, const PolicySampler& sampler, int trial) {
  std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(trial));
  std::uniform_real_distribution<double> mu_dist(cfg.mu_lo, cfg.mu_hi);
  const double mu = cfg.mu_lo == cfg.mu_hi ? cfg.mu_lo : mu_dist(rng);
  const Profile pair = cfg.fixed_pair ? *cfg.fixed_pair
                       : sampler      ? sampler(rng)
                                      : sample_policy_pair(cfg.k, rng);

  std::uniform_real_distribution<double> uniform(mu - cfg.spread, mu + cfg.spread);
  std::normal_distribution<double> gaussian(mu, cfg.spread);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  TrialRecord rec;
  Vector q(cfg.k);
  for (int v = 0; v < cfg.voters; ++v) {
    for (int i = 0; i < cfg.k; ++i) {
      if (cfg.spread == 0.0) {
        q[i] = mu;
      } else {
        q[i] = cfg.distribution == Distribution::uniform ? uniform(rng) : gaussian(rng);
      }
    }
    const double u_a = q.dot(pair.a);
    const double u_b = q.dot(pair.b);
    rec.delta += u_a - u_b;
    if (cast_vote(u_a, u_b, cfg.criterion, cfg.xi, rng) == Party::A) {
      ++rec.votes_a;
    } else {
      ++rec.votes_b;
    }
  }
  if (rec.votes_a != rec.votes_b) {
    rec.winner = rec.votes_a > rec.votes_b ? Party::A : Party::B;
  } else {
    rec.winner = unit(rng) < 0.5 ? Party::A : Party::B;
  }
  return rec;
}

std::vector<double> average_ranks(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return x[i] < x[j]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t m = i; m <= j; ++m) ranks[order[m]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

std::vector<TrialRecord> run_trials(const SimConfig& cfg, const PolicySampler& sampler, Exec exec) {
  cfg.validate();
  std::vector<TrialRecord> records(static_cast<std::size_t>(cfg.trials));
  if (exec == Exec::serial) {
    for (int t = 0; t < cfg.trials; ++t) records[static_cast<std::size_t>(t)] = run_trial(cfg, sampler, t);
    return records;
  }
#pragma omp parallel for schedule(static)
  for (int t = 0; t < cfg.trials; ++t) records[static_cast<std::size_t>(t)] = run_trial(cfg, sampler, t);
  return records;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ValidationError("spearman: length mismatch");
  if (x.size() < 2) return 0.0;
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double goodman_kruskal_gamma(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ValidationError("gamma: length mismatch");
  long concordant = 0, discordant = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double s = (x[j] - x[i]) * (y[j] - y[i]);
      if (s > 0.0) ++concordant;
      if (s < 0.0) ++discordant;
    }
  }
  if (concordant + discordant == 0) return 0.0;
  return static_cast<double>(concordant - discordant) / static_cast<double>(concordant + discordant);
}

IsotonicityReport isotonicity_report(std::vector<TrialRecord> records, int bins) {
  if (records.size() < 100) {
    throw ValidationError("isotonicity report needs >= 100 records, got " +
                          std::to_string(records.size()));
  }
  if (bins < 2 || static_cast<std::size_t>(bins) > records.size()) {
    throw ValidationError("bin count must lie in [2, number of records]");
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const TrialRecord& a, const TrialRecord& b) { return a.delta < b.delta; });
  IsotonicityReport report;
  const std::size_t n = records.size();
  std::vector<double> index, freq;
  for (int b = 0; b < bins; ++b) {
    const std::size_t lo = n * static_cast<std::size_t>(b) / static_cast<std::size_t>(bins);
    const std::size_t hi = n * static_cast<std::size_t>(b + 1) / static_cast<std::size_t>(bins);
    CurveBin bin;
    bin.index = b;
    bin.count = static_cast<int>(hi - lo);
    bin.delta_lo = records[lo].delta;
    bin.delta_hi = records[hi - 1].delta;
    int wins = 0;
    for (std::size_t i = lo; i < hi; ++i) wins += records[i].winner == Party::A ? 1 : 0;
    bin.win_freq = static_cast<double>(wins) / static_cast<double>(bin.count);
    index.push_back(b);
    freq.push_back(bin.win_freq);
    report.bins.push_back(bin);
  }
  report.score = goodman_kruskal_gamma(index, freq);
  report.spearman = spearman(index, freq);
  return report;
}

}  // namespace policygame
