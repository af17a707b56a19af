#include "policygame/cli.hpp"

#include "policygame/closed_form.hpp"
#include "policygame/dynamics.hpp"
#include "policygame/electorate.hpp"
#include "policygame/error.hpp"
#include "policygame/grid_solver.hpp"
#include "policygame/io.hpp"
#include "policygame/monotonicity.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace policygame {

namespace {

struct Globals {
  std::uint64_t seed = 42;
  std::string out;
  int threads = 0;
  bool timing = false;
  bool rescale = false;
};

struct InstanceSource {
  std::string instance;
  std::string voters_a;
  std::string voters_b;
  std::vector<double> q_a;
  std::vector<double> q_b;
  int k = 3;
};

void add_instance_options(CLI::App* sub, InstanceSource& src, int default_k) {
  src.k = default_k;
  sub->add_option("--instance", src.instance, "instance JSON file, or 'random'");
  sub->add_option("--voters-a", src.voters_a, "voter CSV for party A");
  sub->add_option("--voters-b", src.voters_b, "voter CSV for party B");
  sub->add_option("--q-a", src.q_a, "aggregate Q_A, comma separated")->delimiter(',');
  sub->add_option("--q-b", src.q_b, "aggregate Q_B, comma separated")->delimiter(',');
  sub->add_option("--k", src.k, "dimension of random instances")->capture_default_str();
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

GameInstance load_instance(const InstanceSource& src, const Globals& g) {
  const bool from_file = !src.instance.empty();
  const bool from_voters = !src.voters_a.empty() || !src.voters_b.empty();
  const bool inline_q = !src.q_a.empty() || !src.q_b.empty();
  if (int(from_file) + int(from_voters) + int(inline_q) != 1) {
    throw ValidationError("give exactly one instance source: --instance, --voters-a/--voters-b, or --q-a/--q-b");
  }
  if (from_voters) {
    if (src.voters_a.empty() || src.voters_b.empty()) {
      throw ValidationError("--voters-a and --voters-b must be given together");
    }
    return aggregate(read_preferences_csv(src.voters_a, Party::A),
                     read_preferences_csv(src.voters_b, Party::B), g.rescale);
  }
  if (inline_q) {
    if (src.q_a.empty() || src.q_b.empty()) throw ValidationError("--q-a and --q-b must be given together");
    return GameInstance::from_aggregates(to_vector(src.q_a), to_vector(src.q_b), g.rescale);
  }
  if (src.instance == "random") return sample_instances(1, src.k, g.seed).front();
  auto all = instances_from_json(read_json_file(src.instance), g.rescale);
  if (all.size() != 1) {
    throw ValidationError("--instance file holds " + std::to_string(all.size()) +
                          " instances; this command takes one");
  }
  return std::move(all.front());
}

void emit(const std::string& content, const std::string& summary, const Globals& g,
          std::ostream& out, std::ostream& err) {
  if (g.out.empty()) {
    out << content;
    err << summary << '\n';
  } else {
    write_file_atomic(g.out, content);
    out << summary << " -> " << g.out << '\n';
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point since, const Globals& g) {
  return g.timing ? std::chrono::duration<double>(Clock::now() - since).count() : 0.0;
}

// solve-1d ----------------------------------------------------------------

struct Solve1dArgs {
  double qa = 0.0;
  double qb = 0.0;
  bool relaxed = false;
  int grid = 2001;
};

void run_solve_1d(const Solve1dArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  const ScalarInstance inst{a.qa, a.qb, a.relaxed};
  const Solution1d sol = solve_1d(inst);
  const double gain = verify_1d(sol.z_a, sol.z_b, inst, a.grid);
  json j{{"z_a", sol.z_a},
         {"z_b", sol.z_b},
         {"case", sol.case_tag()},
         {"verified_gain", gain},
         {"grid_points", a.grid},
         {"schema_version", kSchemaVersion}};
  std::ostringstream s;
  s << "solve-1d: z_a=" << format_double(sol.z_a) << " z_b=" << format_double(sol.z_b) << " ("
    << sol.case_tag() << "), grid gain " << format_double(gain);
  emit(dump(j), s.str(), g, out, err);
}

// gba ---------------------------------------------------------------------

struct GbaArgs {
  InstanceSource src;
  double epsilon = 0.1;
  bool exhaustive = false;
  std::optional<long> n;
};

void run_gba(const GbaArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  const GameInstance inst = load_instance(a.src, g);
  GbaOptions opts;
  opts.epsilon = a.epsilon;
  opts.n_override = a.n;
  opts.best_response = a.exhaustive ? BestResponse::exhaustive : BestResponse::ternary;
  const auto started = Clock::now();
  const GbaResult r = gba_psne(inst, opts);
  const double seconds = elapsed(started, g);
  json j{{"z_a", vector_to_json(r.profile.a)},
         {"z_b", vector_to_json(r.profile.b)},
         {"epsilon", r.spec.epsilon},
         {"epsilon_hat", r.spec.epsilon_hat},
         {"n", r.spec.n},
         {"h", r.spec.h},
         {"lipschitz", r.spec.lipschitz},
         {"certified", r.certified},
         {"max_gain", r.max_gain},
         {"payoff_evals", r.payoff_evals},
         {"best_response", a.exhaustive ? "exhaustive" : "ternary"},
         {"seconds", seconds},
         {"instance", to_json(inst)},
         {"schema_version", kSchemaVersion}};
  std::ostringstream s;
  s << "gba: " << (r.certified ? "certified" : "NOT certified") << " epsilon=" << a.epsilon
    << " n=" << r.spec.n << " grid gain " << format_double(r.max_gain) << ", "
    << r.payoff_evals << " payoff evaluations";
  emit(dump(j), s.str(), g, out, err);
}

// ascend ------------------------------------------------------------------

struct AscendArgs {
  std::string instances = "random:20";
  int k = 2;
  int inits = 20;
  double step_exponent = 0.75;
  double delta = 1e-4;
  int max_iter = 10000;
  int window = 50;
  std::string method = "vanilla";
  double spacing = 0.1;
  bool full_span = false;
  double approx_epsilon = 0.05;
};

std::vector<GameInstance> load_instances(const AscendArgs& a, const Globals& g) {
  const std::string prefix = "random:";
  if (a.instances.rfind(prefix, 0) == 0) {
    int count = 0;
    try {
      std::size_t used = 0;
      count = std::stoi(a.instances.substr(prefix.size()), &used);
      if (used != a.instances.size() - prefix.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ValidationError("--instances: expected random:<count>, got '" + a.instances + "'");
    }
    return sample_instances(count, a.k, g.seed);
  }
  return instances_from_json(read_json_file(a.instances), g.rescale);
}

void run_ascend(const AscendArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  BatchSpec spec;
  spec.instances = load_instances(a, g);
  spec.inits_per_instance = a.inits;
  spec.approx_epsilon = a.approx_epsilon;
  AscentConfig& cfg = spec.config;
  cfg.step_exponent = a.step_exponent;
  cfg.delta = a.delta;
  cfg.max_iterations = a.max_iter;
  cfg.window = a.window;
  cfg.seed = g.seed;
  cfg.certify.spacing = a.spacing;
  cfg.certify.full_span = a.full_span;
  if (a.method == "vanilla") {
    cfg.method = Method::vanilla;
  } else if (a.method == "extragradient") {
    cfg.method = Method::extragradient;
  } else {
    throw ValidationError("--method must be vanilla or extragradient, got '" + a.method + "'");
  }
  if (!cfg.robbins_monro()) {
    err << "warning: step exponent " << cfg.step_exponent
        << " is outside (0.5, 1]; the step sizes are not square-summable\n";
  }

  const auto rows = run_batch(spec);
  std::string csv =
      "instance_id,run_id,consensus_reachable,iterations,kind,certified_gain,is_approx_psne,"
      "seconds,schema_version\n";
  int approx = 0;
  int converged = 0;
  for (const auto& r : rows) {
    csv += std::to_string(r.instance_id) + "," + std::to_string(r.run_id) + "," +
           (r.consensus_reachable ? "true" : "false") + "," +
           std::to_string(r.report.iterations) + "," + std::string(to_string(r.report.kind)) +
           "," + format_double(r.report.certified_gain) + "," +
           (r.is_approx_psne ? "true" : "false") + "," +
           format_double(g.timing ? r.report.seconds : 0.0) + "," +
           std::to_string(kSchemaVersion) + "\n";
    approx += r.is_approx_psne ? 1 : 0;
    converged += r.report.kind != ConvergenceKind::max_iterations ? 1 : 0;
  }
  std::ostringstream s;
  s << "ascend: " << rows.size() << " runs, " << converged << " converged, " << approx
    << " certified within " << a.approx_epsilon;
  emit(csv, s.str(), g, out, err);
}

// monotonicity ------------------------------------------------------------

struct MonotonicityArgs {
  double c1 = 0.6;
  double c2 = 0.6;
  double norm_q = 1.2;
  double norm_q_a = 1.0;
  double norm_q_b = 1.0;
  std::int64_t pairs = 100000;
  std::string space = "cosine";
};

json point_json(const Point2& p) { return json::array({p[0], p[1]}); }

void run_monotonicity(const MonotonicityArgs& a, const Globals& g, std::ostream& out,
                      std::ostream& err) {
  ProbeSpace space = ProbeSpace::cosine;
  if (a.space == "angle") {
    space = ProbeSpace::angle;
  } else if (a.space != "cosine") {
    throw ValidationError("--space must be cosine or angle, got '" + a.space + "'");
  }
  const auto params = ReducedParams::make(a.norm_q_a, a.norm_q_b, a.norm_q, a.c1, a.c2);
  const ProbeResult probe = monotonicity_probe(params, a.pairs, g.seed, space);

  // The reference pair evaluated under the requested parameters.
  const auto ref = known_counterexample();
  const double ref_s = monotonicity_gap(ref.z1, ref.z2, params, ProbeSpace::cosine);
  const Point2 t1{std::acos(ref.z1[0]), std::acos(ref.z1[1])};
  const Point2 t2{std::acos(ref.z2[0]), std::acos(ref.z2[1])};
  const double ref_s_angle = monotonicity_gap(t1, t2, params, ProbeSpace::angle);

  json j{{"violation_fraction", probe.violation_fraction},
         {"violations", probe.violations},
         {"pairs", probe.pairs},
         {"space", a.space},
         {"witness_u", point_json(probe.witness_u)},
         {"witness_v", point_json(probe.witness_v)},
         {"s", probe.s},
         {"paper_counterexample_s", ref_s},
         {"counterexample",
          {{"z1", point_json(ref.z1)},
           {"z2", point_json(ref.z2)},
           {"f_z1", point_json(pseudo_gradient(ref.z1[0], ref.z1[1], params))},
           {"f_z2", point_json(pseudo_gradient(ref.z2[0], ref.z2[1], params))},
           {"s_cosine", ref_s},
           {"s_angle", ref_s_angle}}},
         {"params",
          {{"norm_q_a", params.norm_q_a},
           {"norm_q_b", params.norm_q_b},
           {"norm_q", params.norm_q},
           {"c1", params.c1},
           {"c2", params.c2},
           {"k", params.k},
           {"l", params.l}}},
         {"schema_version", kSchemaVersion}};
  std::ostringstream s;
  s << "monotonicity: " << probe.violations << "/" << probe.pairs << " pairs violate, max s "
    << format_double(probe.s);
  emit(dump(j), s.str(), g, out, err);
}

// simulate-vote -----------------------------------------------------------

struct VoteArgs {
  std::string criterion = "hardmax";
  std::string distribution = "uniform";
  SimConfig cfg;
  int bins = 20;
};

void run_simulate_vote(VoteArgs a, const Globals& g, std::ostream& out, std::ostream& err) {
  a.cfg.criterion = parse_criterion(a.criterion);
  a.cfg.distribution = parse_distribution(a.distribution);
  a.cfg.seed = g.seed;
  if (a.cfg.trials < 100) throw ValidationError("--trials must be >= 100 to build the curve");
  const auto report = isotonicity_report(run_trials(a.cfg), a.bins);
  std::string csv = "bin_index,delta_lo,delta_hi,win_freq,count,schema_version\n";
  for (const auto& b : report.bins) {
    csv += std::to_string(b.index) + "," + format_double(b.delta_lo) + "," +
           format_double(b.delta_hi) + "," + format_double(b.win_freq) + "," +
           std::to_string(b.count) + "," + std::to_string(kSchemaVersion) + "\n";
  }
  std::ostringstream s;
  s << "simulate-vote: " << a.criterion << "/" << a.distribution << ", " << a.cfg.trials
    << " trials, monotonicity score " << format_double(report.score);
  emit(csv, s.str(), g, out, err);
}

// certify -----------------------------------------------------------------

struct CertifyArgs {
  InstanceSource src;
  std::vector<double> z_a;
  std::vector<double> z_b;
  double spacing = 0.1;
  bool full_span = false;
};

void run_certify(const CertifyArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  const GameInstance inst = load_instance(a.src, g);
  Profile z{to_vector(a.z_a), to_vector(a.z_b)};
  if (z.a.size() != inst.k() || z.b.size() != inst.k()) {
    throw ValidationError("--z-a and --z-b must have k = " + std::to_string(inst.k()) + " entries");
  }
  if (!in_strategy_set(z.a) || !in_strategy_set(z.b)) {
    throw ValidationError("--z-a and --z-b must lie in S");
  }
  const GainReport r = certify(z, inst, {a.spacing, a.full_span});
  json j{{"gain_a", r.gain_a},
         {"gain_b", r.gain_b},
         {"max_gain", r.max_gain()},
         {"points_a", r.points_a},
         {"points_b", r.points_b},
         {"spacing", a.spacing},
         {"full_span", a.full_span},
         {"instance", to_json(inst)},
         {"schema_version", kSchemaVersion}};
  std::ostringstream s;
  s << "certify: max unilateral grid gain " << format_double(r.max_gain());
  emit(dump(j), s.str(), g, out, err);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-party policy competition: equilibria, dynamics and simulations"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "base RNG seed")->capture_default_str();
  app.add_option("--out", g.out, "output file (written atomically); stdout when omitted");
  app.add_option("--threads", g.threads, "OpenMP threads (0 = runtime default)");
  app.add_flag("--timing", g.timing, "record wall-clock seconds (outputs stop being reproducible)");
  app.add_flag("--rescale", g.rescale, "divide oversized aggregates by the larger norm");

  Solve1dArgs s1d;
  auto* solve = app.add_subcommand("solve-1d", "closed-form equilibrium for k = 1");
  solve->add_option("--qa", s1d.qa, "scalar Q_A")->required();
  solve->add_option("--qb", s1d.qb, "scalar Q_B")->required();
  solve->add_flag("--relaxed", s1d.relaxed, "allow |Q_X| > 1");
  solve->add_option("--grid", s1d.grid, "verification grid points")->capture_default_str();

  GbaArgs gba;
  auto* gba_cmd = app.add_subcommand("gba", "grid search for an epsilon-PSNE");
  add_instance_options(gba_cmd, gba.src, 3);
  gba_cmd->add_option("--epsilon", gba.epsilon, "target epsilon")->capture_default_str();
  gba_cmd->add_flag("--exhaustive", gba.exhaustive, "linear-scan best responses");
  gba_cmd->add_option("--n", gba.n, "grid count (at least the required minimum)");

  AscendArgs asc;
  auto* asc_cmd = app.add_subcommand("ascend", "batch projected gradient ascent");
  asc_cmd->add_option("--instances", asc.instances, "instance JSON file or random:<count>")
      ->capture_default_str();
  asc_cmd->add_option("--k", asc.k, "dimension of random instances")->capture_default_str();
  asc_cmd->add_option("--inits-per-instance", asc.inits)->capture_default_str();
  asc_cmd->add_option("--step-exponent", asc.step_exponent, "a in eta_t = t^-a")
      ->capture_default_str();
  asc_cmd->add_option("--delta", asc.delta, "convergence tolerance")->capture_default_str();
  asc_cmd->add_option("--max-iter", asc.max_iter)->capture_default_str();
  asc_cmd->add_option("--window", asc.window, "iterates kept for cycle detection")
      ->capture_default_str();
  asc_cmd->add_option("--method", asc.method, "vanilla or extragradient")->capture_default_str();
  asc_cmd->add_option("--spacing", asc.spacing, "certification grid spacing")
      ->capture_default_str();
  asc_cmd->add_flag("--full-span", asc.full_span, "certify over the whole Q_A..Q_B sector");
  asc_cmd->add_option("--approx-epsilon", asc.approx_epsilon)->capture_default_str();

  MonotonicityArgs mono;
  auto* mono_cmd = app.add_subcommand("monotonicity", "probe the pseudo-gradient for monotonicity");
  mono_cmd->add_option("--c1", mono.c1, "cos rho_A")->capture_default_str();
  mono_cmd->add_option("--c2", mono.c2, "cos rho_B")->capture_default_str();
  mono_cmd->add_option("--norm-q", mono.norm_q, "||Q||")->capture_default_str();
  mono_cmd->add_option("--norm-qa", mono.norm_q_a, "||Q_A||")->capture_default_str();
  mono_cmd->add_option("--norm-qb", mono.norm_q_b, "||Q_B||")->capture_default_str();
  mono_cmd->add_option("--pairs", mono.pairs)->capture_default_str();
  mono_cmd->add_option("--space", mono.space, "cosine or angle")->capture_default_str();

  VoteArgs vote;
  auto* vote_cmd = app.add_subcommand("simulate-vote", "Monte-Carlo elections and isotonicity curve");
  vote_cmd->add_option("--criterion", vote.criterion, "hardmax, linear or softmax")
      ->capture_default_str();
  vote_cmd->add_option("--distribution", vote.distribution, "uniform or gaussian")
      ->capture_default_str();
  vote_cmd->add_option("--voters", vote.cfg.voters)->capture_default_str();
  vote_cmd->add_option("--trials", vote.cfg.trials)->capture_default_str();
  vote_cmd->add_option("--xi", vote.cfg.xi)->capture_default_str();
  vote_cmd->add_option("--k", vote.cfg.k)->capture_default_str();
  vote_cmd->add_option("--mu-lo", vote.cfg.mu_lo)->capture_default_str();
  vote_cmd->add_option("--mu-hi", vote.cfg.mu_hi)->capture_default_str();
  vote_cmd->add_option("--spread", vote.cfg.spread, "uniform half-width or Gaussian sigma")
      ->capture_default_str();
  vote_cmd->add_option("--bins", vote.bins)->capture_default_str();

  CertifyArgs cert;
  auto* cert_cmd = app.add_subcommand("certify", "grid check of a profile's unilateral gains");
  add_instance_options(cert_cmd, cert.src, 3);
  cert_cmd->add_option("--z-a", cert.z_a, "policy of A, comma separated")->delimiter(',')->required();
  cert_cmd->add_option("--z-b", cert.z_b, "policy of B, comma separated")->delimiter(',')->required();
  cert_cmd->add_option("--spacing", cert.spacing)->capture_default_str();
  cert_cmd->add_flag("--full-span", cert.full_span, "deviations over the whole Q_A..Q_B sector");

  if (argc > 1 && argv[1][0] != '-') {
    bool known = false;
    for (const auto* sub : app.get_subcommands({})) known = known || sub->get_name() == argv[1];
    if (!known) {
      err << "error: unknown subcommand '" << argv[1] << "'\n";
      return 1;
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (g.threads < 0) throw ValidationError("--threads must be >= 0");
    set_thread_count(g.threads);
    if (*solve) run_solve_1d(s1d, g, out, err);
    else if (*gba_cmd) run_gba(gba, g, out, err);
    else if (*asc_cmd) run_ascend(asc, g, out, err);
    else if (*mono_cmd) run_monotonicity(mono, g, out, err);
    else if (*vote_cmd) run_simulate_vote(vote, g, out, err);
    else if (*cert_cmd) run_certify(cert, g, out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace policygame
