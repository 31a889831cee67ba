// phieq: generate, reduce, solve, verify, and probe constrained-equilibrium
// instances from the command line. Every command prints a short fixed-width
// summary followed by a machine-readable JSON block that includes the run
// manifest, and exits with: 0 verdict true, 1 verdict false, 2 promise
// violation, 3 numerical or solver failure, 4 usage or I/O error.

#include <chrono>
#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "phieq/equilibrium.hpp"
#include "phieq/errors.hpp"
#include "phieq/game_ops.hpp"
#include "phieq/json_io.hpp"
#include "phieq/polymatrix.hpp"
#include "phieq/qvi.hpp"
#include "phieq/reduction.hpp"

using nlohmann::ordered_json;
using namespace phieq;

namespace {

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitPromise = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitUsage = 4;

struct Manifest {
  ordered_json j;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  explicit Manifest(const std::string& command) {
    j["command"] = command;
    j["inputs"] = ordered_json::object();
    j["outputs"] = ordered_json::object();
    j["tolerances"] = ordered_json::object();
    j["verdicts"] = ordered_json::object();
  }
  void finish() {
    j["timing_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - started)
            .count();
  }
};

void emit(Manifest& manifest, const std::string& manifest_path) {
  manifest.finish();
  std::printf("%s\n", manifest.j.dump(2).c_str());
  if (!manifest_path.empty())
    write_text_file(manifest_path, manifest.j.dump(2) + "\n");
}

// Either a bare game or a reduced instance; instances carry their own
// deviation set and default (eps, nu).
struct GameInput {
  FactoredGame game;
  DeviationPolytope deviations;
  std::optional<double> eps;
  std::optional<double> nu;
  std::optional<ConstrainedInstance> instance;
};

GameInput load_game_input(const std::string& path, const std::string& phi_tag) {
  const std::string text = read_text_file(path);
  GameInput input;
  if (looks_like_instance(text)) {
    ConstrainedInstance inst = instance_from_json(text);
    input.game = inst.game;
    input.deviations = inst.deviations;
    input.eps = inst.eps_prime;
    input.nu = inst.nu;
    input.instance = std::move(inst);
  } else {
    input.game = game_from_json(text);
    input.deviations = phi_tag == "ce" ? DeviationPolytope::ce(input.game.n_actions)
                                       : DeviationPolytope::cce(input.game.n_actions);
  }
  return input;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    default:
      return "promise_violation";
  }
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return kExitTrue;
    case Verdict::Fail:
      return kExitFalse;
    default:
      return kExitPromise;
  }
}

void print_report_table(const EquilibriumReport& report) {
  std::printf("%-8s %12s %12s %12s %12s %8s\n", "player", "utility", "best-safe",
              "regret", "cost-slack", "promise");
  for (size_t i = 0; i < report.players.size(); ++i) {
    const PlayerReport& pr = report.players[i];
    double worst_slack = 0.0;
    for (double s : pr.cost_slacks) worst_slack = std::max(worst_slack, s);
    std::printf("%-8zu %12.6f %12.6f %12.6f %12.6f %8s\n", i, pr.expected_utility,
                pr.best_safe_value, pr.regret, worst_slack,
                pr.promise_violated ? "violated" : "ok");
  }
  std::printf("verdict: %s (max regret %.3e vs eps %.3e, max cost %.3e vs nu %.3e)\n",
              verdict_name(report.verdict), report.max_regret, report.eps,
              report.max_cost_violation, report.nu);
}

std::string trace_csv(const QviSolution& sol) {
  std::string csv = "iteration,gap,certified\n";
  for (const QviTracePoint& t : sol.trace)
    csv += std::to_string(t.iteration) + "," + std::to_string(t.gap) + "," +
           (t.certified ? "1" : "0") + "\n";
  return csv;
}

ordered_json report_json_obj(const EquilibriumReport& report) {
  return ordered_json::parse(report_to_json(report, -1));
}

int cmd_generate(int n, int k, int deg, std::uint64_t seed, const std::string& out,
                 const std::string& manifest_path) {
  Manifest manifest("generate");
  manifest.j["inputs"] = {{"n", n}, {"k", k}, {"deg", deg}, {"seed", seed}};
  const PolymatrixGame g = random_instance(n, k, deg, seed);
  const std::string text = polymatrix_to_json(g);
  write_text_file(out, text);
  manifest.j["outputs"]["out"] = out;
  manifest.j["verdicts"]["generated"] = true;
  std::printf("generated polymatrix game: %d players, %d actions, %zu directed edges, degree %d\n",
              g.n_players, g.k, g.edges.size(), g.degree());
  std::printf("wrote %s\n", out.c_str());
  emit(manifest, manifest_path);
  return kExitTrue;
}

int cmd_reduce(const std::string& in, double eps, const std::string& out,
               const std::string& manifest_path) {
  Manifest manifest("reduce");
  manifest.j["inputs"] = {{"in", in}, {"eps", eps}};
  const PolymatrixGame g = polymatrix_from_json(read_text_file(in));
  const ConstrainedInstance inst = reduce(g, eps);
  write_text_file(out, instance_to_json(inst));
  manifest.j["outputs"]["out"] = out;
  manifest.j["verdicts"]["eps_prime"] = inst.eps_prime;
  manifest.j["verdicts"]["nu"] = inst.nu;
  std::printf("reduced %d-player game to %d players with %d costs per left player\n",
              g.n_players, inst.game.n_players, 2 * g.k);
  std::printf("eps_prime = %.9g, nu = %.9g\n", inst.eps_prime, inst.nu);
  std::printf("wrote %s\n", out.c_str());
  emit(manifest, manifest_path);
  return kExitTrue;
}

int cmd_verify(const std::string& game_path, const std::string& strategy_path,
               std::optional<double> eps, std::optional<double> nu, double tol,
               const std::string& phi_tag, const std::string& out,
               const std::string& manifest_path) {
  Manifest manifest("verify");
  manifest.j["inputs"] = {{"game", game_path}, {"strategy", strategy_path}, {"phi", phi_tag}};
  const GameInput input = load_game_input(game_path, phi_tag);
  const double eps_used = eps ? *eps : input.eps.value_or(-1.0);
  const double nu_used = nu ? *nu : input.nu.value_or(-1.0);
  if (eps_used < 0.0 || nu_used < 0.0)
    throw CLI::ValidationError("--eps and --nu are required for bare game inputs");
  manifest.j["inputs"]["eps"] = eps_used;
  manifest.j["inputs"]["nu"] = nu_used;
  manifest.j["tolerances"]["tol"] = tol;

  const MixtureStrategy z = mixture_from_json(read_text_file(strategy_path));
  const EquilibriumReport report =
      verify_constrained_equilibrium(input.game, z, input.deviations, eps_used, nu_used, tol);
  print_report_table(report);
  if (!out.empty()) {
    write_text_file(out, report_to_json(report));
    manifest.j["outputs"]["out"] = out;
  }
  manifest.j["verdicts"]["verdict"] = verdict_name(report.verdict);
  manifest.j["report"] = report_json_obj(report);
  emit(manifest, manifest_path);
  return verdict_exit(report.verdict);
}

QviConfig solver_config(double step, int max_iter, int restarts, std::uint64_t seed) {
  QviConfig config;
  config.step = step;
  config.max_iter = max_iter;
  config.restarts = restarts;
  config.seed = seed;
  return config;
}

int cmd_solve_qvi(const std::string& in, std::optional<double> eps,
                  std::optional<double> nu, double step, int max_iter, int restarts,
                  std::uint64_t seed, const std::string& out,
                  const std::string& strategy_out, const std::string& csv,
                  const std::string& manifest_path) {
  Manifest manifest("solve-qvi");
  manifest.j["inputs"] = {{"in", in}, {"seed", seed}, {"max_iter", max_iter},
                          {"restarts", restarts}, {"step", step}};
  const GameInput input = load_game_input(in, "cce");
  const double eps_used = eps ? *eps : input.eps.value_or(-1.0);
  const double nu_used = nu ? *nu : input.nu.value_or(-1.0);
  if (eps_used <= 0.0 || nu_used <= 0.0)
    throw CLI::ValidationError("--eps and --nu are required for bare game inputs");
  manifest.j["inputs"]["eps"] = eps_used;
  manifest.j["inputs"]["nu"] = nu_used;

  const QviInstance inst = build_qvi(input.game, eps_used, nu_used);
  manifest.j["tolerances"] = {{"eps_prime", inst.eps_prime},
                              {"nu_prime", inst.nu_prime},
                              {"lipschitz_g", inst.lipschitz_g},
                              {"lipschitz_l", inst.lipschitz_l}};
  const QviSolution sol = solve_qvi(inst, solver_config(step, max_iter, restarts, seed));
  std::printf("d = %d, eps' = %.6g, nu' = %.6g\n", inst.d, inst.eps_prime, inst.nu_prime);
  std::printf("certified = %s, gap = %.9g, method = %s, certification attempts = %zu\n",
              sol.certified ? "yes" : "no", sol.gap, sol.method.c_str(), sol.trace.size());
  if (!out.empty()) {
    // Self-contained artifact: the solution plus the instance it certifies.
    ordered_json jout = ordered_json::parse(qvi_solution_to_json(sol, -1));
    jout["instance"] = ordered_json::parse(qvi_instance_to_json(inst, -1));
    write_text_file(out, jout.dump(2) + "\n");
    manifest.j["outputs"]["out"] = out;
  }
  if (!csv.empty()) {
    write_text_file(csv, trace_csv(sol));
    manifest.j["outputs"]["csv"] = csv;
  }
  if (sol.certified && !strategy_out.empty()) {
    const ProductStrategy p = renormalize(inst, sol.z);
    write_text_file(strategy_out, mixture_to_json(MixtureStrategy::product(p)));
    manifest.j["outputs"]["strategy_out"] = strategy_out;
  }
  manifest.j["verdicts"]["certified"] = sol.certified;
  manifest.j["verdicts"]["gap"] = sol.gap;
  emit(manifest, manifest_path);
  return sol.certified ? kExitTrue : kExitNumerical;
}

int cmd_roundtrip(const std::string& in, double eps, double step, int max_iter,
                  int restarts, std::uint64_t seed, const std::string& out,
                  const std::string& csv, const std::string& manifest_path) {
  Manifest manifest("roundtrip");
  manifest.j["inputs"] = {{"in", in}, {"eps", eps}, {"seed", seed},
                          {"max_iter", max_iter}, {"restarts", restarts}, {"step", step}};
  const PolymatrixGame g = polymatrix_from_json(read_text_file(in));

  const ConstrainedInstance inst = reduce(g, eps);
  std::printf("%-24s eps' = %.6g, nu = %.6g, players = %d\n", "reduce:",
              inst.eps_prime, inst.nu, inst.game.n_players);
  manifest.j["verdicts"]["eps_prime"] = inst.eps_prime;
  manifest.j["verdicts"]["nu"] = inst.nu;

  const QviInstance qvi = build_qvi(inst.game, inst.eps_prime, inst.nu);
  const QviSolution sol = solve_qvi(qvi, solver_config(step, max_iter, restarts, seed));
  std::printf("%-24s certified = %s, gap = %.9g (threshold %.6g), method = %s\n",
              "solve-qvi:", sol.certified ? "yes" : "no", sol.gap, -qvi.eps_prime,
              sol.method.c_str());
  manifest.j["verdicts"]["qvi_certified"] = sol.certified;
  manifest.j["verdicts"]["qvi_gap"] = sol.gap;
  if (!csv.empty()) {
    write_text_file(csv, trace_csv(sol));
    manifest.j["outputs"]["csv"] = csv;
  }
  if (!sol.certified) {
    std::printf("solver did not converge; partial certificates above\n");
    emit(manifest, manifest_path);
    return kExitNumerical;
  }

  const ProductStrategy p = renormalize(qvi, sol.z);
  const MixtureStrategy zp = MixtureStrategy::product(p);
  const EquilibriumReport cert = verify_constrained_equilibrium(
      inst.game, zp, inst.deviations, inst.eps_prime, inst.nu);
  std::printf("%-24s %s (max regret %.3e, max cost %.3e)\n", "verify-constrained:",
              verdict_name(cert.verdict), cert.max_regret, cert.max_cost_violation);
  manifest.j["verdicts"]["constrained_verdict"] = verdict_name(cert.verdict);
  manifest.j["constrained_report"] = report_json_obj(cert);

  const StrategyProfile h = extract_nash(inst, zp);
  const NashReport nash = verify_eps_nash(g, h, eps + 1e-6);
  std::printf("%-24s %s (max regret %.6g vs eps %.6g)\n", "verify-eps-nash:",
              nash.ok ? "pass" : "fail", nash.max_regret, eps);
  manifest.j["verdicts"]["nash_ok"] = nash.ok;
  manifest.j["verdicts"]["nash_max_regret"] = nash.max_regret;

  if (!out.empty()) {
    ordered_json full = manifest.j;
    full["extracted_profile"] = h.x;
    write_text_file(out, full.dump(2) + "\n");
    manifest.j["outputs"]["out"] = out;
  }
  emit(manifest, manifest_path);
  if (cert.verdict == Verdict::PromiseViolation) return kExitPromise;
  return cert.verdict == Verdict::Pass && nash.ok ? kExitTrue : kExitFalse;
}

int cmd_probe_lipschitz(const std::string& in, int samples, std::uint64_t seed,
                        std::optional<double> eps, std::optional<double> nu,
                        const std::string& manifest_path) {
  Manifest manifest("probe-lipschitz");
  manifest.j["inputs"] = {{"in", in}, {"samples", samples}, {"seed", seed}};
  const GameInput input = load_game_input(in, "cce");
  const double eps_used = eps ? *eps : input.eps.value_or(0.5);
  const double nu_used = nu ? *nu : input.nu.value_or(0.5);
  const QviInstance inst = build_qvi(input.game, eps_used, nu_used);
  const LipschitzProbe probe = lipschitz_probe(inst, samples, seed);
  const bool ok = probe.empirical_g <= inst.lipschitz_g + 1e-9 &&
                  probe.empirical_l <= inst.lipschitz_l + 1e-9;
  std::printf("%-16s %14s %14s\n", "", "empirical", "declared");
  std::printf("%-16s %14.6f %14.6f\n", "F (G)", probe.empirical_g, inst.lipschitz_g);
  std::printf("%-16s %14.6f %14.6f\n", "corr (L)", probe.empirical_l, inst.lipschitz_l);
  manifest.j["verdicts"] = {{"within_declared", ok},
                            {"empirical_g", probe.empirical_g},
                            {"empirical_l", probe.empirical_l},
                            {"declared_g", inst.lipschitz_g},
                            {"declared_l", inst.lipschitz_l}};
  emit(manifest, manifest_path);
  return ok ? kExitTrue : kExitFalse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"constrained Phi-equilibria in generalized games: build, reduce, solve, verify"};
  app.require_subcommand(1);

  std::string in, out, game_path, strategy_path, strategy_out, csv, manifest_path;
  std::string phi_tag = "cce";
  int n = 2, k = 2, deg = 1, max_iter = 2000, restarts = 4, samples = 500;
  std::uint64_t seed = 0;
  double eps_flag = -1.0, nu_flag = -1.0, step = 0.0, tol = 1e-9;

  auto* generate = app.add_subcommand("generate", "write a random polymatrix game");
  generate->add_option("--n", n, "players")->required();
  generate->add_option("--k", k, "actions per player")->required();
  generate->add_option("--deg", deg, "max undirected degree")->required();
  generate->add_option("--seed", seed, "rng seed");
  generate->add_option("--out", out, "output file")->required();
  generate->add_option("--manifest", manifest_path, "manifest file");

  auto* reduce_cmd = app.add_subcommand("reduce", "compile a polymatrix game into a constrained instance");
  reduce_cmd->add_option("--in", in, "polymatrix json")->required();
  reduce_cmd->add_option("--eps", eps_flag, "target approximation of the source game")->required();
  reduce_cmd->add_option("--out", out, "output file")->required();
  reduce_cmd->add_option("--manifest", manifest_path, "manifest file");

  auto* verify = app.add_subcommand("verify", "certify a mixture as a constrained equilibrium");
  verify->add_option("--game", game_path, "game or instance json")->required();
  verify->add_option("--strategy", strategy_path, "mixture json")->required();
  verify->add_option("--eps", eps_flag, "equilibrium tolerance (defaults to the instance's)");
  verify->add_option("--nu", nu_flag, "safety tolerance (defaults to the instance's)");
  verify->add_option("--tol", tol, "numerical tolerance on the verdict");
  verify->add_option("--phi", phi_tag, "deviation set for bare games: ce or cce")
      ->check(CLI::IsMember({"ce", "cce"}));
  verify->add_option("--out", out, "report file");
  verify->add_option("--manifest", manifest_path, "manifest file");

  auto* solve = app.add_subcommand("solve-qvi", "solve the membership construction at desk scale");
  solve->add_option("--in", in, "game or instance json")->required();
  solve->add_option("--eps", eps_flag, "equilibrium target (defaults to the instance's)");
  solve->add_option("--nu", nu_flag, "safety target (defaults to the instance's)");
  solve->add_option("--step", step, "fixed-point step (0 = 1/(2G))");
  solve->add_option("--max-iter", max_iter, "iteration budget per restart");
  solve->add_option("--restarts", restarts, "number of starts");
  solve->add_option("--seed", seed, "rng seed");
  solve->add_option("--out", out, "solution file");
  solve->add_option("--strategy-out", strategy_out, "renormalized mixture file");
  solve->add_option("--csv", csv, "gap trace csv");
  solve->add_option("--manifest", manifest_path, "manifest file");

  auto* roundtrip = app.add_subcommand("roundtrip", "reduce, solve, and verify the full chain");
  roundtrip->add_option("--in", in, "polymatrix json")->required();
  roundtrip->add_option("--eps", eps_flag, "target approximation")->required();
  roundtrip->add_option("--step", step, "fixed-point step (0 = 1/(2G))");
  roundtrip->add_option("--max-iter", max_iter, "iteration budget per restart");
  roundtrip->add_option("--restarts", restarts, "number of starts");
  roundtrip->add_option("--seed", seed, "rng seed");
  roundtrip->add_option("--out", out, "report file");
  roundtrip->add_option("--csv", csv, "gap trace csv");
  roundtrip->add_option("--manifest", manifest_path, "manifest file");

  auto* probe = app.add_subcommand("probe-lipschitz", "compare empirical Lipschitz ratios to the declared bounds");
  probe->add_option("--in", in, "game or instance json")->required();
  probe->add_option("--samples", samples, "sample pairs");
  probe->add_option("--seed", seed, "rng seed");
  probe->add_option("--eps", eps_flag, "equilibrium target for bare games");
  probe->add_option("--nu", nu_flag, "safety target for bare games");
  probe->add_option("--manifest", manifest_path, "manifest file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitTrue : kExitUsage;
  }

  const auto opt = [](double v) {
    return v >= 0.0 ? std::optional<double>(v) : std::nullopt;
  };
  try {
    if (generate->parsed())
      return cmd_generate(n, k, deg, seed, out, manifest_path);
    if (reduce_cmd->parsed())
      return cmd_reduce(in, eps_flag, out, manifest_path);
    if (verify->parsed())
      return cmd_verify(game_path, strategy_path, opt(eps_flag), opt(nu_flag), tol,
                        phi_tag, out, manifest_path);
    if (solve->parsed())
      return cmd_solve_qvi(in, opt(eps_flag), opt(nu_flag), step, max_iter, restarts,
                           seed, out, strategy_out, csv, manifest_path);
    if (roundtrip->parsed())
      return cmd_roundtrip(in, eps_flag, step, max_iter, restarts, seed, out, csv,
                           manifest_path);
    if (probe->parsed())
      return cmd_probe_lipschitz(in, samples, seed, opt(eps_flag), opt(nu_flag),
                                 manifest_path);
  } catch (const PromiseViolation& e) {
    std::fprintf(stderr, "promise violation: %s\n", e.what());
    return kExitPromise;
  } catch (const SolverFailure& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
