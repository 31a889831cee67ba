#include "phieq/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace phieq {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

ordered_json matrix_to_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (int r = 0; r < m.rows; ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < m.cols; ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const ordered_json& j) {
  const int rows = static_cast<int>(j.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(j.at(0).size());
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const auto& row = j.at(r);
    if (static_cast<int>(row.size()) != cols)
      throw std::invalid_argument("json: ragged matrix");
    for (int c = 0; c < cols; ++c) m(r, c) = row.at(c).get<double>();
  }
  return m;
}

ordered_json game_to_json_obj(const FactoredGame& g) {
  ordered_json j;
  j["players"] = g.n_players;
  j["actions"] = g.n_actions;
  if (g.utility_lo != 0.0 || g.utility_hi != 1.0)
    j["range"] = {g.utility_lo, g.utility_hi};
  ordered_json utilities;
  if (g.has_dense()) {
    utilities["type"] = "dense";
    utilities["values"] = *g.dense_utilities;
  } else {
    utilities["type"] = "edges";
    ordered_json edges = ordered_json::array();
    for (const EdgePayoff& e : *g.edge_utilities) {
      ordered_json je;
      je["from"] = e.from;
      je["to"] = e.to;
      je["matrix"] = matrix_to_json(e.payoff);
      edges.push_back(std::move(je));
    }
    utilities["edges"] = std::move(edges);
  }
  j["utilities"] = std::move(utilities);
  ordered_json costs = ordered_json::array();
  for (const auto& list : g.costs) {
    ordered_json player_costs = ordered_json::array();
    for (const CostTerm& term : list) {
      ordered_json jt;
      if (const auto* dense = std::get_if<DenseCost>(&term)) {
        jt["type"] = "dense";
        jt["values"] = dense->values;
      } else {
        const auto& pair = std::get<PairCost>(term);
        jt["type"] = "pair";
        jt["p"] = pair.p;
        jt["q"] = pair.q;
        jt["matrix"] = matrix_to_json(pair.payoff);
      }
      player_costs.push_back(std::move(jt));
    }
    costs.push_back(std::move(player_costs));
  }
  j["costs"] = std::move(costs);
  return j;
}

FactoredGame game_from_json_obj(const ordered_json& j) {
  FactoredGame g;
  g.n_players = j.at("players").get<int>();
  g.n_actions = j.at("actions").get<int>();
  if (j.contains("range")) {
    g.utility_lo = j.at("range").at(0).get<double>();
    g.utility_hi = j.at("range").at(1).get<double>();
  }
  const auto& utilities = j.at("utilities");
  const std::string type = utilities.at("type").get<std::string>();
  if (type == "dense") {
    g.dense_utilities = utilities.at("values").get<std::vector<Vec>>();
  } else if (type == "edges") {
    std::vector<EdgePayoff> edges;
    for (const auto& je : utilities.at("edges")) {
      EdgePayoff e;
      e.from = je.at("from").get<int>();
      e.to = je.at("to").get<int>();
      e.payoff = matrix_from_json(je.at("matrix"));
      edges.push_back(std::move(e));
    }
    g.edge_utilities = std::move(edges);
  } else {
    throw std::invalid_argument("json: unknown utility type " + type);
  }
  g.costs.assign(g.n_players, {});
  if (j.contains("costs")) {
    const auto& costs = j.at("costs");
    if (static_cast<int>(costs.size()) != g.n_players)
      throw std::invalid_argument("json: costs must list every player");
    for (int i = 0; i < g.n_players; ++i) {
      for (const auto& jt : costs.at(i)) {
        const std::string cost_type = jt.at("type").get<std::string>();
        if (cost_type == "dense") {
          g.costs[i].push_back(DenseCost{jt.at("values").get<Vec>()});
        } else if (cost_type == "pair") {
          PairCost pc;
          pc.p = jt.at("p").get<int>();
          pc.q = jt.at("q").get<int>();
          pc.payoff = matrix_from_json(jt.at("matrix"));
          g.costs[i].push_back(std::move(pc));
        } else {
          throw std::invalid_argument("json: unknown cost type " + cost_type);
        }
      }
    }
  }
  g.validate();
  return g;
}

ordered_json polymatrix_to_json_obj(const PolymatrixGame& g) {
  ordered_json j;
  j["k"] = g.k;
  j["players"] = g.n_players;
  ordered_json edges = ordered_json::array();
  for (const PolymatrixEdge& e : g.edges) {
    ordered_json je;
    je["from"] = e.from;
    je["to"] = e.to;
    je["matrix"] = matrix_to_json(e.payoff);
    edges.push_back(std::move(je));
  }
  j["edges"] = std::move(edges);
  return j;
}

PolymatrixGame polymatrix_from_json_obj(const ordered_json& j) {
  PolymatrixGame g;
  g.k = j.at("k").get<int>();
  int max_node = -1;
  for (const auto& je : j.at("edges")) {
    PolymatrixEdge e;
    e.from = je.at("from").get<int>();
    e.to = je.at("to").get<int>();
    e.payoff = matrix_from_json(je.at("matrix"));
    max_node = std::max({max_node, e.from, e.to});
    g.edges.push_back(std::move(e));
  }
  g.n_players = j.contains("players") ? j.at("players").get<int>() : max_node + 1;
  g.validate();
  return g;
}

ordered_json mixture_to_json_obj(const MixtureStrategy& z) {
  ordered_json j;
  ordered_json comps = ordered_json::array();
  for (const MixtureComponent& c : z.components) {
    ordered_json jc;
    jc["w"] = c.weight;
    jc["marginals"] = c.marginals;
    comps.push_back(std::move(jc));
  }
  j["components"] = std::move(comps);
  return j;
}

MixtureStrategy mixture_from_json_obj(const ordered_json& j) {
  MixtureStrategy z;
  for (const auto& jc : j.at("components")) {
    MixtureComponent c;
    c.weight = jc.at("w").get<double>();
    c.marginals = jc.at("marginals").get<std::vector<Vec>>();
    z.components.push_back(std::move(c));
  }
  z.validate(1e-9);
  return z;
}

}  // namespace

std::string polymatrix_to_json(const PolymatrixGame& g, int indent) {
  return polymatrix_to_json_obj(g).dump(indent) + "\n";
}

PolymatrixGame polymatrix_from_json(const std::string& text) {
  return polymatrix_from_json_obj(ordered_json::parse(text));
}

std::string game_to_json(const FactoredGame& g, int indent) {
  return game_to_json_obj(g).dump(indent) + "\n";
}

FactoredGame game_from_json(const std::string& text) {
  return game_from_json_obj(ordered_json::parse(text));
}

std::string mixture_to_json(const MixtureStrategy& z, int indent) {
  return mixture_to_json_obj(z).dump(indent) + "\n";
}

MixtureStrategy mixture_from_json(const std::string& text) {
  return mixture_from_json_obj(ordered_json::parse(text));
}

std::string instance_to_json(const ConstrainedInstance& inst, int indent) {
  ordered_json j;
  j["game"] = game_to_json_obj(inst.game);
  j["deviations"] = inst.deviations.tag == DeviationPolytope::Tag::CCE ? "cce" : "ce";
  j["eps_prime"] = inst.eps_prime;
  j["nu"] = inst.nu;
  j["mapping"]["left"] = inst.left_index;
  j["mapping"]["right"] = inst.right_index;
  j["source"]["eps"] = inst.source_eps;
  j["source"]["game"] = polymatrix_to_json_obj(inst.source);
  return j.dump(indent) + "\n";
}

ConstrainedInstance instance_from_json(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  ConstrainedInstance inst;
  inst.game = game_from_json_obj(j.at("game"));
  const std::string dev = j.at("deviations").get<std::string>();
  inst.deviations = dev == "cce" ? DeviationPolytope::cce(inst.game.n_actions)
                                 : DeviationPolytope::ce(inst.game.n_actions);
  inst.eps_prime = j.at("eps_prime").get<double>();
  inst.nu = j.at("nu").get<double>();
  inst.left_index = j.at("mapping").at("left").get<std::vector<int>>();
  inst.right_index = j.at("mapping").at("right").get<std::vector<int>>();
  inst.source_eps = j.at("source").at("eps").get<double>();
  inst.source = polymatrix_from_json_obj(j.at("source").at("game"));
  return inst;
}

std::string report_to_json(const EquilibriumReport& report, int indent) {
  ordered_json j;
  switch (report.verdict) {
    case Verdict::Pass:
      j["verdict"] = "pass";
      break;
    case Verdict::Fail:
      j["verdict"] = "fail";
      break;
    case Verdict::PromiseViolation:
      j["verdict"] = "promise_violation";
      break;
  }
  j["max_regret"] = report.max_regret;
  j["max_cost_violation"] = report.max_cost_violation;
  j["eps"] = report.eps;
  j["nu"] = report.nu;
  j["tol"] = report.tol;
  ordered_json players = ordered_json::array();
  for (const PlayerReport& pr : report.players) {
    ordered_json jp;
    jp["expected_utility"] = pr.expected_utility;
    jp["best_safe_value"] = pr.best_safe_value;
    jp["regret"] = pr.regret;
    jp["promise_violated"] = pr.promise_violated;
    jp["cost_slacks"] = pr.cost_slacks;
    if (pr.deviation)
      jp["deviation"] = matrix_to_json(*pr.deviation);
    else
      jp["deviation"] = nullptr;
    players.push_back(std::move(jp));
  }
  j["players"] = std::move(players);
  return j.dump(indent) + "\n";
}

std::string qvi_instance_to_json(const QviInstance& inst, int indent) {
  ordered_json j;
  j["d"] = inst.d;
  j["eps"] = inst.eps;
  j["nu"] = inst.nu;
  j["eps_prime"] = inst.eps_prime;
  j["nu_prime"] = inst.nu_prime;
  j["lipschitz_g"] = inst.lipschitz_g;
  j["lipschitz_l"] = inst.lipschitz_l;
  j["costs_active"] = inst.costs_active;
  j["game"] = game_to_json_obj(inst.game);
  return j.dump(indent) + "\n";
}

QviInstance qvi_instance_from_json(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  const FactoredGame game = game_from_json_obj(j.at("game"));
  QviInstance inst = build_qvi(game, j.at("eps").get<double>(), j.at("nu").get<double>());
  const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12; };
  if (!close(inst.eps_prime, j.at("eps_prime").get<double>()) ||
      !close(inst.nu_prime, j.at("nu_prime").get<double>()) ||
      j.at("d").get<int>() != inst.d)
    throw std::invalid_argument("qvi_instance_from_json: stored parameters disagree");
  return inst;
}

std::string qvi_solution_to_json(const QviSolution& sol, int indent) {
  ordered_json j;
  j["certified"] = sol.certified;
  j["gap"] = sol.gap;
  j["z"] = sol.z;
  j["iterations"] = sol.iterations;
  j["method"] = sol.method;
  ordered_json trace = ordered_json::array();
  for (const QviTracePoint& t : sol.trace) {
    ordered_json jt;
    jt["iteration"] = t.iteration;
    jt["gap"] = t.gap;
    jt["certified"] = t.certified;
    trace.push_back(std::move(jt));
  }
  j["trace"] = std::move(trace);
  return j.dump(indent) + "\n";
}

bool looks_like_instance(const std::string& text) {
  const json j = json::parse(text);
  return j.is_object() && j.contains("eps_prime") && j.contains("game");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace phieq
