#pragma once

#include <string>

#include "phieq/equilibrium.hpp"
#include "phieq/game.hpp"
#include "phieq/mixture.hpp"
#include "phieq/polymatrix.hpp"
#include "phieq/qvi.hpp"
#include "phieq/reduction.hpp"

namespace phieq {

// JSON wire formats. Field names are fixed and documented in the README;
// all numbers are decimal. Serialization is deterministic: identical objects
// produce identical text.

std::string polymatrix_to_json(const PolymatrixGame& g, int indent = 2);
PolymatrixGame polymatrix_from_json(const std::string& text);

std::string game_to_json(const FactoredGame& g, int indent = 2);
FactoredGame game_from_json(const std::string& text);

std::string mixture_to_json(const MixtureStrategy& z, int indent = 2);
MixtureStrategy mixture_from_json(const std::string& text);

std::string instance_to_json(const ConstrainedInstance& inst, int indent = 2);
ConstrainedInstance instance_from_json(const std::string& text);

std::string report_to_json(const EquilibriumReport& report, int indent = 2);

std::string qvi_instance_to_json(const QviInstance& inst, int indent = 2);

// Rebuilds the instance from its game and targets, then checks the stored
// derived parameters against the reconstruction.
QviInstance qvi_instance_from_json(const std::string& text);

std::string qvi_solution_to_json(const QviSolution& sol, int indent = 2);

// Detects whether a JSON document is a constrained instance (as opposed to a
// bare game): instances carry "eps_prime" and an embedded "game".
bool looks_like_instance(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace phieq
