#pragma once

#include <string>
#include <utility>

#include <json.hpp>

#include "hjr/compose.hpp"
#include "hjr/mdp.hpp"
#include "hjr/policy.hpp"
#include "hjr/solvers.hpp"

namespace hjr {

// MDP interchange document: {"num_states", "num_actions", "next",
// "labels": {"l"|"g"|"l1"|"l2": [...]}}. Field order is irrelevant; unknown
// keys are rejected.
nlohmann::json mdp_to_json(const FiniteMdp& mdp, const LabelSet& labels);
std::pair<FiniteMdp, LabelSet> mdp_from_json(const nlohmann::json& doc);

std::pair<FiniteMdp, LabelSet> load_mdp_file(const std::string& path);
void save_mdp_file(const FiniteMdp& mdp, const LabelSet& labels,
                   const std::string& path);

nlohmann::json report_to_json(const SolveReport& report);
nlohmann::json raa_solution_to_json(const RaaSolution& sol);
nlohmann::json rr_solution_to_json(const RrSolution& sol);
nlohmann::json augmented_policy_to_json(const AugmentedPolicy& policy);
nlohmann::json trajectory_to_json(const Trajectory& traj);

/// Writes `doc` with a trailing newline; 2-space indentation.
void save_json_file(const nlohmann::json& doc, const std::string& path);

}  // namespace hjr
