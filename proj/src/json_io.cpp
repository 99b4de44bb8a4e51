#include "hjr/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace hjr {

using nlohmann::json;

json mdp_to_json(const FiniteMdp& mdp, const LabelSet& labels) {
  json next = json::array();
  for (int x = 0; x < mdp.num_states; ++x) {
    json row = json::array();
    for (int a = 0; a < mdp.num_actions; ++a) row.push_back(mdp.successor(x, a));
    next.push_back(std::move(row));
  }
  json label_obj = json::object();
  auto put = [&](const char* name, const LabelTable& table) {
    if (!table.empty()) label_obj[name] = table;
  };
  put("l", labels.l);
  put("g", labels.g);
  put("l1", labels.l1);
  put("l2", labels.l2);
  return json{{"num_states", mdp.num_states},
              {"num_actions", mdp.num_actions},
              {"next", std::move(next)},
              {"labels", std::move(label_obj)}};
}

std::pair<FiniteMdp, LabelSet> mdp_from_json(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("MDP document must be an object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "num_states" && key != "num_actions" && key != "next" &&
        key != "labels")
      throw std::invalid_argument("MDP document: unknown key '" + key + "'");
  }
  FiniteMdp mdp;
  mdp.num_states = doc.at("num_states").get<int>();
  mdp.num_actions = doc.at("num_actions").get<int>();
  const json& next = doc.at("next");
  if (!next.is_array() || next.size() != static_cast<std::size_t>(mdp.num_states))
    throw std::invalid_argument("MDP document: 'next' must have one row per state");
  for (const json& row : next) {
    if (!row.is_array() || row.size() != static_cast<std::size_t>(mdp.num_actions))
      throw std::invalid_argument("MDP document: transition row has wrong length");
    for (const json& entry : row) mdp.next.push_back(entry.get<int>());
  }
  mdp.validate();

  LabelSet labels;
  if (doc.contains("labels")) {
    const json& label_obj = doc.at("labels");
    if (!label_obj.is_object())
      throw std::invalid_argument("MDP document: 'labels' must be an object");
    for (const auto& [name, values] : label_obj.items()) {
      LabelTable* target = nullptr;
      if (name == "l") target = &labels.l;
      else if (name == "g") target = &labels.g;
      else if (name == "l1") target = &labels.l1;
      else if (name == "l2") target = &labels.l2;
      else
        throw std::invalid_argument("MDP document: unknown label '" + name + "'");
      *target = values.get<LabelTable>();
      check_label_sizes(mdp, *target, name);
    }
  }
  return {std::move(mdp), std::move(labels)};
}

std::pair<FiniteMdp, LabelSet> load_mdp_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open MDP file " + path);
  json doc;
  in >> doc;
  return mdp_from_json(doc);
}

void save_mdp_file(const FiniteMdp& mdp, const LabelSet& labels,
                   const std::string& path) {
  save_json_file(mdp_to_json(mdp, labels), path);
}

json report_to_json(const SolveReport& report) {
  return json{{"sweeps", report.sweeps},
              {"residual", report.residual},
              {"converged", report.converged}};
}

json raa_solution_to_json(const RaaSolution& sol) {
  return json{{"v_avoid", sol.v_avoid},
              {"tilde_l", sol.tilde_l},
              {"v_raa", sol.v_raa},
              {"report_avoid", report_to_json(sol.report_avoid)},
              {"report_raa", report_to_json(sol.report_raa)}};
}

json rr_solution_to_json(const RrSolution& sol) {
  return json{{"v_r1", sol.v_r1},
              {"v_r2", sol.v_r2},
              {"hat_l", sol.hat_l},
              {"v_rr", sol.v_rr},
              {"report_r1", report_to_json(sol.report_r1)},
              {"report_r2", report_to_json(sol.report_r2)},
              {"report_rr", report_to_json(sol.report_rr)}};
}

json augmented_policy_to_json(const AugmentedPolicy& policy) {
  // actions are flattened row-major over (x, y_idx, z_idx)
  return json{{"y_values", policy.y_values},
              {"z_values", policy.z_values},
              {"actions", policy.actions}};
}

json trajectory_to_json(const Trajectory& traj) {
  return json{{"states", traj.states},
              {"actions", traj.actions},
              {"y", traj.y_trace},
              {"z", traj.z_trace},
              {"cycled", traj.cycled}};
}

void save_json_file(const json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace hjr
