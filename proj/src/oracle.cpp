#include "hjr/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "hjr/compose.hpp"

namespace hjr {

namespace {

// Per-mode running-extremum bookkeeping. For RA the y coordinate carries the
// running max of the path-dependent stage score min{l(x_t), min_{tau<=t} g},
// so the terminal score is y alone and one graph engine serves all modes.
struct ModeRules {
  Objective mode;
  const LabelTable& la;
  const LabelTable& lb;

  std::pair<double, double> init(int x) const {
    switch (mode) {
      case Objective::R: return {la[x], 0.0};
      case Objective::A: return {0.0, la[x]};
      case Objective::RA: return {std::min(la[x], lb[x]), lb[x]};
      case Objective::RAA: return {la[x], lb[x]};
      case Objective::RR: return {la[x], lb[x]};
    }
    return {0.0, 0.0};
  }

  std::pair<double, double> step(double y, double z, int x_next) const {
    switch (mode) {
      case Objective::R: return {std::max(y, la[x_next]), 0.0};
      case Objective::A: return {0.0, std::min(z, la[x_next])};
      case Objective::RA: {
        const double z2 = std::min(z, lb[x_next]);
        return {std::max(y, std::min(la[x_next], z2)), z2};
      }
      case Objective::RAA:
        return {std::max(y, la[x_next]), std::min(z, lb[x_next])};
      case Objective::RR:
        return {std::max(y, la[x_next]), std::max(z, lb[x_next])};
    }
    return {y, z};
  }

  double score(double y, double z) const {
    switch (mode) {
      case Objective::R: return y;
      case Objective::A: return z;
      case Objective::RA: return y;
      case Objective::RAA: return std::min(y, z);
      case Objective::RR: return std::min(y, z);
    }
    return 0.0;
  }
};

void check_mode_labels(const FiniteMdp& mdp, const LabelTable& la,
                       const LabelTable& lb, Objective mode) {
  mdp.validate();
  check_label_sizes(mdp, la, "label_a");
  if (mode == Objective::RA || mode == Objective::RAA || mode == Objective::RR)
    check_label_sizes(mdp, lb, "label_b");
}

struct NodeKey {
  int x;
  std::uint64_t y_bits;
  std::uint64_t z_bits;
  bool operator==(const NodeKey&) const = default;
};

struct NodeKeyHash {
  std::size_t operator()(const NodeKey& k) const {
    std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ULL;
    h ^= k.y_bits + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    h ^= k.z_bits + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

// Augmented product graph restricted to states reachable from the per-base
// initializations (x, y0(x), z0(x)).
struct ProductGraph {
  std::vector<double> y, z;
  std::vector<int> succ;  // [node][action]
  std::vector<int> init;  // per base state
  int num_actions = 0;

  int num_nodes() const { return static_cast<int>(y.size()); }
  int successor(int node, int action) const {
    return succ[static_cast<std::size_t>(node) * num_actions + action];
  }
};

ProductGraph build_product(const FiniteMdp& mdp, const ModeRules& rules,
                           std::size_t max_aug_states) {
  ProductGraph graph;
  graph.num_actions = mdp.num_actions;
  std::unordered_map<NodeKey, int, NodeKeyHash> ids;
  std::vector<int> node_x;
  std::vector<int> frontier;

  auto intern = [&](int x, double y, double z) {
    const NodeKey key{x, std::bit_cast<std::uint64_t>(y),
                      std::bit_cast<std::uint64_t>(z)};
    auto [it, inserted] = ids.try_emplace(key, static_cast<int>(node_x.size()));
    if (inserted) {
      if (node_x.size() >= max_aug_states)
        throw std::runtime_error("oracle: augmented state cap exceeded");
      node_x.push_back(x);
      graph.y.push_back(y);
      graph.z.push_back(z);
      frontier.push_back(it->second);
    }
    return it->second;
  };

  graph.init.resize(mdp.num_states);
  for (int x = 0; x < mdp.num_states; ++x) {
    auto [y0, z0] = rules.init(x);
    graph.init[x] = intern(x, y0, z0);
  }
  while (!frontier.empty()) {
    const int node = frontier.back();
    frontier.pop_back();
    const int x = node_x[node];
    if (graph.succ.size() < (node + 1) * static_cast<std::size_t>(mdp.num_actions))
      graph.succ.resize((node_x.size()) * static_cast<std::size_t>(mdp.num_actions), -1);
    for (int a = 0; a < mdp.num_actions; ++a) {
      const int x2 = mdp.successor(x, a);
      auto [y2, z2] = rules.step(graph.y[node], graph.z[node], x2);
      const int node2 = intern(x2, y2, z2);
      graph.succ[static_cast<std::size_t>(node) * mdp.num_actions + a] = node2;
    }
  }
  graph.succ.resize(static_cast<std::size_t>(graph.num_nodes()) * mdp.num_actions);
  return graph;
}

// Iterative Tarjan. Components finish after everything they can reach, so
// best-reachable-cycle-score DP folds into the pop step.
std::vector<double> best_cycle_scores(const ProductGraph& graph,
                                      const ModeRules& rules) {
  const int n = graph.num_nodes();
  constexpr int kUnvisited = -1;
  const double neg_inf = -std::numeric_limits<double>::infinity();

  std::vector<int> index(n, kUnvisited), lowlink(n), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  std::vector<double> best(n, neg_inf);
  std::vector<double> comp_best;

  struct Frame {
    int node;
    int next_action;
  };
  std::vector<Frame> dfs;
  int next_index = 0;

  for (int root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    dfs.push_back({root, 0});
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!dfs.empty()) {
      Frame& frame = dfs.back();
      if (frame.next_action < graph.num_actions) {
        const int w = graph.successor(frame.node, frame.next_action++);
        if (index[w] == kUnvisited) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          dfs.push_back({w, 0});
        } else if (on_stack[w]) {
          lowlink[frame.node] = std::min(lowlink[frame.node], index[w]);
        }
        continue;
      }
      const int v = frame.node;
      dfs.pop_back();
      if (!dfs.empty())
        lowlink[dfs.back().node] = std::min(lowlink[dfs.back().node], lowlink[v]);
      if (lowlink[v] != index[v]) continue;

      // Pop one component; its successors' components are already scored.
      const int comp_id = static_cast<int>(comp_best.size());
      std::vector<int> members;
      for (;;) {
        const int w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = comp_id;
        members.push_back(w);
        if (w == v) break;
      }
      bool cycle_borne = members.size() >= 2;
      double value = neg_inf;
      for (int w : members) {
        for (int a = 0; a < graph.num_actions; ++a) {
          const int m = graph.successor(w, a);
          if (m == w) cycle_borne = true;
          if (comp[m] != comp_id) value = std::max(value, comp_best[comp[m]]);
        }
      }
      if (cycle_borne)
        for (int w : members)
          value = std::max(value, rules.score(graph.y[w], graph.z[w]));
      comp_best.push_back(value);
      for (int w : members) best[w] = value;
    }
  }
  return best;
}

}  // namespace

ValueTable oracle_value(const FiniteMdp& mdp, const LabelTable& label_a,
                        const LabelTable& label_b, Objective mode,
                        std::size_t max_aug_states) {
  check_mode_labels(mdp, label_a, label_b, mode);
  const ModeRules rules{mode, label_a, label_b};
  const ProductGraph graph = build_product(mdp, rules, max_aug_states);
  const std::vector<double> best = best_cycle_scores(graph, rules);
  ValueTable values(mdp.num_states);
  for (int x = 0; x < mdp.num_states; ++x) values[x] = best[graph.init[x]];
  return values;
}

ValueTable oracle_by_policy_enumeration(const FiniteMdp& mdp,
                                        const LabelTable& label_a,
                                        const LabelTable& label_b,
                                        Objective mode,
                                        std::uint64_t policy_cap) {
  check_mode_labels(mdp, label_a, label_b, mode);
  const ModeRules rules{mode, label_a, label_b};
  const ProductGraph graph = build_product(mdp, rules, policy_cap);

  const int n = graph.num_nodes();
  std::uint64_t count = 1;
  for (int i = 0; i < n; ++i) {
    count *= static_cast<std::uint64_t>(mdp.num_actions);
    if (count > policy_cap)
      throw std::runtime_error("oracle_by_policy_enumeration: policy cap exceeded");
  }

  const double neg_inf = -std::numeric_limits<double>::infinity();
  ValueTable values(mdp.num_states, neg_inf);
  std::vector<int> assignment(n, 0);
  std::vector<int> seen_at(n, -1);
  for (std::uint64_t p = 0; p < count; ++p) {
    for (int x = 0; x < mdp.num_states; ++x) {
      int node = graph.init[x];
      while (seen_at[node] != static_cast<int>(x) + 1) {
        seen_at[node] = static_cast<int>(x) + 1;
        node = graph.successor(node, assignment[node]);
      }
      values[x] = std::max(values[x], rules.score(graph.y[node], graph.z[node]));
    }
    std::fill(seen_at.begin(), seen_at.end(), -1);
    // mixed-radix increment
    for (int i = 0; i < n; ++i) {
      if (++assignment[i] < mdp.num_actions) break;
      assignment[i] = 0;
    }
  }
  return values;
}

OracleReport cross_check(const FiniteMdp& mdp, const LabelTable& label_a,
                         const LabelTable& label_b, Objective mode) {
  OracleReport report;
  switch (mode) {
    case Objective::R: report.solver = solve_reach(mdp, label_a).first; break;
    case Objective::A: report.solver = solve_avoid(mdp, label_a).first; break;
    case Objective::RA:
      report.solver = solve_reach_avoid(mdp, label_a, label_b).first;
      break;
    case Objective::RAA:
      report.solver = compose_raa(mdp, label_a, label_b).v_raa;
      break;
    case Objective::RR:
      report.solver = compose_rr(mdp, label_a, label_b).v_rr;
      break;
  }
  report.oracle = oracle_value(mdp, label_a, label_b, mode);
  for (int x = 0; x < mdp.num_states; ++x)
    if (report.solver[x] != report.oracle[x])
      report.mismatches.push_back({x, report.solver[x], report.oracle[x]});
  return report;
}

}  // namespace hjr
