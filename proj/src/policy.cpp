#include "hjr/policy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace hjr {

namespace {

void require_zero_residual(double residual, const char* what) {
  if (residual != 0.0)
    throw std::invalid_argument(std::string(what) +
                                ": input is not a fixed point (residual " +
                                std::to_string(residual) + ")");
}

int index_in(const std::vector<double>& sorted_vals, double v) {
  auto it = std::lower_bound(sorted_vals.begin(), sorted_vals.end(), v);
  return static_cast<int>(it - sorted_vals.begin());
}

std::vector<double> sorted_unique(const LabelTable& labels) {
  std::vector<double> vals(labels.begin(), labels.end());
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals;
}

struct AugKey {
  int x;
  std::uint64_t y_bits, z_bits;
  bool operator==(const AugKey&) const = default;
};
struct AugKeyHash {
  std::size_t operator()(const AugKey& k) const {
    std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ULL;
    h ^= k.y_bits + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    h ^= k.z_bits + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

StationaryPolicy extract_avoid_policy(const FiniteMdp& mdp, const LabelTable& g,
                                      const ValueTable& v_avoid) {
  require_zero_residual(
      bellman_residual(mdp, v_avoid, ProblemKind::Avoid, {}, g),
      "extract_avoid_policy");
  StationaryPolicy policy(mdp.num_states, 0);
  for (int x = 0; x < mdp.num_states; ++x)
    for (int a = 1; a < mdp.num_actions; ++a)
      if (v_avoid[mdp.successor(x, a)] > v_avoid[mdp.successor(x, policy[x])])
        policy[x] = a;
  return policy;
}

std::vector<int> reach_attainment_steps(const FiniteMdp& mdp,
                                        const LabelTable& l,
                                        const ValueTable& v_reach) {
  require_zero_residual(
      bellman_residual(mdp, v_reach, ProblemKind::Reach, l, {}),
      "reach_attainment_steps");

  std::vector<int> steps(mdp.num_states, -1);
  std::deque<int> queue;
  for (int x = 0; x < mdp.num_states; ++x)
    if (l[x] == v_reach[x]) {
      steps[x] = 0;
      queue.push_back(x);
    }

  // Reverse adjacency restricted to value-preserving edges.
  std::vector<std::vector<int>> preds(mdp.num_states);
  for (int x = 0; x < mdp.num_states; ++x)
    for (int a = 0; a < mdp.num_actions; ++a) {
      const int x2 = mdp.successor(x, a);
      if (v_reach[x2] == v_reach[x]) preds[x2].push_back(x);
    }
  while (!queue.empty()) {
    const int x2 = queue.front();
    queue.pop_front();
    for (int x : preds[x2])
      if (steps[x] < 0) {
        steps[x] = steps[x2] + 1;
        queue.push_back(x);
      }
  }
  for (int x = 0; x < mdp.num_states; ++x)
    if (steps[x] < 0)
      throw std::invalid_argument(
          "reach_attainment_steps: value table is a fixed point but not the "
          "least one (no value-preserving path attains it)");
  return steps;
}

StationaryPolicy extract_reach_policy(const FiniteMdp& mdp, const LabelTable& l,
                                      const ValueTable& v_reach) {
  const std::vector<int> steps = reach_attainment_steps(mdp, l, v_reach);
  StationaryPolicy policy(mdp.num_states, 0);
  for (int x = 0; x < mdp.num_states; ++x) {
    if (steps[x] == 0) continue;  // value attained on arrival, any action works
    for (int a = 0; a < mdp.num_actions; ++a) {
      const int x2 = mdp.successor(x, a);
      if (v_reach[x2] == v_reach[x] && steps[x2] == steps[x] - 1) {
        policy[x] = a;
        break;
      }
    }
  }
  return policy;
}

std::pair<StationaryPolicy, ValueTable> extract_reach_avoid_policy(
    const FiniteMdp& mdp, const LabelTable& tilde_l, const LabelTable& g) {
  mdp.validate();
  check_label_sizes(mdp, tilde_l, "tilde_l");
  check_label_sizes(mdp, g, "g");

  const int n = mdp.num_states;
  std::vector<bool> frozen(n, false);
  std::vector<double> value(n, 0.0);  // meaningful only where frozen
  StationaryPolicy policy(n, 0);

  // Backup of x through the frozen part of the table; unfrozen successors
  // act as the "unset" bottom element.
  auto backup = [&](int x) {
    bool any = false;
    double q = 0.0;
    for (int a = 0; a < mdp.num_actions; ++a) {
      const int x2 = mdp.successor(x, a);
      if (!frozen[x2]) continue;
      q = any ? std::max(q, value[x2]) : value[x2];
      any = true;
    }
    return std::min(g[x], any ? std::max(tilde_l[x], q) : tilde_l[x]);
  };

  int frozen_count = 0;
  while (frozen_count < n) {
    double alpha = 0.0;
    bool have_alpha = false;
    for (int x = 0; x < n; ++x) {
      if (frozen[x]) continue;
      const double b = backup(x);
      if (!have_alpha || b > alpha) {
        alpha = b;
        have_alpha = true;
      }
    }
    std::vector<int> joining;
    for (int x = 0; x < n; ++x)
      if (!frozen[x] && backup(x) == alpha) joining.push_back(x);

    // Actions are chosen against the table before this peel's additions.
    for (int x : joining) {
      int best_action = 0;
      bool any = false;
      double best = 0.0;
      for (int a = 0; a < mdp.num_actions; ++a) {
        const int x2 = mdp.successor(x, a);
        if (!frozen[x2]) continue;
        if (!any || value[x2] > best) {
          best = value[x2];
          best_action = a;
          any = true;
        }
      }
      policy[x] = best_action;
    }
    for (int x : joining) {
      frozen[x] = true;
      value[x] = alpha;
      ++frozen_count;
    }
  }
  return {policy, value};
}

int RaaAugmentedRule::action(const FiniteMdp& mdp, int x, double y,
                             double z) const {
  const int x2 = mdp.successor(x, ra_policy[x]);
  const double y2 = std::max(y, l[x2]);
  const double z2 = std::min(z, g[x2]);
  const double ahead = std::min({y2, z2, v_avoid[x2]});
  const double now = std::min({y, z, v_avoid[x]});
  return ahead >= now ? ra_policy[x] : avoid_policy[x];
}

int RrAugmentedRule::action(const FiniteMdp& mdp, int x, double y,
                            double z) const {
  (void)mdp;
  if (std::max(y, z) < v_rr[x]) return frontier_policy[x];
  return y <= z ? reach1_policy[x] : reach2_policy[x];
}

RaaAugmentedRule synth_raa_rule(const FiniteMdp& mdp, const LabelTable& l,
                                const LabelTable& g, const RaaSolution& raa) {
  check_label_sizes(mdp, l, "l");
  check_label_sizes(mdp, g, "g");
  require_zero_residual(
      bellman_residual(mdp, raa.v_avoid, ProblemKind::Avoid, {}, g),
      "synth_raa_rule (v_avoid)");
  for (int x = 0; x < mdp.num_states; ++x)
    if (raa.tilde_l[x] != std::min(l[x], raa.v_avoid[x]))
      throw std::invalid_argument("synth_raa_rule: tilde_l does not match min{l, v_avoid}");
  require_zero_residual(raa_bellman_residual(mdp, raa.tilde_l, g, raa.v_raa),
                        "synth_raa_rule (v_raa)");

  RaaAugmentedRule rule;
  rule.l = l;
  rule.g = g;
  rule.v_avoid = raa.v_avoid;
  rule.ra_policy = extract_reach_avoid_policy(mdp, raa.tilde_l, g).first;
  rule.avoid_policy = extract_avoid_policy(mdp, g, raa.v_avoid);
  return rule;
}

RrAugmentedRule synth_rr_rule(const FiniteMdp& mdp, const LabelTable& l1,
                              const LabelTable& l2, const RrSolution& rr) {
  require_zero_residual(
      bellman_residual(mdp, rr.v_r1, ProblemKind::Reach, l1, {}),
      "synth_rr_rule (v_r1)");
  require_zero_residual(
      bellman_residual(mdp, rr.v_r2, ProblemKind::Reach, l2, {}),
      "synth_rr_rule (v_r2)");
  for (int x = 0; x < mdp.num_states; ++x)
    if (rr.hat_l[x] !=
        std::max(std::min(l1[x], rr.v_r2[x]), std::min(l2[x], rr.v_r1[x])))
      throw std::invalid_argument("synth_rr_rule: hat_l does not match the frontier reward");
  require_zero_residual(rr_bellman_residual(mdp, rr.hat_l, rr.v_rr),
                        "synth_rr_rule (v_rr)");

  RrAugmentedRule rule;
  rule.v_rr = rr.v_rr;
  rule.frontier_policy = extract_reach_policy(mdp, rr.hat_l, rr.v_rr);
  rule.reach1_policy = extract_reach_policy(mdp, l1, rr.v_r1);
  rule.reach2_policy = extract_reach_policy(mdp, l2, rr.v_r2);
  return rule;
}

namespace {

AugmentedPolicy materialize(const FiniteMdp& mdp, const LabelTable& la,
                            const LabelTable& lb,
                            const std::function<int(int, double, double)>& rule) {
  AugmentedPolicy policy;
  policy.y_values = sorted_unique(la);
  policy.z_values = sorted_unique(lb);
  policy.actions.reserve(static_cast<std::size_t>(mdp.num_states) *
                         policy.y_values.size() * policy.z_values.size());
  for (int x = 0; x < mdp.num_states; ++x)
    for (double y : policy.y_values)
      for (double z : policy.z_values) policy.actions.push_back(rule(x, y, z));
  return policy;
}

}  // namespace

AugmentedPolicy synth_raa_augmented(const FiniteMdp& mdp, const LabelTable& l,
                                    const LabelTable& g,
                                    const RaaSolution& raa) {
  const RaaAugmentedRule rule = synth_raa_rule(mdp, l, g, raa);
  return materialize(mdp, l, g, [&](int x, double y, double z) {
    return rule.action(mdp, x, y, z);
  });
}

AugmentedPolicy synth_rr_augmented(const FiniteMdp& mdp, const LabelTable& l1,
                                   const LabelTable& l2, const RrSolution& rr) {
  const RrAugmentedRule rule = synth_rr_rule(mdp, l1, l2, rr);
  return materialize(mdp, l1, l2, [&](int x, double y, double z) {
    return rule.action(mdp, x, y, z);
  });
}

int augmented_action(const AugmentedPolicy& policy, const FiniteMdp& mdp,
                     int x, double y, double z) {
  const int yi = index_in(policy.y_values, y);
  const int zi = index_in(policy.z_values, z);
  const std::size_t idx =
      (static_cast<std::size_t>(x) * policy.y_values.size() + yi) *
          policy.z_values.size() +
      zi;
  (void)mdp;
  return policy.actions[idx];
}

Trajectory simulate(const FiniteMdp& mdp, const StationaryPolicy& policy,
                    int start, int max_steps) {
  mdp.validate();
  if (start < 0 || start >= mdp.num_states)
    throw std::out_of_range("simulate: start state out of range");
  if (max_steps < 1) throw std::invalid_argument("simulate: max_steps must be >= 1");
  if (policy.size() != static_cast<std::size_t>(mdp.num_states))
    throw std::invalid_argument("simulate: policy has wrong size");

  Trajectory traj;
  std::vector<bool> seen(mdp.num_states, false);
  int x = start;
  traj.states.push_back(x);
  seen[x] = true;
  for (int t = 0; t < max_steps; ++t) {
    const int a = policy[x];
    if (a < 0 || a >= mdp.num_actions)
      throw std::out_of_range("simulate: policy action out of range");
    x = mdp.successor(x, a);
    traj.actions.push_back(a);
    traj.states.push_back(x);
    if (seen[x]) {
      traj.cycled = true;
      break;
    }
    seen[x] = true;
  }
  return traj;
}

Trajectory simulate_augmented(const FiniteMdp& mdp, const LabelTable& label_a,
                              const LabelTable& label_b, Objective mode,
                              const std::function<int(int, double, double)>& policy,
                              int start, int max_steps) {
  mdp.validate();
  check_label_sizes(mdp, label_a, "label_a");
  check_label_sizes(mdp, label_b, "label_b");
  if (mode != Objective::RAA && mode != Objective::RR)
    throw std::invalid_argument("simulate_augmented: mode must be RAA or RR");
  if (start < 0 || start >= mdp.num_states)
    throw std::out_of_range("simulate_augmented: start state out of range");
  if (max_steps < 1)
    throw std::invalid_argument("simulate_augmented: max_steps must be >= 1");

  Trajectory traj;
  std::unordered_set<AugKey, AugKeyHash> seen;
  int x = start;
  double y = label_a[x];
  double z = label_b[x];
  auto key = [](int s, double yv, double zv) {
    return AugKey{s, std::bit_cast<std::uint64_t>(yv),
                  std::bit_cast<std::uint64_t>(zv)};
  };
  traj.states.push_back(x);
  traj.y_trace.push_back(y);
  traj.z_trace.push_back(z);
  seen.insert(key(x, y, z));
  for (int t = 0; t < max_steps; ++t) {
    const int a = policy(x, y, z);
    if (a < 0 || a >= mdp.num_actions)
      throw std::out_of_range("simulate_augmented: policy action out of range");
    x = mdp.successor(x, a);
    std::tie(y, z) = augment_step(mode, y, z, label_a[x], label_b[x]);
    traj.actions.push_back(a);
    traj.states.push_back(x);
    traj.y_trace.push_back(y);
    traj.z_trace.push_back(z);
    if (!seen.insert(key(x, y, z)).second) {
      traj.cycled = true;
      break;
    }
  }
  return traj;
}

double realized_objective(const Trajectory& traj, const LabelTable& label_a,
                          const LabelTable& label_b, Objective mode) {
  if (!traj.cycled)
    throw std::invalid_argument(
        "realized_objective: trajectory has not cycled, value undetermined");
  const double inf = std::numeric_limits<double>::infinity();
  double best_a = -inf;   // running max of label_a
  double worst_b = inf;   // running min of label_b
  double best_b = -inf;   // running max of label_b
  double ra_score = -inf; // running max of min{l(x_t), min_{tau<=t} g}
  for (int x : traj.states) {
    best_a = std::max(best_a, label_a[x]);
    if (!label_b.empty()) {
      worst_b = std::min(worst_b, label_b[x]);
      best_b = std::max(best_b, label_b[x]);
      ra_score = std::max(ra_score, std::min(label_a[x], worst_b));
    }
  }
  switch (mode) {
    case Objective::R: return best_a;
    case Objective::A: {
      double worst_a = inf;
      for (int x : traj.states) worst_a = std::min(worst_a, label_a[x]);
      return worst_a;
    }
    case Objective::RA: return ra_score;
    case Objective::RAA: return std::min(best_a, worst_b);
    case Objective::RR: return std::min(best_a, best_b);
  }
  return 0.0;
}

ValueTable best_stationary_value(const FiniteMdp& mdp, const LabelTable& label_a,
                                 const LabelTable& label_b, Objective mode,
                                 std::uint64_t policy_cap) {
  mdp.validate();
  check_label_sizes(mdp, label_a, "label_a");
  if (!label_b.empty()) check_label_sizes(mdp, label_b, "label_b");

  std::uint64_t count = 1;
  for (int x = 0; x < mdp.num_states; ++x) {
    count *= static_cast<std::uint64_t>(mdp.num_actions);
    if (count > policy_cap)
      throw std::runtime_error("best_stationary_value: policy cap exceeded");
  }

  ValueTable best(mdp.num_states, -std::numeric_limits<double>::infinity());
  StationaryPolicy policy(mdp.num_states, 0);
  for (std::uint64_t p = 0; p < count; ++p) {
    for (int x = 0; x < mdp.num_states; ++x) {
      const Trajectory traj = simulate(mdp, policy, x, mdp.num_states + 1);
      best[x] = std::max(best[x], realized_objective(traj, label_a, label_b, mode));
    }
    for (int i = 0; i < mdp.num_states; ++i) {
      if (++policy[i] < mdp.num_actions) break;
      policy[i] = 0;
    }
  }
  return best;
}

}  // namespace hjr
