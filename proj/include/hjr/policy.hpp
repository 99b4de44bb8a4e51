#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hjr/compose.hpp"
#include "hjr/mdp.hpp"
#include "hjr/solvers.hpp"

namespace hjr {

/// Deterministic rollout. y_trace/z_trace are filled by augmented
/// simulation and obey the augmentation rules of the chosen mode; `cycled`
/// is set when the rollout stopped because a (augmented) state repeated, at
/// which point every running extremum has stabilized.
struct Trajectory {
  std::vector<int> states;
  std::vector<int> actions;
  std::vector<double> y_trace;
  std::vector<double> z_trace;
  bool cycled = false;
};

/// Greedy policy on the avoid fixed point: argmax_u v_avoid(f(x,u)), ties to
/// the lowest action index. Rejects v_avoid that is not a fixed point of the
/// avoid recursion for g.
StationaryPolicy extract_avoid_policy(const FiniteMdp& mdp, const LabelTable& g,
                                      const ValueTable& v_avoid);

/// Steps-to-attainment for a reach fixed point: 0 where l(x) = v(x), else
/// 1 + the minimum over value-preserving successors. Computed by BFS on the
/// reversed value-preserving edges.
std::vector<int> reach_attainment_steps(const FiniteMdp& mdp,
                                        const LabelTable& l,
                                        const ValueTable& v_reach);

/// Time-optimal reach policy: follow a value-preserving successor whose
/// attainment count decreases. Greedy-on-value alone can orbit a
/// value-preserving cycle forever; the attainment tie-break rules that out.
StationaryPolicy extract_reach_policy(const FiniteMdp& mdp, const LabelTable& l,
                                      const ValueTable& v_reach);

/// Level-set peeling for the reach-avoid problem: repeatedly freeze the
/// states attaining the best one-step backup through the already-frozen
/// table, choosing each state's action against the table as it stood when
/// the state froze. Returns the policy and the peeled value table (equal to
/// the solve_reach_avoid fixed point).
std::pair<StationaryPolicy, ValueTable> extract_reach_avoid_policy(
    const FiniteMdp& mdp, const LabelTable& tilde_l, const LabelTable& g);

/// Switching rule for the augmented RAA problem: follow the reach-avoid
/// policy while the one-step look-ahead does not decrease
/// min{y, z, v_avoid(x)}, otherwise fall back to the avoid-greedy policy.
struct RaaAugmentedRule {
  LabelTable l, g;
  ValueTable v_avoid;
  StationaryPolicy ra_policy;
  StationaryPolicy avoid_policy;

  int action(const FiniteMdp& mdp, int x, double y, double z) const;
};

/// Switching rule for the augmented RR problem: pursue the frontier reward
/// until max{y, z} matches its reach value, then sweep the targets
/// worst-first (y <= z sends the tie to target 1).
struct RrAugmentedRule {
  ValueTable v_rr;
  StationaryPolicy frontier_policy;
  StationaryPolicy reach1_policy;
  StationaryPolicy reach2_policy;

  int action(const FiniteMdp& mdp, int x, double y, double z) const;
};

RaaAugmentedRule synth_raa_rule(const FiniteMdp& mdp, const LabelTable& l,
                                const LabelTable& g, const RaaSolution& raa);
RrAugmentedRule synth_rr_rule(const FiniteMdp& mdp, const LabelTable& l1,
                              const LabelTable& l2, const RrSolution& rr);

/// Dense per-augmented-state action tables for the two rules, indexed like
/// AugmentedMdp (row-major over (x, y_idx, z_idx)).
AugmentedPolicy synth_raa_augmented(const FiniteMdp& mdp, const LabelTable& l,
                                    const LabelTable& g, const RaaSolution& raa);
AugmentedPolicy synth_rr_augmented(const FiniteMdp& mdp, const LabelTable& l1,
                                   const LabelTable& l2, const RrSolution& rr);

/// Action lookup with binary search over the stored label images.
int augmented_action(const AugmentedPolicy& policy, const FiniteMdp& mdp,
                     int x, double y, double z);

/// Rollout of a stationary policy; stops when the state repeats or after
/// max_steps transitions. No y/z traces.
Trajectory simulate(const FiniteMdp& mdp, const StationaryPolicy& policy,
                    int start, int max_steps);

/// Rollout under an augmented policy given as any callable (x, y, z) ->
/// action. Starts from (start, a(start), b(start)), applies the mode's
/// augmentation each step, stops when the augmented state repeats.
Trajectory simulate_augmented(const FiniteMdp& mdp, const LabelTable& label_a,
                              const LabelTable& label_b, Objective mode,
                              const std::function<int(int, double, double)>& policy,
                              int start, int max_steps);

/// The stabilized objective value realized by a cycled trajectory. Label
/// usage matches oracle_value: R scores label_a, A scores label_a as the
/// penalty margin, RA/RAA take (l, g), RR takes (l1, l2). Throws on a
/// trajectory that has not cycled (its value is not yet determined).
double realized_objective(const Trajectory& traj, const LabelTable& label_a,
                          const LabelTable& label_b, Objective mode);

/// Per-state best value over all deterministic stationary (non-augmented)
/// policies, by exhaustive enumeration and simulation to cycle. Throws when
/// num_actions^num_states exceeds the cap.
ValueTable best_stationary_value(const FiniteMdp& mdp, const LabelTable& label_a,
                                 const LabelTable& label_b, Objective mode,
                                 std::uint64_t policy_cap = 1000000);

}  // namespace hjr
