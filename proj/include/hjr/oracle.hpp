#pragma once

#include <cstdint>
#include <vector>

#include "hjr/mdp.hpp"
#include "hjr/solvers.hpp"

namespace hjr {

struct OracleMismatch {
  int state = 0;
  double solver_value = 0.0;
  double oracle_value = 0.0;
};

struct OracleReport {
  ValueTable solver;
  ValueTable oracle;
  std::vector<OracleMismatch> mismatches;  // empty iff the tables agree exactly
};

/// Ground-truth value by brute force on the augmented product graph,
/// independent of the fixed-point solvers. The value from a start is the
/// best terminal score among reachable augmented states that lie on a
/// directed cycle (running extrema freeze there, so every infinite
/// trajectory settles on such a state).
///
/// Label usage per mode: R uses label_a as the reward; A uses label_a as the
/// penalty margin; RA and RAA take (label_a, label_b) = (l, g); RR takes
/// (l1, l2). label_b may be empty for R and A.
ValueTable oracle_value(const FiniteMdp& mdp, const LabelTable& label_a,
                        const LabelTable& label_b, Objective mode,
                        std::size_t max_aug_states = 1000000);

/// Second, structurally unrelated oracle: enumerate every deterministic
/// stationary policy over the reachable augmented states, simulate each to
/// cycle from every base state, and take per-state maxima. Feasible only
/// for tiny instances; throws when num_actions^(reachable states) exceeds
/// the cap.
ValueTable oracle_by_policy_enumeration(const FiniteMdp& mdp,
                                        const LabelTable& label_a,
                                        const LabelTable& label_b,
                                        Objective mode,
                                        std::uint64_t policy_cap = 1000000);

/// Runs the solver/compose pipeline matching `mode` and compares with
/// oracle_value entry by entry. Exact equality required; differences land in
/// the mismatch list, they are not errors.
OracleReport cross_check(const FiniteMdp& mdp, const LabelTable& label_a,
                         const LabelTable& label_b, Objective mode);

}  // namespace hjr
