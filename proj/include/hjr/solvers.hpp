#pragma once

#include <optional>
#include <vector>

#include "hjr/mdp.hpp"

namespace hjr {

/// One real value per state. Undiscounted solves only ever combine label
/// entries with min/max, so their outputs are exact members of the input
/// label set and can be compared with ==.
using ValueTable = std::vector<double>;

struct SolveReport {
  int sweeps = 0;
  double residual = 0.0;
  bool converged = false;
};

/// Per-state probability rows over actions.
struct StochasticPolicy {
  std::vector<double> probs;  // row-major [state][action]
  int num_actions = 0;

  double prob(int state, int action) const {
    return probs[static_cast<std::size_t>(state) * num_actions + action];
  }
  void validate(const FiniteMdp& mdp) const;
};

// Undiscounted fixed points, Jacobi sweeps, exact table-equality stop.
//
// reach:       V(x) = max{l(x), max_u V(f(x,u))},            V0 = l
// avoid:       V(x) = min{g(x), max_u V(f(x,u))},            V0 = g
// reach-avoid: V(x) = min{g(x), max{l(x), max_u V(f(x,u))}}, V0 = min{l,g}
std::pair<ValueTable, SolveReport> solve_reach(const FiniteMdp& mdp,
                                               const LabelTable& l);
std::pair<ValueTable, SolveReport> solve_avoid(const FiniteMdp& mdp,
                                               const LabelTable& g);
std::pair<ValueTable, SolveReport> solve_reach_avoid(const FiniteMdp& mdp,
                                                     const LabelTable& l,
                                                     const LabelTable& g);

// Discounted gamma-contractions, solved to sup-residual <= 1e-12 (or the
// a-priori sweep cap derived from the contraction modulus).
//
// reach:       V(x) = (1-g)l(x)        + g max{l(x), max_u V(f(x,u))}
// avoid:       V(x) = (1-g)g(x)        + g min{g(x), max_u V(f(x,u))}
// reach-avoid: V(x) = (1-g)min{l,g}(x) + g min{g(x), max{l(x), max_u V}}
std::pair<ValueTable, SolveReport> solve_reach_gamma(const FiniteMdp& mdp,
                                                     const LabelTable& l,
                                                     double gamma);
std::pair<ValueTable, SolveReport> solve_avoid_gamma(const FiniteMdp& mdp,
                                                     const LabelTable& g,
                                                     double gamma);
std::pair<ValueTable, SolveReport> solve_reach_avoid_gamma(const FiniteMdp& mdp,
                                                           const LabelTable& l,
                                                           const LabelTable& g,
                                                           double gamma);

/// Discounted expectation-over-policy reach-avoid evaluation:
///   V(x) = (1-gamma) min{l(x),g(x)}
///        + gamma E_{u~pi}[ min{g(x), max{l(x), V(f(x,u))}} ]
/// Unique fixed point for gamma in [0,1).
ValueTable evaluate_srabe(const FiniteMdp& mdp, const StochasticPolicy& pi,
                          const LabelTable& l, const LabelTable& g,
                          double gamma);

/// Problem selector for residual checks.
enum class ProblemKind { Reach, Avoid, ReachAvoid };

/// Sup-norm distance between V and one application of the named backup.
/// With gamma absent the undiscounted recursion is checked.
double bellman_residual(const FiniteMdp& mdp, const ValueTable& v,
                        ProblemKind kind, const LabelTable& l,
                        const LabelTable& g,
                        std::optional<double> gamma = std::nullopt);

}  // namespace hjr
