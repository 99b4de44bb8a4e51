#pragma once

#include "hjr/mdp.hpp"
#include "hjr/solvers.hpp"

namespace hjr {

/// Output of the avoid / clipped-reward / reach-avoid pipeline for the
/// reach-always-avoid problem.
struct RaaSolution {
  ValueTable v_avoid;   // optimal avoid value of g
  LabelTable tilde_l;   // min{l, v_avoid}, the reward clipped by avoidability
  ValueTable v_raa;     // reach-avoid fixed point of (tilde_l, g)
  SolveReport report_avoid;
  SolveReport report_raa;
};

/// Output of the three-reach pipeline for the reach-reach problem.
struct RrSolution {
  ValueTable v_r1;    // reach value of l1
  ValueTable v_r2;    // reach value of l2
  LabelTable hat_l;   // max{min{l1, v_r2}, min{l2, v_r1}}, the frontier reward
  ValueTable v_rr;    // reach fixed point of hat_l
  SolveReport report_r1;
  SolveReport report_r2;
  SolveReport report_rr;
};

/// Solves the RAA problem by decomposition: avoid solve, reward clipping,
/// reach-avoid solve. v_raa restricted to base states equals the optimal
/// augmented value started from (x, l(x), g(x)).
RaaSolution compose_raa(const FiniteMdp& mdp, const LabelTable& l,
                        const LabelTable& g);

/// Solves the RR problem by decomposition: two reach solves, frontier
/// reward, third reach solve.
RrSolution compose_rr(const FiniteMdp& mdp, const LabelTable& l1,
                      const LabelTable& l2);

/// Sup-norm residual of V against
///   V(x) = min{g(x), max{tilde_l(x), max_u V(f(x,u))}};
/// zero exactly on compose_raa output.
double raa_bellman_residual(const FiniteMdp& mdp, const LabelTable& tilde_l,
                            const LabelTable& g, const ValueTable& v);

/// Sup-norm residual of V against V(x) = max{hat_l(x), max_u V(f(x,u))}.
double rr_bellman_residual(const FiniteMdp& mdp, const LabelTable& hat_l,
                           const ValueTable& v);

/// Residual of the alternative single-equation RAA recursion
///   V(x) = min{g(x), max{min{l(x), v_avoid(x)}, max_u V(f(x,u))}}.
double raa_direct_residual(const FiniteMdp& mdp, const LabelTable& l,
                           const LabelTable& g, const ValueTable& v_avoid,
                           const ValueTable& v);

}  // namespace hjr
