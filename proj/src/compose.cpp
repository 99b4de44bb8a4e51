#include "hjr/compose.hpp"

#include <algorithm>
#include <cmath>

namespace hjr {

RaaSolution compose_raa(const FiniteMdp& mdp, const LabelTable& l,
                        const LabelTable& g) {
  check_label_sizes(mdp, l, "l");
  RaaSolution out;
  std::tie(out.v_avoid, out.report_avoid) = solve_avoid(mdp, g);
  out.tilde_l.resize(l.size());
  for (std::size_t i = 0; i < l.size(); ++i)
    out.tilde_l[i] = std::min(l[i], out.v_avoid[i]);
  std::tie(out.v_raa, out.report_raa) = solve_reach_avoid(mdp, out.tilde_l, g);
  return out;
}

RrSolution compose_rr(const FiniteMdp& mdp, const LabelTable& l1,
                      const LabelTable& l2) {
  RrSolution out;
  std::tie(out.v_r1, out.report_r1) = solve_reach(mdp, l1);
  std::tie(out.v_r2, out.report_r2) = solve_reach(mdp, l2);
  out.hat_l.resize(l1.size());
  for (std::size_t i = 0; i < l1.size(); ++i)
    out.hat_l[i] = std::max(std::min(l1[i], out.v_r2[i]),
                            std::min(l2[i], out.v_r1[i]));
  std::tie(out.v_rr, out.report_rr) = solve_reach(mdp, out.hat_l);
  return out;
}

double raa_bellman_residual(const FiniteMdp& mdp, const LabelTable& tilde_l,
                            const LabelTable& g, const ValueTable& v) {
  return bellman_residual(mdp, v, ProblemKind::ReachAvoid, tilde_l, g);
}

double rr_bellman_residual(const FiniteMdp& mdp, const LabelTable& hat_l,
                           const ValueTable& v) {
  return bellman_residual(mdp, v, ProblemKind::Reach, hat_l, {});
}

double raa_direct_residual(const FiniteMdp& mdp, const LabelTable& l,
                           const LabelTable& g, const ValueTable& v_avoid,
                           const ValueTable& v) {
  check_label_sizes(mdp, l, "l");
  check_label_sizes(mdp, g, "g");
  double worst = 0.0;
  for (int x = 0; x < mdp.num_states; ++x) {
    double best = v[mdp.successor(x, 0)];
    for (int a = 1; a < mdp.num_actions; ++a)
      best = std::max(best, v[mdp.successor(x, a)]);
    const double backup =
        std::min(g[x], std::max(std::min(l[x], v_avoid[x]), best));
    worst = std::max(worst, std::abs(v[x] - backup));
  }
  return worst;
}

}  // namespace hjr
