#include "hjr/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace hjr {

namespace {

constexpr double kDiscountedTol = 1e-12;

double max_successor_value(const FiniteMdp& mdp, const ValueTable& v, int x) {
  double best = v[mdp.successor(x, 0)];
  for (int a = 1; a < mdp.num_actions; ++a)
    best = std::max(best, v[mdp.successor(x, a)]);
  return best;
}

// One Jacobi sweep of `backup` against the previous table; every state reads
// only `prev`, so the result is independent of enumeration order.
template <typename Backup>
ValueTable sweep(const FiniteMdp& mdp, const ValueTable& prev, Backup&& backup) {
  ValueTable out(prev.size());
  for (int x = 0; x < mdp.num_states; ++x)
    out[x] = backup(x, max_successor_value(mdp, prev, x));
  return out;
}

template <typename Backup>
std::pair<ValueTable, SolveReport> solve_exact(const FiniteMdp& mdp,
                                               ValueTable v0, Backup&& backup) {
  ValueTable v = std::move(v0);
  SolveReport report;
  for (;;) {
    ValueTable v2 = sweep(mdp, v, backup);
    ++report.sweeps;
    if (v2 == v) break;  // values live in a finite min/max lattice
    v = std::move(v2);
  }
  report.residual = 0.0;
  report.converged = true;
  return {v, report};
}

int discounted_sweep_cap(double gamma, double label_range) {
  if (gamma == 0.0 || label_range <= kDiscountedTol) return 1;
  return static_cast<int>(
             std::ceil(std::log(kDiscountedTol / label_range) / std::log(gamma))) +
         1;
}

double range_of(const LabelTable& labels) {
  auto [lo, hi] = std::minmax_element(labels.begin(), labels.end());
  return *hi - *lo;
}

double range_of(const LabelTable& a, const LabelTable& b) {
  auto [alo, ahi] = std::minmax_element(a.begin(), a.end());
  auto [blo, bhi] = std::minmax_element(b.begin(), b.end());
  return std::max(*ahi, *bhi) - std::min(*alo, *blo);
}

template <typename Backup>
std::pair<ValueTable, SolveReport> solve_discounted(const FiniteMdp& mdp,
                                                    ValueTable v0, double gamma,
                                                    double label_range,
                                                    Backup&& backup) {
  if (gamma < 0.0 || gamma >= 1.0)
    throw std::invalid_argument("discount factor must lie in [0,1)");
  const int cap = discounted_sweep_cap(gamma, label_range);
  ValueTable v = std::move(v0);
  SolveReport report;
  do {
    ValueTable v2 = sweep(mdp, v, backup);
    ++report.sweeps;
    report.residual = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      report.residual = std::max(report.residual, std::abs(v2[i] - v[i]));
    v = std::move(v2);
  } while (report.residual > kDiscountedTol && report.sweeps < cap);
  report.converged = report.residual <= kDiscountedTol;
  return {v, report};
}

ValueTable pointwise_min(const LabelTable& a, const LabelTable& b) {
  ValueTable out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::min(a[i], b[i]);
  return out;
}

}  // namespace

void StochasticPolicy::validate(const FiniteMdp& mdp) const {
  if (num_actions != mdp.num_actions ||
      probs.size() != static_cast<std::size_t>(mdp.num_states) * num_actions)
    throw std::invalid_argument("StochasticPolicy: wrong shape for this MDP");
  for (int x = 0; x < mdp.num_states; ++x) {
    double sum = 0.0;
    for (int a = 0; a < num_actions; ++a) {
      const double p = prob(x, a);
      if (!(p >= 0.0))
        throw std::invalid_argument("StochasticPolicy: negative probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("StochasticPolicy: row does not sum to 1");
  }
}

std::pair<ValueTable, SolveReport> solve_reach(const FiniteMdp& mdp,
                                               const LabelTable& l) {
  mdp.validate();
  check_label_sizes(mdp, l, "l");
  return solve_exact(mdp, l, [&](int x, double q) { return std::max(l[x], q); });
}

std::pair<ValueTable, SolveReport> solve_avoid(const FiniteMdp& mdp,
                                               const LabelTable& g) {
  mdp.validate();
  check_label_sizes(mdp, g, "g");
  return solve_exact(mdp, g, [&](int x, double q) { return std::min(g[x], q); });
}

std::pair<ValueTable, SolveReport> solve_reach_avoid(const FiniteMdp& mdp,
                                                     const LabelTable& l,
                                                     const LabelTable& g) {
  mdp.validate();
  check_label_sizes(mdp, l, "l");
  check_label_sizes(mdp, g, "g");
  return solve_exact(mdp, pointwise_min(l, g), [&](int x, double q) {
    return std::min(g[x], std::max(l[x], q));
  });
}

std::pair<ValueTable, SolveReport> solve_reach_gamma(const FiniteMdp& mdp,
                                                     const LabelTable& l,
                                                     double gamma) {
  mdp.validate();
  check_label_sizes(mdp, l, "l");
  return solve_discounted(mdp, l, gamma, range_of(l), [&](int x, double q) {
    return (1.0 - gamma) * l[x] + gamma * std::max(l[x], q);
  });
}

std::pair<ValueTable, SolveReport> solve_avoid_gamma(const FiniteMdp& mdp,
                                                     const LabelTable& g,
                                                     double gamma) {
  mdp.validate();
  check_label_sizes(mdp, g, "g");
  return solve_discounted(mdp, g, gamma, range_of(g), [&](int x, double q) {
    return (1.0 - gamma) * g[x] + gamma * std::min(g[x], q);
  });
}

std::pair<ValueTable, SolveReport> solve_reach_avoid_gamma(const FiniteMdp& mdp,
                                                           const LabelTable& l,
                                                           const LabelTable& g,
                                                           double gamma) {
  mdp.validate();
  check_label_sizes(mdp, l, "l");
  check_label_sizes(mdp, g, "g");
  const double range = range_of(l, g);
  return solve_discounted(
      mdp, pointwise_min(l, g), gamma, range, [&](int x, double q) {
        return (1.0 - gamma) * std::min(l[x], g[x]) +
               gamma * std::min(g[x], std::max(l[x], q));
      });
}

ValueTable evaluate_srabe(const FiniteMdp& mdp, const StochasticPolicy& pi,
                          const LabelTable& l, const LabelTable& g,
                          double gamma) {
  if (gamma < 0.0 || gamma >= 1.0)
    throw std::invalid_argument("discount factor must lie in [0,1)");
  mdp.validate();
  check_label_sizes(mdp, l, "l");
  check_label_sizes(mdp, g, "g");
  pi.validate(mdp);

  const int cap = discounted_sweep_cap(gamma, range_of(l, g));
  ValueTable v = pointwise_min(l, g);
  for (int sweeps = 0; sweeps < cap; ++sweeps) {
    ValueTable v2(v.size());
    for (int x = 0; x < mdp.num_states; ++x) {
      double expect = 0.0;
      for (int a = 0; a < mdp.num_actions; ++a)
        expect += pi.prob(x, a) *
                  std::min(g[x], std::max(l[x], v[mdp.successor(x, a)]));
      v2[x] = (1.0 - gamma) * std::min(l[x], g[x]) + gamma * expect;
    }
    double residual = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      residual = std::max(residual, std::abs(v2[i] - v[i]));
    v = std::move(v2);
    if (residual <= kDiscountedTol) break;
  }
  return v;
}

double bellman_residual(const FiniteMdp& mdp, const ValueTable& v,
                        ProblemKind kind, const LabelTable& l,
                        const LabelTable& g, std::optional<double> gamma) {
  if (v.size() != static_cast<std::size_t>(mdp.num_states))
    throw std::invalid_argument("bellman_residual: value table has wrong size");
  if (kind != ProblemKind::Avoid) check_label_sizes(mdp, l, "l");
  if (kind != ProblemKind::Reach) check_label_sizes(mdp, g, "g");
  auto backup = [&](int x, double q) -> double {
    switch (kind) {
      case ProblemKind::Reach:
        return gamma ? (1.0 - *gamma) * l[x] + *gamma * std::max(l[x], q)
                     : std::max(l[x], q);
      case ProblemKind::Avoid:
        return gamma ? (1.0 - *gamma) * g[x] + *gamma * std::min(g[x], q)
                     : std::min(g[x], q);
      case ProblemKind::ReachAvoid:
        return gamma ? (1.0 - *gamma) * std::min(l[x], g[x]) +
                           *gamma * std::min(g[x], std::max(l[x], q))
                     : std::min(g[x], std::max(l[x], q));
    }
    return 0.0;
  };
  double worst = 0.0;
  for (int x = 0; x < mdp.num_states; ++x)
    worst = std::max(worst,
                     std::abs(v[x] - backup(x, max_successor_value(mdp, v, x))));
  return worst;
}

}  // namespace hjr
