#include "hjr/advantage.hpp"

#include <algorithm>
#include <stdexcept>

namespace hjr {

namespace {

void check_gamma(double gamma) {
  if (gamma < 0.0 || gamma >= 1.0)
    throw std::invalid_argument("discount factor must lie in [0,1)");
}

}  // namespace

double backup_r(double lx, double q, double gamma) {
  check_gamma(gamma);
  return (1.0 - gamma) * lx + gamma * std::max(lx, q);
}

double backup_a(double gx, double q, double gamma) {
  check_gamma(gamma);
  return (1.0 - gamma) * gx + gamma * std::min(gx, q);
}

double backup_ra(double lx, double gx, double q, double gamma) {
  check_gamma(gamma);
  return (1.0 - gamma) * std::min(lx, gx) +
         gamma * std::min(gx, std::max(lx, q));
}

double phi_ra(std::span<const double> args, double gamma) {
  check_gamma(gamma);
  if (args.empty() || args.size() % 2 == 0)
    throw std::invalid_argument("phi_ra: argument count must be odd");
  double acc = args.back();
  for (std::size_t pair = args.size() / 2; pair-- > 0;)
    acc = backup_ra(args[2 * pair], args[2 * pair + 1], acc, gamma);
  return acc;
}

double k_step_advantage(std::span<const int> states, const LabelTable& l,
                        const LabelTable& g, const ValueTable& v, int k,
                        const AdvantageConfig& config) {
  if (k < 1) throw std::invalid_argument("k_step_advantage: k must be >= 1");
  if (states.size() < static_cast<std::size_t>(k) + 1)
    throw std::invalid_argument("k_step_advantage: segment shorter than k+1");
  std::vector<double> args;
  args.reserve(2 * k + 1);
  for (int t = 0; t < k; ++t) {
    args.push_back(l[states[t]]);
    args.push_back(g[states[t]]);
  }
  args.push_back(v[states[k]]);
  const double reduced = phi_ra(args, config.gamma);
  const double baseline = config.baseline_at == BaselineAt::SegmentStart
                              ? v[states[0]]
                              : v[states[k]];
  return reduced - baseline;
}

double gae(std::span<const int> states, const LabelTable& l,
           const LabelTable& g, const ValueTable& v, int horizon,
           const AdvantageConfig& config) {
  if (config.lambda < 0.0 || config.lambda >= 1.0)
    throw std::invalid_argument("gae: lambda must lie in [0,1)");
  if (horizon < 1 || states.size() < static_cast<std::size_t>(horizon) + 1)
    throw std::invalid_argument("gae: segment shorter than the horizon");
  double sum = 0.0;
  double weight = 1.0;
  for (int k = 1; k <= horizon; ++k) {
    weight *= config.lambda;
    if (weight == 0.0) break;  // lambda = 0 contributes nothing
    sum += weight * k_step_advantage(states, l, g, v, k, config);
  }
  return sum / (1.0 - config.lambda);
}

}  // namespace hjr
