#pragma once

#include <span>

#include "hjr/mdp.hpp"
#include "hjr/solvers.hpp"

namespace hjr {

enum class BaselineAt { SegmentStart, SegmentEnd };

struct AdvantageConfig {
  double gamma = 0.99;   // discount, in [0,1)
  double lambda = 0.95;  // advantage weight, in [0,1)
  BaselineAt baseline_at = BaselineAt::SegmentStart;
};

// Discounted one-step backups.
double backup_r(double lx, double q, double gamma);
double backup_a(double gx, double q, double gamma);
double backup_ra(double lx, double gx, double q, double gamma);

/// n-fold reach-avoid reduction over (l_0, g_0, ..., l_{n-1}, g_{n-1}, tail):
/// the one-pair case equals backup_ra, and each extra pair nests another
/// backup around the tail. The argument count must be odd.
double phi_ra(std::span<const double> args, double gamma);

/// k-step advantage of a trajectory segment: the k-fold reduction of the
/// stage values against the tail value V(x_{t+k}), minus the configured
/// baseline (V at the segment start or at the segment end).
double k_step_advantage(std::span<const int> states, const LabelTable& l,
                        const LabelTable& g, const ValueTable& v, int k,
                        const AdvantageConfig& config);

/// Truncated lambda-weighted advantage:
/// (1/(1-lambda)) * sum_{k=1..horizon} lambda^k A^(k).
double gae(std::span<const int> states, const LabelTable& l,
           const LabelTable& g, const ValueTable& v, int horizon,
           const AdvantageConfig& config);

}  // namespace hjr
