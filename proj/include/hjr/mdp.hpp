#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace hjr {

/// The five objective kinds handled by this library.
///   R   - maximize the best reward seen over time
///   A   - maximize the worst penalty margin seen over time
///   RA  - reach without any prior hazard entry
///   RAA - reach and keep the hazard margin positive forever
///   RR  - attain both reward thresholds, in either order
enum class Objective { R, A, RA, RAA, RR };

const char* objective_name(Objective obj);

/// One real label value per state (a reward or penalty-margin function).
using LabelTable = std::vector<double>;

/// The named label functions an instance may carry; unused ones stay empty.
/// l/g feed the RA and RAA problems, l1/l2 the RR problem.
struct LabelSet {
  LabelTable l, g, l1, l2;
};

/// Per-state action choice.
using StationaryPolicy = std::vector<int>;

/// Finite deterministic MDP: next[s*num_actions + a] is the successor of
/// state s under action a. The transition function is total.
struct FiniteMdp {
  int num_states = 0;
  int num_actions = 0;
  std::vector<int> next;  // dense, row-major [state][action]

  int successor(int state, int action) const {
    return next[static_cast<std::size_t>(state) * num_actions + action];
  }

  /// Throws std::invalid_argument if sizes or successor indices are broken.
  void validate() const;
};

/// Throws unless `labels` has exactly one entry per state, all finite.
void check_label_sizes(const FiniteMdp& mdp, const LabelTable& labels,
                       const std::string& name);

/// Product of a base MDP with the running extrema of two label functions.
/// Augmented states are (x, y_idx, z_idx) flattened row-major; y tracks the
/// running max of the first label, z the running min (RAA) or running max
/// (RR) of the second.
struct AugmentedMdp {
  FiniteMdp base;
  Objective mode = Objective::RAA;  // RAA or RR
  std::vector<double> y_values;     // sorted, deduplicated image of label a
  std::vector<double> z_values;     // sorted, deduplicated image of label b
  std::vector<double> label_a;      // per base state
  std::vector<double> label_b;
  std::vector<int> next_aug;        // [aug_state][action] -> aug successor

  int num_aug_states() const {
    return base.num_states * static_cast<int>(y_values.size()) *
           static_cast<int>(z_values.size());
  }
  int index_of(int x, int y_idx, int z_idx) const {
    return (x * static_cast<int>(y_values.size()) + y_idx) *
               static_cast<int>(z_values.size()) +
           z_idx;
  }
  std::tuple<int, int, int> unpack(int aug_state) const {
    const int zn = static_cast<int>(z_values.size());
    const int yn = static_cast<int>(y_values.size());
    return {aug_state / (yn * zn), (aug_state / zn) % yn, aug_state % zn};
  }
  int successor(int aug_state, int action) const {
    return next_aug[static_cast<std::size_t>(aug_state) * base.num_actions +
                    action];
  }
  /// Augmented state for base state x before any transition: y = a(x), z = b(x).
  int initial_state(int x) const;
};

/// Per-augmented-state action choice, laid out like AugmentedMdp::next_aug.
struct AugmentedPolicy {
  std::vector<double> y_values;
  std::vector<double> z_values;
  std::vector<int> actions;  // flattened (x, y_idx, z_idx) row-major
};

/// Builds the dense augmented product for mode RAA or RR.
AugmentedMdp build_augmented(const FiniteMdp& mdp, const LabelTable& label_a,
                             const LabelTable& label_b, Objective mode);

/// Applies one augmentation step to the running extrema (y, z) given the
/// labels of the state just entered.
std::pair<double, double> augment_step(Objective mode, double y, double z,
                                       double la_next, double lb_next);

// --- fixtures -------------------------------------------------------------

/// Two-target MDP where any memoryless policy reaches only one target:
/// middle state M with actions to L and R, both returning to M.
std::tuple<FiniteMdp, LabelTable, LabelTable> fixture_rr_cone();

/// Reaching the reward forces a future penalty: from 0, action a enters the
/// absorbing reward/hazard state 1, action b the absorbing safe state 2.
std::tuple<FiniteMdp, LabelTable, LabelTable> fixture_raa_pinata();

/// The goal state is reachable but every continuation from it is doomed.
std::tuple<FiniteMdp, LabelTable, LabelTable> fixture_raa_doomed_goal();

/// Four-state one-way river: start S can head to island W or E, both lead to
/// the absorbing downstream state D; only one island per trajectory.
std::tuple<FiniteMdp, LabelTable, LabelTable> fixture_rr_river_islands();

// --- seeded random instances ----------------------------------------------

/// splitmix64 stream (Vigna's reference constants); used for all seeded
/// generation so instances are reproducible across implementations.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  /// Uniform in [0, n) by modulo reduction (documented draw rule).
  std::uint64_t below(std::uint64_t n) { return next() % n; }
};

/// Deterministic random instance. Draw order: all successor entries
/// row-major (state outer, action inner), then each label table in turn,
/// entries uniform integers in {-3,...,3}.
std::tuple<FiniteMdp, std::vector<LabelTable>> random_mdp(std::uint64_t seed,
                                                          int num_states,
                                                          int num_actions,
                                                          int label_count);

}  // namespace hjr
