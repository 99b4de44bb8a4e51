#include "hjr/mdp.hpp"

#include <algorithm>
#include <cmath>

namespace hjr {

const char* objective_name(Objective obj) {
  switch (obj) {
    case Objective::R: return "R";
    case Objective::A: return "A";
    case Objective::RA: return "RA";
    case Objective::RAA: return "RAA";
    case Objective::RR: return "RR";
  }
  return "?";
}

void FiniteMdp::validate() const {
  if (num_states <= 0 || num_actions <= 0)
    throw std::invalid_argument("FiniteMdp: state and action counts must be positive");
  if (next.size() != static_cast<std::size_t>(num_states) * num_actions)
    throw std::invalid_argument("FiniteMdp: transition table has wrong size");
  for (int succ : next)
    if (succ < 0 || succ >= num_states)
      throw std::invalid_argument("FiniteMdp: successor index out of range");
}

void check_label_sizes(const FiniteMdp& mdp, const LabelTable& labels,
                       const std::string& name) {
  if (labels.size() != static_cast<std::size_t>(mdp.num_states))
    throw std::invalid_argument("label table '" + name + "' has " +
                                std::to_string(labels.size()) + " entries, expected " +
                                std::to_string(mdp.num_states));
  for (double v : labels)
    if (!std::isfinite(v))
      throw std::invalid_argument("label table '" + name + "' contains a non-finite value");
}

std::pair<double, double> augment_step(Objective mode, double y, double z,
                                       double la_next, double lb_next) {
  const double y2 = std::max(la_next, y);
  const double z2 = mode == Objective::RR ? std::max(lb_next, z)
                                          : std::min(lb_next, z);
  return {y2, z2};
}

namespace {

std::vector<double> sorted_unique(const LabelTable& labels) {
  std::vector<double> vals(labels.begin(), labels.end());
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals;
}

int index_in(const std::vector<double>& sorted_vals, double v) {
  auto it = std::lower_bound(sorted_vals.begin(), sorted_vals.end(), v);
  // All queried values come from min/max closures of the table entries.
  return static_cast<int>(it - sorted_vals.begin());
}

}  // namespace

int AugmentedMdp::initial_state(int x) const {
  return index_of(x, index_in(y_values, label_a[x]), index_in(z_values, label_b[x]));
}

AugmentedMdp build_augmented(const FiniteMdp& mdp, const LabelTable& label_a,
                             const LabelTable& label_b, Objective mode) {
  if (mode != Objective::RAA && mode != Objective::RR)
    throw std::invalid_argument("build_augmented: mode must be RAA or RR");
  mdp.validate();
  check_label_sizes(mdp, label_a, "label_a");
  check_label_sizes(mdp, label_b, "label_b");

  AugmentedMdp aug;
  aug.base = mdp;
  aug.mode = mode;
  aug.label_a = label_a;
  aug.label_b = label_b;
  aug.y_values = sorted_unique(label_a);
  aug.z_values = sorted_unique(label_b);

  const int yn = static_cast<int>(aug.y_values.size());
  const int zn = static_cast<int>(aug.z_values.size());
  aug.next_aug.resize(static_cast<std::size_t>(mdp.num_states) * yn * zn *
                      mdp.num_actions);
  for (int x = 0; x < mdp.num_states; ++x) {
    for (int yi = 0; yi < yn; ++yi) {
      for (int zi = 0; zi < zn; ++zi) {
        const int s = aug.index_of(x, yi, zi);
        for (int a = 0; a < mdp.num_actions; ++a) {
          const int x2 = mdp.successor(x, a);
          auto [y2, z2] = augment_step(mode, aug.y_values[yi], aug.z_values[zi],
                                       label_a[x2], label_b[x2]);
          aug.next_aug[static_cast<std::size_t>(s) * mdp.num_actions + a] =
              aug.index_of(x2, index_in(aug.y_values, y2),
                           index_in(aug.z_values, z2));
        }
      }
    }
  }
  return aug;
}

namespace {

FiniteMdp make_mdp(int num_states, int num_actions, std::vector<int> next) {
  FiniteMdp mdp{num_states, num_actions, std::move(next)};
  mdp.validate();
  return mdp;
}

}  // namespace

std::tuple<FiniteMdp, LabelTable, LabelTable> fixture_rr_cone() {
  // States M=0, L=1, R=2; from M action a goes left, b goes right; the side
  // states return to M under both actions.
  FiniteMdp mdp = make_mdp(3, 2, {1, 2, 0, 0, 0, 0});
  return {mdp, {-1, 1, -1}, {-1, -1, 1}};
}

std::tuple<FiniteMdp, LabelTable, LabelTable> fixture_raa_pinata() {
  FiniteMdp mdp = make_mdp(3, 2, {1, 2, 1, 1, 2, 2});
  return {mdp, {-1, 1, -1}, {1, -1, 1}};
}

std::tuple<FiniteMdp, LabelTable, LabelTable> fixture_raa_doomed_goal() {
  FiniteMdp mdp = make_mdp(3, 2, {0, 1, 2, 2, 2, 2});
  return {mdp, {-1, 1, -1}, {1, 1, -1}};
}

std::tuple<FiniteMdp, LabelTable, LabelTable> fixture_rr_river_islands() {
  // S=0, W=1, E=2, D=3; the current is one-way: both islands empty into D.
  FiniteMdp mdp = make_mdp(4, 2, {1, 2, 3, 3, 3, 3, 3, 3});
  return {mdp, {-1, 1, -1, -1}, {-1, -1, 1, -1}};
}

std::tuple<FiniteMdp, std::vector<LabelTable>> random_mdp(std::uint64_t seed,
                                                          int num_states,
                                                          int num_actions,
                                                          int label_count) {
  if (num_states < 1 || num_actions < 1)
    throw std::invalid_argument("random_mdp: state and action counts must be >= 1");
  if (label_count < 1 || label_count > 2)
    throw std::invalid_argument("random_mdp: label_count must be 1 or 2");

  SplitMix64 rng(seed);
  FiniteMdp mdp;
  mdp.num_states = num_states;
  mdp.num_actions = num_actions;
  mdp.next.resize(static_cast<std::size_t>(num_states) * num_actions);
  for (auto& succ : mdp.next)
    succ = static_cast<int>(rng.below(static_cast<std::uint64_t>(num_states)));

  std::vector<LabelTable> labels(label_count);
  for (auto& table : labels) {
    table.resize(num_states);
    for (auto& v : table)
      v = static_cast<double>(static_cast<int>(rng.below(7)) - 3);
  }
  return {mdp, labels};
}

}  // namespace hjr
