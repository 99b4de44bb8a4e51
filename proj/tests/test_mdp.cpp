#include <doctest.h>

#include <fstream>
#include <set>
#include <vector>

#include "hjr/json_io.hpp"
#include "hjr/mdp.hpp"

using namespace hjr;

namespace {

// Breadth-first reachable augmented states from the per-base initializations.
std::set<int> reachable_aug(const AugmentedMdp& aug,
                            const std::vector<int>& starts) {
  std::set<int> seen;
  std::vector<int> stack(starts);
  while (!stack.empty()) {
    const int s = stack.back();
    stack.pop_back();
    if (!seen.insert(s).second) continue;
    for (int a = 0; a < aug.base.num_actions; ++a)
      stack.push_back(aug.successor(s, a));
  }
  return seen;
}

}  // namespace

TEST_CASE("FiniteMdp validation rejects broken tables") {
  FiniteMdp mdp{2, 1, {0, 2}};  // successor 2 out of range
  CHECK_THROWS_AS(mdp.validate(), std::invalid_argument);
  FiniteMdp short_table{2, 2, {0, 1, 0}};
  CHECK_THROWS_AS(short_table.validate(), std::invalid_argument);
  CHECK_THROWS_AS(build_augmented(FiniteMdp{1, 1, {0}}, {0.5}, {0.3, 0.1},
                                  Objective::RAA),
                  std::invalid_argument);
}

TEST_CASE("augmented product of a self-loop is a single self-loop") {
  const FiniteMdp mdp{1, 1, {0}};
  const AugmentedMdp aug = build_augmented(mdp, {0.5}, {0.3}, Objective::RAA);
  CHECK(aug.num_aug_states() == 1);
  CHECK(aug.y_values == std::vector<double>{0.5});
  CHECK(aug.z_values == std::vector<double>{0.3});
  CHECK(aug.successor(0, 0) == 0);
  CHECK(aug.initial_state(0) == 0);
}

TEST_CASE("running max of the reward jumps along a chain") {
  // 0 -> 1 under both actions, 1 absorbing.
  const FiniteMdp mdp{2, 2, {1, 1, 1, 1}};
  const AugmentedMdp aug = build_augmented(mdp, {-1, 1}, {1, 1}, Objective::RAA);
  const int start = aug.initial_state(0);
  auto [x0, y0, z0] = aug.unpack(start);
  CHECK(x0 == 0);
  CHECK(aug.y_values[y0] == -1);
  CHECK(aug.z_values[z0] == 1);
  const std::set<int> seen = reachable_aug(aug, {start});
  CHECK(seen.size() == 2);
  const int next = aug.successor(start, 0);
  auto [x1, y1, z1] = aug.unpack(next);
  CHECK(x1 == 1);
  CHECK(aug.y_values[y1] == 1);
  CHECK(aug.z_values[z1] == 1);
}

TEST_CASE("cone fixture product stays within the state bound") {
  auto [mdp, l1, l2] = fixture_rr_cone();
  const AugmentedMdp aug = build_augmented(mdp, l1, l2, Objective::RR);
  CHECK(aug.num_aug_states() <=
        mdp.num_states * static_cast<int>(aug.y_values.size()) *
            static_cast<int>(aug.z_values.size()));
  std::vector<int> starts;
  for (int x = 0; x < mdp.num_states; ++x) starts.push_back(aug.initial_state(x));
  const std::set<int> seen = reachable_aug(aug, starts);
  CHECK(!seen.empty());
  CHECK(static_cast<int>(seen.size()) <= aug.num_aug_states());
  // From M both targets are eventually marked: some reachable state has
  // y = 1 and z = 1.
  bool both = false;
  for (int s : reachable_aug(aug, {aug.initial_state(0)})) {
    auto [x, yi, zi] = aug.unpack(s);
    (void)x;
    if (aug.y_values[yi] == 1 && aug.z_values[zi] == 1) both = true;
  }
  CHECK(both);
}

TEST_CASE("augmented trajectories have monotone extrema that stabilize") {
  for (std::uint64_t seed = 10; seed < 40; ++seed) {
    auto [mdp, labels] = random_mdp(seed, 5, 2, 2);
    for (Objective mode : {Objective::RAA, Objective::RR}) {
      const AugmentedMdp aug = build_augmented(mdp, labels[0], labels[1], mode);
      SplitMix64 rng(seed * 77 + 1);
      int s = aug.initial_state(static_cast<int>(rng.below(mdp.num_states)));
      int y_changes = 0, z_changes = 0;
      for (int t = 0; t < 200; ++t) {
        auto [x, yi, zi] = aug.unpack(s);
        const int a = static_cast<int>(rng.below(mdp.num_actions));
        const int s2 = aug.successor(s, a);
        auto [x2, yi2, zi2] = aug.unpack(s2);
        CHECK(x2 == mdp.successor(x, a));  // projection onto the base
        REQUIRE(aug.y_values[yi2] >= aug.y_values[yi]);
        if (mode == Objective::RAA)
          REQUIRE(aug.z_values[zi2] <= aug.z_values[zi]);
        else
          REQUIRE(aug.z_values[zi2] >= aug.z_values[zi]);
        y_changes += yi2 != yi;
        z_changes += zi2 != zi;
        s = s2;
      }
      CHECK(y_changes + z_changes <= static_cast<int>(aug.y_values.size() +
                                                      aug.z_values.size()));
    }
  }
}

TEST_CASE("random_mdp is deterministic and matches the frozen stream") {
  auto [mdp_a, labels_a] = random_mdp(42, 6, 3, 2);
  auto [mdp_b, labels_b] = random_mdp(42, 6, 3, 2);
  CHECK(mdp_a.next == mdp_b.next);
  CHECK(labels_a[0] == labels_b[0]);
  CHECK(labels_a[1] == labels_b[1]);

  auto [tiny, tiny_labels] = random_mdp(0, 1, 1, 1);
  CHECK(tiny.next == std::vector<int>{0});
  CHECK(tiny_labels[0][0] >= -3);
  CHECK(tiny_labels[0][0] <= 3);

  // Golden instance recorded once from the reference splitmix64 stream.
  auto [golden_mdp, golden_labels] =
      load_mdp_file(std::string(TEST_DATA_DIR) + "/random_mdp_seed1_5x2.json");
  auto [mdp, labels] = random_mdp(1, 5, 2, 2);
  CHECK(mdp.num_states == golden_mdp.num_states);
  CHECK(mdp.num_actions == golden_mdp.num_actions);
  CHECK(mdp.next == golden_mdp.next);
  CHECK(labels[0] == golden_labels.l);
  CHECK(labels[1] == golden_labels.g);
}

TEST_CASE("fixture shapes and label values") {
  auto [cone, c1, c2] = fixture_rr_cone();
  cone.validate();
  CHECK(cone.num_states == 3);
  CHECK(c1 == LabelTable{-1, 1, -1});
  CHECK(c2 == LabelTable{-1, -1, 1});

  auto [pinata, pl, pg] = fixture_raa_pinata();
  pinata.validate();
  CHECK(pinata.successor(0, 0) == 1);
  CHECK(pinata.successor(0, 1) == 2);
  CHECK(pinata.successor(1, 0) == 1);
  CHECK(pl == LabelTable{-1, 1, -1});
  CHECK(pg == LabelTable{1, -1, 1});

  auto [doomed, dl, dg] = fixture_raa_doomed_goal();
  doomed.validate();
  CHECK(doomed.successor(0, 0) == 0);
  CHECK(doomed.successor(0, 1) == 1);
  CHECK(doomed.successor(1, 0) == 2);
  CHECK(dl == LabelTable{-1, 1, -1});
  CHECK(dg == LabelTable{1, 1, -1});

  auto [river, r1, r2] = fixture_rr_river_islands();
  river.validate();
  CHECK(river.num_states == 4);
  CHECK(r1 == LabelTable{-1, 1, -1, -1});
  CHECK(r2 == LabelTable{-1, -1, 1, -1});
}
