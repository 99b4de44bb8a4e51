#include "hjr/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "hjr/compose.hpp"
#include "hjr/json_io.hpp"
#include "hjr/oracle.hpp"
#include "hjr/policy.hpp"
#include "hjr/solvers.hpp"

namespace hjr {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Objective parse_problem(const std::string& name) {
  if (name == "reach") return Objective::R;
  if (name == "avoid") return Objective::A;
  if (name == "reach-avoid") return Objective::RA;
  if (name == "raa") return Objective::RAA;
  if (name == "rr") return Objective::RR;
  throw UsageError("unknown problem '" + name +
                   "' (expected reach|avoid|reach-avoid|raa|rr)");
}

const LabelTable& require_label(const LabelSet& labels, const LabelTable& table,
                                const char* name) {
  (void)labels;
  if (table.empty())
    throw UsageError(std::string("input is missing label '") + name + "'");
  return table;
}

// Pulls the labels a problem needs, failing with the absent label's name.
std::pair<const LabelTable*, const LabelTable*> labels_for(
    const LabelSet& labels, Objective problem) {
  switch (problem) {
    case Objective::R: return {&require_label(labels, labels.l, "l"), nullptr};
    case Objective::A: return {&require_label(labels, labels.g, "g"), nullptr};
    case Objective::RA:
    case Objective::RAA:
      return {&require_label(labels, labels.l, "l"),
              &require_label(labels, labels.g, "g")};
    case Objective::RR:
      return {&require_label(labels, labels.l1, "l1"),
              &require_label(labels, labels.l2, "l2")};
  }
  throw UsageError("unreachable");
}

}  // namespace

int run_solve(const SolveOptions& opt) {
  const Objective problem = parse_problem(opt.problem);
  auto [mdp, labels] = load_mdp_file(opt.input);
  const auto [la, lb] = labels_for(labels, problem);

  nlohmann::json doc;
  const bool discounted = opt.gamma >= 0.0;
  if (discounted && (problem == Objective::RAA || problem == Objective::RR))
    throw UsageError("--gamma applies to reach, avoid and reach-avoid only");

  switch (problem) {
    case Objective::R: {
      auto [v, report] = discounted ? solve_reach_gamma(mdp, *la, opt.gamma)
                                    : solve_reach(mdp, *la);
      doc = {{"values", v}, {"report", report_to_json(report)}};
      break;
    }
    case Objective::A: {
      auto [v, report] = discounted ? solve_avoid_gamma(mdp, *la, opt.gamma)
                                    : solve_avoid(mdp, *la);
      doc = {{"values", v}, {"report", report_to_json(report)}};
      break;
    }
    case Objective::RA: {
      auto [v, report] = discounted
                             ? solve_reach_avoid_gamma(mdp, *la, *lb, opt.gamma)
                             : solve_reach_avoid(mdp, *la, *lb);
      doc = {{"values", v}, {"report", report_to_json(report)}};
      break;
    }
    case Objective::RAA:
      doc = raa_solution_to_json(compose_raa(mdp, *la, *lb));
      break;
    case Objective::RR:
      doc = rr_solution_to_json(compose_rr(mdp, *la, *lb));
      break;
  }
  save_json_file(doc, opt.out);
  return kExitOk;
}

int run_policy(const PolicyOptions& opt) {
  const Objective problem = parse_problem(opt.problem);
  auto [mdp, labels] = load_mdp_file(opt.input);
  const auto [la, lb] = labels_for(labels, problem);

  nlohmann::json doc;
  switch (problem) {
    case Objective::R:
      doc = extract_reach_policy(mdp, *la, solve_reach(mdp, *la).first);
      break;
    case Objective::A:
      doc = extract_avoid_policy(mdp, *la, solve_avoid(mdp, *la).first);
      break;
    case Objective::RA:
      doc = extract_reach_avoid_policy(mdp, *la, *lb).first;
      break;
    case Objective::RAA:
      doc = augmented_policy_to_json(
          synth_raa_augmented(mdp, *la, *lb, compose_raa(mdp, *la, *lb)));
      break;
    case Objective::RR:
      doc = augmented_policy_to_json(
          synth_rr_augmented(mdp, *la, *lb, compose_rr(mdp, *la, *lb)));
      break;
  }
  save_json_file(doc, opt.out);
  return kExitOk;
}

int run_simulate(const SimulateOptions& opt) {
  const Objective problem = parse_problem(opt.problem);
  auto [mdp, labels] = load_mdp_file(opt.input);
  const auto [la, lb] = labels_for(labels, problem);
  if (opt.start < 0 || opt.start >= mdp.num_states)
    throw UsageError("start state out of range");
  if (opt.steps < 1) throw UsageError("steps must be >= 1");

  Trajectory traj;
  switch (problem) {
    case Objective::R:
      traj = simulate(mdp, extract_reach_policy(mdp, *la, solve_reach(mdp, *la).first),
                      opt.start, opt.steps);
      break;
    case Objective::A:
      traj = simulate(mdp, extract_avoid_policy(mdp, *la, solve_avoid(mdp, *la).first),
                      opt.start, opt.steps);
      break;
    case Objective::RA:
      traj = simulate(mdp, extract_reach_avoid_policy(mdp, *la, *lb).first,
                      opt.start, opt.steps);
      break;
    case Objective::RAA: {
      const RaaAugmentedRule rule =
          synth_raa_rule(mdp, *la, *lb, compose_raa(mdp, *la, *lb));
      traj = simulate_augmented(
          mdp, *la, *lb, Objective::RAA,
          [&](int x, double y, double z) { return rule.action(mdp, x, y, z); },
          opt.start, opt.steps);
      break;
    }
    case Objective::RR: {
      const RrAugmentedRule rule =
          synth_rr_rule(mdp, *la, *lb, compose_rr(mdp, *la, *lb));
      traj = simulate_augmented(
          mdp, *la, *lb, Objective::RR,
          [&](int x, double y, double z) { return rule.action(mdp, x, y, z); },
          opt.start, opt.steps);
      break;
    }
  }
  nlohmann::json doc = trajectory_to_json(traj);
  if (traj.cycled)
    doc["realized"] = realized_objective(traj, *la, lb ? *lb : LabelTable{}, problem);
  else
    doc["realized"] = nullptr;
  save_json_file(doc, opt.out);
  return kExitOk;
}

namespace {

void write_rollout_summary(const FiniteMdp& mdp, const LabelTable& la,
                           const LabelTable& lb, Objective mode,
                           const ValueTable& composed,
                           const std::function<int(int, double, double)>& rule,
                           int num_cells, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "cell,value,success\n";
  char buf[64];
  for (int cell = 0; cell < num_cells; ++cell) {
    // On the corridor grid every rollout is absorbed within one pass, so a
    // generous cap keeps this loop linear.
    const Trajectory traj =
        simulate_augmented(mdp, la, lb, mode, rule, cell, 4 * mdp.num_states);
    bool success = false;
    if (traj.cycled) {
      const double realized = realized_objective(traj, la, lb, mode);
      success = realized > 0.0;
    }
    std::snprintf(buf, sizeof buf, "%d,%.17g,%d\n", cell, composed[cell],
                  success ? 1 : 0);
    out << buf;
  }
}

}  // namespace

int run_gridworld(const GridworldOptions& opt, std::ostream& out) {
  Objective task;
  if (opt.task == "ra") task = Objective::RA;
  else if (opt.task == "raa") task = Objective::RAA;
  else if (opt.task == "r") task = Objective::R;
  else if (opt.task == "rr") task = Objective::RR;
  else throw UsageError("unknown task '" + opt.task + "' (expected ra|raa|r|rr)");

  BoundaryMode boundary;
  if (opt.boundary == "neutral") boundary = BoundaryMode::Neutral;
  else if (opt.boundary == "hazard") boundary = BoundaryMode::Hazard;
  else throw UsageError("unknown boundary mode '" + opt.boundary + "'");

  std::filesystem::create_directories(opt.out_dir);
  const auto dir = std::filesystem::path(opt.out_dir);

  const GridSpec spec = make_grid_spec(task, boundary);
  auto [mdp, labels] = build_mdp(spec);
  save_mdp_file(mdp, labels, (dir / "mdp.json").string());

  switch (task) {
    case Objective::R: {
      const ValueTable v = solve_reach(mdp, labels.l).first;
      export_value_grid(v, spec, (dir / "values_r.csv").string());
      break;
    }
    case Objective::RA: {
      const ValueTable v = solve_reach_avoid(mdp, labels.l, labels.g).first;
      export_value_grid(v, spec, (dir / "values_ra.csv").string());
      break;
    }
    case Objective::RAA: {
      const RaaSolution raa = compose_raa(mdp, labels.l, labels.g);
      export_value_grid(raa.v_raa, spec, (dir / "values_raa.csv").string());
      const RaaAugmentedRule rule = synth_raa_rule(mdp, labels.l, labels.g, raa);
      write_rollout_summary(
          mdp, labels.l, labels.g, Objective::RAA, raa.v_raa,
          [&](int x, double y, double z) { return rule.action(mdp, x, y, z); },
          spec.num_cells(), (dir / "rollouts_raa.csv").string());
      break;
    }
    case Objective::RR: {
      const RrSolution rr = compose_rr(mdp, labels.l1, labels.l2);
      export_value_grid(rr.v_rr, spec, (dir / "values_rr.csv").string());
      const RrAugmentedRule rule = synth_rr_rule(mdp, labels.l1, labels.l2, rr);
      write_rollout_summary(
          mdp, labels.l1, labels.l2, Objective::RR, rr.v_rr,
          [&](int x, double y, double z) { return rule.action(mdp, x, y, z); },
          spec.num_cells(), (dir / "rollouts_rr.csv").string());
      break;
    }
    case Objective::A:
      throw UsageError("no avoid-only grid task");
  }
  out << "gridworld task=" << opt.task << " boundary=" << opt.boundary
      << " states=" << mdp.num_states << " -> " << opt.out_dir << "\n";
  return kExitOk;
}

int run_verify(const VerifyOptions& opt, std::ostream& out) {
  if (opt.trials < 1) throw UsageError("trials must be >= 1");
  if (opt.max_states < 1 || opt.max_actions < 1)
    throw UsageError("max-states and max-actions must be >= 1");

  long raa_mismatches = 0, rr_mismatches = 0;
  long raa_rollout_misses = 0, rr_rollout_misses = 0;
  long stationary_bound_breaches = 0, stationary_bound_checks = 0;
  long states_checked = 0;

  SplitMix64 meta(opt.seed);
  for (int trial = 0; trial < opt.trials; ++trial) {
    SplitMix64 trial_rng(meta.next());
    const int n = 1 + static_cast<int>(trial_rng.below(opt.max_states));
    const int m = 1 + static_cast<int>(trial_rng.below(opt.max_actions));
    auto [mdp, drawn] = random_mdp(trial_rng.next(), n, m, 2);
    const LabelTable& la = drawn[0];
    const LabelTable& lb = drawn[1];
    states_checked += n;

    RaaSolution raa = compose_raa(mdp, la, lb);
    RrSolution rr = compose_rr(mdp, la, lb);
    if (opt.corrupt) {
      raa.v_raa[0] += 1.0;
      rr.v_rr[0] += 1.0;
    }
    const ValueTable raa_oracle = oracle_value(mdp, la, lb, Objective::RAA);
    const ValueTable rr_oracle = oracle_value(mdp, la, lb, Objective::RR);
    for (int x = 0; x < n; ++x) {
      if (raa.v_raa[x] != raa_oracle[x]) ++raa_mismatches;
      if (rr.v_rr[x] != rr_oracle[x]) ++rr_mismatches;
    }

    // Rollouts of the synthesized augmented policies must realize the
    // composed values exactly from every base state.
    if (!opt.corrupt) {
      const RaaAugmentedRule raa_rule = synth_raa_rule(mdp, la, lb, raa);
      const RrAugmentedRule rr_rule = synth_rr_rule(mdp, la, lb, rr);
      const int cap = 2 * n * 8 * 8 + 2;  // beyond any product-state count
      for (int x = 0; x < n; ++x) {
        const Trajectory t1 = simulate_augmented(
            mdp, la, lb, Objective::RAA,
            [&](int s, double y, double z) { return raa_rule.action(mdp, s, y, z); },
            x, cap);
        if (realized_objective(t1, la, lb, Objective::RAA) != raa.v_raa[x])
          ++raa_rollout_misses;
        const Trajectory t2 = simulate_augmented(
            mdp, la, lb, Objective::RR,
            [&](int s, double y, double z) { return rr_rule.action(mdp, s, y, z); },
            x, cap);
        if (realized_objective(t2, la, lb, Objective::RR) != rr.v_rr[x])
          ++rr_rollout_misses;
      }

      // Stationary policies cannot beat the augmented optimum.
      if (n <= 4) {
        const ValueTable best_raa =
            best_stationary_value(mdp, la, lb, Objective::RAA);
        const ValueTable best_rr =
            best_stationary_value(mdp, la, lb, Objective::RR);
        ++stationary_bound_checks;
        for (int x = 0; x < n; ++x) {
          if (best_raa[x] > raa.v_raa[x]) ++stationary_bound_breaches;
          if (best_rr[x] > rr.v_rr[x]) ++stationary_bound_breaches;
        }
      }
    }
  }

  out << "verify trials=" << opt.trials << " max_states=" << opt.max_states
      << " max_actions=" << opt.max_actions << " seed=" << opt.seed << "\n"
      << "  states checked:           " << states_checked << "\n"
      << "  raa value mismatches:     " << raa_mismatches << "\n"
      << "  rr value mismatches:      " << rr_mismatches << "\n"
      << "  raa rollout misses:       " << raa_rollout_misses << "\n"
      << "  rr rollout misses:        " << rr_rollout_misses << "\n"
      << "  stationary-bound checks:  " << stationary_bound_checks << "\n"
      << "  stationary-bound breaches:" << stationary_bound_breaches << "\n";

  const long failures = raa_mismatches + rr_mismatches + raa_rollout_misses +
                        rr_rollout_misses + stationary_bound_breaches;
  out << (failures == 0 ? "OK" : "MISMATCH") << "\n";
  return failures == 0 ? kExitOk : kExitMismatch;
}

int run_fixtures(const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto dir = std::filesystem::path(out_dir);

  auto [cone, cone_l1, cone_l2] = fixture_rr_cone();
  save_mdp_file(cone, LabelSet{{}, {}, cone_l1, cone_l2},
                (dir / "rr_cone.json").string());

  auto [pinata, pinata_l, pinata_g] = fixture_raa_pinata();
  save_mdp_file(pinata, LabelSet{pinata_l, pinata_g, {}, {}},
                (dir / "raa_pinata.json").string());

  auto [doomed, doomed_l, doomed_g] = fixture_raa_doomed_goal();
  save_mdp_file(doomed, LabelSet{doomed_l, doomed_g, {}, {}},
                (dir / "raa_doomed_goal.json").string());
  return kExitOk;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Dual-objective reachability solver for finite MDPs"};
  app.require_subcommand(1);

  SolveOptions solve_opt;
  auto* solve = app.add_subcommand("solve", "Solve a problem on an MDP file");
  solve->add_option("--input", solve_opt.input, "MDP JSON file")->required();
  solve->add_option("--problem", solve_opt.problem,
                    "reach|avoid|reach-avoid|raa|rr")->required();
  solve->add_option("--gamma", solve_opt.gamma, "discount factor in [0,1)");
  solve->add_option("--out", solve_opt.out, "output JSON path")->required();

  PolicyOptions policy_opt;
  auto* policy = app.add_subcommand("policy", "Synthesize the optimal policy");
  policy->add_option("--input", policy_opt.input, "MDP JSON file")->required();
  policy->add_option("--problem", policy_opt.problem,
                     "reach|avoid|reach-avoid|raa|rr")->required();
  policy->add_option("--out", policy_opt.out, "output JSON path")->required();

  SimulateOptions sim_opt;
  auto* sim = app.add_subcommand("simulate", "Roll out the optimal policy");
  sim->add_option("--input", sim_opt.input, "MDP JSON file")->required();
  sim->add_option("--problem", sim_opt.problem,
                  "reach|avoid|reach-avoid|raa|rr")->required();
  sim->add_option("--start", sim_opt.start, "start state")->required();
  sim->add_option("--steps", sim_opt.steps, "maximum steps (>= 1)")->required();
  sim->add_option("--out", sim_opt.out, "output JSON path")->required();

  GridworldOptions grid_opt;
  auto* grid = app.add_subcommand("gridworld", "Emit the corridor benchmark");
  grid->add_option("--task", grid_opt.task, "ra|raa|r|rr")->required();
  grid->add_option("--boundary", grid_opt.boundary, "neutral|hazard");
  grid->add_option("--out-dir", grid_opt.out_dir, "output directory")->required();

  VerifyOptions verify_opt;
  auto* verify = app.add_subcommand(
      "verify", "Cross-check solvers, oracle and policies on random MDPs");
  verify->add_option("--trials", verify_opt.trials, "number of random MDPs");
  verify->add_option("--max-states", verify_opt.max_states, "state count bound");
  verify->add_option("--max-actions", verify_opt.max_actions, "action count bound");
  verify->add_option("--seed", verify_opt.seed, "stream seed");
  verify->add_flag("--corrupt", verify_opt.corrupt,
                   "debug: corrupt solver output to exercise mismatch paths");

  std::string fixtures_dir;
  auto* fixtures = app.add_subcommand("fixtures", "Write the named fixture MDPs");
  fixtures->add_option("--out-dir", fixtures_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
    if (*solve) return run_solve(solve_opt);
    if (*policy) return run_policy(policy_opt);
    if (*sim) return run_simulate(sim_opt);
    if (*grid) return run_gridworld(grid_opt, std::cout);
    if (*verify) return run_verify(verify_opt, std::cout);
    if (*fixtures) return run_fixtures(fixtures_dir);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace hjr
