#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "hjr/gridworld.hpp"
#include "hjr/mdp.hpp"

namespace hjr {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitUsage = 2;

struct SolveOptions {
  std::string input;
  std::string problem;  // reach | avoid | reach-avoid | raa | rr
  std::string out;
  double gamma = -1.0;  // < 0 means undiscounted
};

struct PolicyOptions {
  std::string input;
  std::string problem;
  std::string out;
};

struct SimulateOptions {
  std::string input;
  std::string problem;
  int start = 0;
  int steps = 0;
  std::string out;
};

struct GridworldOptions {
  std::string task;      // ra | raa | r | rr
  std::string boundary = "neutral";
  std::string out_dir;
};

struct VerifyOptions {
  int trials = 100;
  int max_states = 6;
  int max_actions = 3;
  std::uint64_t seed = 7;
  bool corrupt = false;  // debug: perturb the solver output to prove detection
};

int run_solve(const SolveOptions& opt);
int run_policy(const PolicyOptions& opt);
int run_simulate(const SimulateOptions& opt);
int run_gridworld(const GridworldOptions& opt, std::ostream& out);
int run_verify(const VerifyOptions& opt, std::ostream& out);
int run_fixtures(const std::string& out_dir);

/// Full command-line front end; returns the process exit code.
int run_cli(int argc, const char* const* argv);

}  // namespace hjr
