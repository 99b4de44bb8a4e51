#include "hjr/gridworld.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace hjr {

GridSpec make_grid_spec(Objective task, BoundaryMode boundary) {
  GridSpec spec;
  spec.task = task;
  spec.boundary_mode = boundary;
  switch (task) {
    case Objective::RA:
    case Objective::RAA:
      spec.reward_boxes = {{0.0, 4.5, 2.0, 1.5}};
      spec.penalty_boxes = {{-0.75, 3.0, 1.0, 1.0},
                            {0.75, 3.0, 1.0, 1.0},
                            {0.0, 6.0, 2.5, 1.0}};
      break;
    case Objective::R:
    case Objective::RR:
      spec.reward_boxes = {{-1.25, 0.0, 0.5, 2.0}, {1.25, 0.0, 0.5, 2.0}};
      break;
    case Objective::A:
      throw std::invalid_argument("make_grid_spec: no avoid-only grid task");
  }
  return spec;
}

double sdf_box(double px, double py, const Box& box) {
  const double dx = std::abs(px - box.x_c) - box.w / 2.0;
  const double dy = std::abs(py - box.y_c) - box.h / 2.0;
  const double ox = std::max(dx, 0.0);
  const double oy = std::max(dy, 0.0);
  return std::sqrt(ox * ox + oy * oy) + std::min(std::max(dx, dy), 0.0);
}

LabelSet build_labels(const GridSpec& spec) {
  if (spec.cells_x < 1 || spec.cells_y < 1)
    throw std::invalid_argument("GridSpec: cell counts must be >= 1");
  LabelSet labels;
  const int n = spec.num_cells();

  auto reward_at = [&](double px, double py, const Box& box) {
    return -sdf_box(px, py, box);
  };
  auto for_each_cell = [&](auto&& fn) {
    for (int j = 0; j < spec.cells_y; ++j)
      for (int i = 0; i < spec.cells_x; ++i)
        fn(spec.cell_center_x(i), spec.cell_center_y(j));
  };

  switch (spec.task) {
    case Objective::RA:
    case Objective::RAA: {
      if (spec.reward_boxes.empty() || spec.penalty_boxes.empty())
        throw std::invalid_argument("grid task needs reward and penalty boxes");
      labels.l.reserve(n);
      labels.g.reserve(n);
      for_each_cell([&](double px, double py) {
        double l = reward_at(px, py, spec.reward_boxes[0]);
        for (std::size_t b = 1; b < spec.reward_boxes.size(); ++b)
          l = std::max(l, reward_at(px, py, spec.reward_boxes[b]));
        double g = sdf_box(px, py, spec.penalty_boxes[0]);
        for (std::size_t b = 1; b < spec.penalty_boxes.size(); ++b)
          g = std::min(g, sdf_box(px, py, spec.penalty_boxes[b]));
        labels.l.push_back(l);
        labels.g.push_back(g);
      });
      break;
    }
    case Objective::R: {
      if (spec.reward_boxes.empty())
        throw std::invalid_argument("grid task needs reward boxes");
      labels.l.reserve(n);
      for_each_cell([&](double px, double py) {
        double l = reward_at(px, py, spec.reward_boxes[0]);
        for (std::size_t b = 1; b < spec.reward_boxes.size(); ++b)
          l = std::max(l, reward_at(px, py, spec.reward_boxes[b]));
        labels.l.push_back(l);
      });
      break;
    }
    case Objective::RR: {
      if (spec.reward_boxes.size() != 2)
        throw std::invalid_argument("RR grid task needs exactly two reward boxes");
      labels.l1.reserve(n);
      labels.l2.reserve(n);
      for_each_cell([&](double px, double py) {
        labels.l1.push_back(reward_at(px, py, spec.reward_boxes[0]));
        labels.l2.push_back(reward_at(px, py, spec.reward_boxes[1]));
      });
      break;
    }
    case Objective::A:
      throw std::invalid_argument("no avoid-only grid task");
  }
  return labels;
}

namespace {

// Sink reward: below every cell reward (nothing is gained after exit).
// Sink penalty margin: neutral exit keeps the best margin, hazardous exit
// sits below the worst.
void append_sink(LabelTable& table, bool is_reward, BoundaryMode mode) {
  if (table.empty()) return;
  auto [lo, hi] = std::minmax_element(table.begin(), table.end());
  if (is_reward)
    table.push_back(*lo - 1.0);
  else
    table.push_back(mode == BoundaryMode::Neutral ? *hi : *lo - 1.0);
}

}  // namespace

std::pair<FiniteMdp, LabelSet> build_mdp(const GridSpec& spec) {
  LabelSet labels = build_labels(spec);

  FiniteMdp mdp;
  mdp.num_states = spec.num_cells() + 1;
  mdp.num_actions = 3;  // left, straight, right
  mdp.next.resize(static_cast<std::size_t>(mdp.num_states) * 3);
  const int sink = spec.sink_state();
  for (int j = 0; j < spec.cells_y; ++j) {
    for (int i = 0; i < spec.cells_x; ++i) {
      const int s = spec.cell_index(i, j);
      for (int a = 0; a < 3; ++a) {
        const int i2 = i + (a - 1);  // left shifts down-index, right up
        const int j2 = j + 1;
        const bool out = i2 < 0 || i2 >= spec.cells_x || j2 >= spec.cells_y;
        mdp.next[static_cast<std::size_t>(s) * 3 + a] =
            out ? sink : spec.cell_index(i2, j2);
      }
    }
  }
  for (int a = 0; a < 3; ++a)
    mdp.next[static_cast<std::size_t>(sink) * 3 + a] = sink;

  append_sink(labels.l, true, spec.boundary_mode);
  append_sink(labels.g, false, spec.boundary_mode);
  append_sink(labels.l1, true, spec.boundary_mode);
  append_sink(labels.l2, true, spec.boundary_mode);
  return {std::move(mdp), std::move(labels)};
}

void export_value_grid(const ValueTable& values, const GridSpec& spec,
                       const std::string& path) {
  const std::size_t cells = static_cast<std::size_t>(spec.num_cells());
  if (values.size() != cells && values.size() != cells + 1)
    throw std::invalid_argument("export_value_grid: value table size mismatch");

  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_value_grid: cannot open " + path);
  out << "x,y,value\n";
  char buf[96];
  for (int j = 0; j < spec.cells_y; ++j)
    for (int i = 0; i < spec.cells_x; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n",
                    spec.cell_center_x(i), spec.cell_center_y(j),
                    values[spec.cell_index(i, j)]);
      out << buf;
    }
  if (!out) throw std::runtime_error("export_value_grid: write failed for " + path);
}

}  // namespace hjr
