#pragma once

#include <string>
#include <vector>

#include "hjr/mdp.hpp"
#include "hjr/solvers.hpp"

namespace hjr {

/// Axis-aligned box given by center and full extents, in world units.
struct Box {
  double x_c = 0.0, y_c = 0.0;
  double w = 1.0, h = 1.0;
};

/// What happens to the label functions at the absorbing boundary sink:
/// exiting never yields reward in either mode; in `neutral` the exit is not
/// a hazard, in `hazard` it is.
enum class BoundaryMode { Neutral, Hazard };

/// The 2D corridor world: three actions (left, straight, right), constant
/// upward flow of one row per step, trajectories leaving the domain are
/// absorbed by a sink state.
struct GridSpec {
  double x_min = -2.0, x_max = 2.0;
  double y_min = -2.0, y_max = 10.0;
  int cells_x = 80;
  int cells_y = 120;
  Objective task = Objective::RAA;
  std::vector<Box> reward_boxes;
  std::vector<Box> penalty_boxes;
  BoundaryMode boundary_mode = BoundaryMode::Neutral;

  int num_cells() const { return cells_x * cells_y; }
  int sink_state() const { return num_cells(); }
  int cell_index(int i, int j) const { return j * cells_x + i; }
  double cell_center_x(int i) const {
    return x_min + (i + 0.5) * (x_max - x_min) / cells_x;
  }
  double cell_center_y(int j) const {
    return y_min + (j + 0.5) * (y_max - y_min) / cells_y;
  }
};

/// Canonical task geometry: one reward box above two side hazards and a top
/// hazard for RA/RAA; two slim reward boxes near the bottom for R/RR.
GridSpec make_grid_spec(Objective task,
                        BoundaryMode boundary = BoundaryMode::Neutral);

/// Signed distance to the box: negative inside, zero on the edge.
double sdf_box(double px, double py, const Box& box);

/// Labels at the cell centers only (no sink entry). RA/RAA fill l (= -sdf
/// of the reward box, max over boxes) and g (= min of the penalty boxes'
/// +sdf); R fills l only; RR fills l1 and l2.
LabelSet build_labels(const GridSpec& spec);

/// Compiles the grid into a FiniteMdp with one extra absorbing sink state;
/// the returned labels carry the per-mode sink entries appended.
std::pair<FiniteMdp, LabelSet> build_mdp(const GridSpec& spec);

/// CSV export "x,y,value", row-major (j outer, i inner), cell centers in
/// world coordinates, 17 significant digits. The sink entry, if present, is
/// dropped.
void export_value_grid(const ValueTable& values, const GridSpec& spec,
                       const std::string& path);

}  // namespace hjr
