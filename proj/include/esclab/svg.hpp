#pragma once

#include <functional>
#include <string>

#include "esclab/integrate.hpp"
#include "esclab/types.hpp"

namespace esclab {

/// Fixed-viewport deterministic SVG output; identical inputs give identical
/// bytes.
struct PlotStyle {
  int width = 720;
  int height = 720;
  double x_min = -1.0, x_max = 1.0;
  double y_min = -1.0, y_max = 1.0;
  int stream_grid = 12;     // seeds per axis for stream plots
  int stream_steps = 400;   // RK4 steps forward and backward per streamline
  std::string title;
};

/// Polyline of the first two state components of a trajectory.
std::string trajectory_svg(const Trajectory& traj, const PlotStyle& style);

/// Stream plot of a planar autonomous field: streamlines integrated forward
/// and backward from a fixed seed grid, with midpoint direction arrows.
std::string stream_plot_svg(const std::function<Vec(const Vec&)>& field,
                            const PlotStyle& style);

}  // namespace esclab
