#pragma once

#include <string>

#include "photocov/density.hpp"
#include "photocov/geometry.hpp"
#include "photocov/simulator.hpp"

namespace photocov {

struct FigureOptions {
  double width_px = 640.0;
  int contour_samples = 121;  // density sampling grid per axis
  int contour_levels = 5;
};

/// Simulation figure: density contours, the final second-order Voronoi
/// partition, dashed agent trajectories, and solid dots at the final
/// positions. Coordinates are written with fixed precision, so the output
/// is byte-stable for identical inputs.
std::string simulation_figure_svg(const ConvexPolygon& region,
                                  const GaussianMixtureDensity& density,
                                  const SimulationTrace& trace,
                                  const OrderTwoPartition& final_partition,
                                  const FigureOptions& options = {});

void write_simulation_figure(const std::string& path, const ConvexPolygon& region,
                             const GaussianMixtureDensity& density, const SimulationTrace& trace,
                             const OrderTwoPartition& final_partition,
                             const FigureOptions& options = {});

}  // namespace photocov
