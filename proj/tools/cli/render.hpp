#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crowdflow/scenarios.hpp"

namespace crowdflow::cli {

/// Layers and styling for an SVG figure. Paths follow the usual convention:
/// social plan solid, naive plan dotted, start as a circle, goal as a cross.
struct RenderSpec {
  bool density_heatmap = false;
  bool variance_heatmap = false;
  bool velocity_quiver = false;
  bool tree_edges = false;
  bool social_path = false;
  bool naive_path = false;
  bool start_marker = false;
  bool goal_marker = false;
  int width_px = 800;
  std::string colormap = "viridis";
  int heatmap_cells = 80;  ///< along the longer side
  int quiver_cells = 20;   ///< along the longer side

  bool any_layer() const {
    return density_heatmap || variance_heatmap || velocity_quiver || tree_edges || social_path ||
           naive_path || start_marker || goal_marker;
  }
};

/// Directed tree edge colored by invasiveness per meter.
struct TreeEdge {
  Vec2 from;
  Vec2 to;
  double invasiveness = 0.0;
  double length = 0.0;
  double cost_per_length() const { return invasiveness / length; }
};

struct QuiverArrow {
  Vec2 at;
  Vec2 velocity;
};

struct Overlays {
  std::vector<TreeEdge> tree;
  std::vector<Vec2> social;
  std::vector<Vec2> naive;
};

struct RenderOutput {
  std::string svg;
  std::vector<QuiverArrow> arrows;
};

/// Throws InputError when no layer is enabled or the colormap is unknown.
RenderOutput render_svg(const RenderSpec& spec, const Scenario& scenario,
                        const Overlays& overlays = {});

/// Round-trip decimal formatting shared by CSV files and SVG legends.
std::string exact(double v);

}  // namespace crowdflow::cli
