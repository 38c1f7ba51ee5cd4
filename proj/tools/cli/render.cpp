#include "cli/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string_view>

#include <fmt/format.h>

#include "cli/colormap.hpp"
#include "crowdflow/error.hpp"

namespace crowdflow::cli {
namespace {

constexpr int kMargin = 10;
constexpr int kLegendHeight = 40;

class Canvas {
 public:
  Canvas(const Rect& world, int width_px) : world_(world) {
    scale_ = (width_px - 2.0 * kMargin) / world.width();
    width_ = width_px;
    plot_height_ = static_cast<int>(std::ceil(world.height() * scale_)) + 2 * kMargin;
  }

  double px(double x) const { return kMargin + (x - world_.min.x) * scale_; }
  double py(double y) const { return kMargin + (world_.max.y - y) * scale_; }
  double scale() const { return scale_; }
  int width() const { return width_; }
  int plot_height() const { return plot_height_; }

 private:
  Rect world_;
  double scale_ = 1.0;
  int width_ = 0;
  int plot_height_ = 0;
};

std::string num(double v) { return fmt::format("{:.2f}", v); }

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double normalize(double v) const { return hi > lo ? (v - lo) / (hi - lo) : 0.5; }
};

void heatmap(std::string& out, const Canvas& c, const Scenario& s, const Colormap& cmap,
             int cells, bool variance, const char* id) {
  const Rect& b = s.environment.bounds;
  const double cell = std::max(b.width(), b.height()) / cells;
  const int nx = static_cast<int>(std::ceil(b.width() / cell));
  const int ny = static_cast<int>(std::ceil(b.height() / cell));
  std::vector<double> values(static_cast<std::size_t>(nx * ny));
  Range range;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Vec2 center{b.min.x + (i + 0.5) * cell, b.min.y + (j + 0.5) * cell};
      const FlowSample f = s.flow.sample(center);
      const double v = variance ? f.variance : f.density;
      values[static_cast<std::size_t>(j * nx + i)] = v;
      range.add(v);
    }
  }
  out += fmt::format("<g id=\"{}\" data-min=\"{}\" data-max=\"{}\">\n", id, exact(range.lo),
                     exact(range.hi));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double x0 = b.min.x + i * cell;
      const double y1 = std::min(b.max.y, b.min.y + (j + 1) * cell);
      const double w = std::min(cell, b.max.x - x0);
      const double h = y1 - (b.min.y + j * cell);
      out += fmt::format(
          "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n", num(c.px(x0)),
          num(c.py(y1)), num(w * c.scale() + 0.5), num(h * c.scale() + 0.5),
          hex(cmap(range.normalize(values[static_cast<std::size_t>(j * nx + i)]))));
    }
  }
  out += "</g>\n";
}

void obstacles(std::string& out, const Canvas& c, const Scenario& s) {
  out += "<g id=\"obstacles\" fill=\"#555555\">\n";
  for (const auto& o : s.environment.obstacles) {
    if (const auto* circle = std::get_if<Circle>(&o)) {
      out += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>\n", num(c.px(circle->center.x)),
                         num(c.py(circle->center.y)), num(circle->radius * c.scale()));
    } else {
      const auto& r = std::get<Rect>(o);
      out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>\n", num(c.px(r.min.x)),
                         num(c.py(r.max.y)), num(r.width() * c.scale()), num(r.height() * c.scale()));
    }
  }
  out += "</g>\n";
}

std::vector<QuiverArrow> quiver(std::string& out, const Canvas& c, const Scenario& s, int cells) {
  const Rect& b = s.environment.bounds;
  const double cell = std::max(b.width(), b.height()) / cells;
  const int nx = static_cast<int>(std::floor(b.width() / cell));
  const int ny = static_cast<int>(std::floor(b.height() / cell));

  std::vector<QuiverArrow> arrows;
  double max_speed = 0.0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Vec2 at{b.min.x + (i + 0.5) * cell, b.min.y + (j + 0.5) * cell};
      const FlowSample f = s.flow.sample(at);
      if (f.density == 0.0 || norm(f.mean_velocity) == 0.0) continue;
      arrows.push_back({at, f.mean_velocity});
      max_speed = std::max(max_speed, norm(f.mean_velocity));
    }
  }

  out += "<g id=\"quiver\" stroke=\"#ffffff\" stroke-width=\"1.2\" fill=\"none\">\n";
  const double unit = 0.8 * cell / (max_speed > 0.0 ? max_speed : 1.0);
  for (const auto& a : arrows) {
    const Vec2 tip = a.at + unit * a.velocity;
    const Vec2 back = (tip - a.at) * 0.3;
    const Vec2 left = tip - rotated(back, 0.5);
    const Vec2 right = tip - rotated(back, -0.5);
    out += fmt::format("<polyline points=\"{},{} {},{} {},{} {},{} {},{}\"/>\n", num(c.px(a.at.x)),
                       num(c.py(a.at.y)), num(c.px(tip.x)), num(c.py(tip.y)), num(c.px(left.x)),
                       num(c.py(left.y)), num(c.px(tip.x)), num(c.py(tip.y)), num(c.px(right.x)),
                       num(c.py(right.y)));
  }
  out += "</g>\n";
  return arrows;
}

void tree(std::string& out, const Canvas& c, const std::vector<TreeEdge>& edges,
          const Colormap& cmap, Range& range) {
  for (const auto& e : edges) range.add(e.cost_per_length());
  out += "<g id=\"tree\" stroke-width=\"1\">\n";
  for (const auto& e : edges) {
    out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\"/>\n",
                       num(c.px(e.from.x)), num(c.py(e.from.y)), num(c.px(e.to.x)),
                       num(c.py(e.to.y)), hex(cmap(range.normalize(e.cost_per_length()))));
  }
  out += "</g>\n";
}

void path(std::string& out, const Canvas& c, const std::vector<Vec2>& pts, const char* id,
          bool dotted) {
  if (pts.size() < 2) return;
  std::string points;
  for (const Vec2& p : pts) points += fmt::format("{},{} ", num(c.px(p.x)), num(c.py(p.y)));
  points.pop_back();
  out += fmt::format(
      "<polyline id=\"{}\" points=\"{}\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2.5\"{}/>\n",
      id, points, dotted ? " stroke-dasharray=\"2,4\" stroke-linecap=\"round\"" : "");
}

void legend(std::string& out, const Canvas& c, const Colormap& cmap, const Range& range,
            const char* label) {
  const int y = c.plot_height() + 5;
  const int bar = c.width() - 2 * kMargin;
  out += fmt::format("<g id=\"legend\" data-min=\"{}\" data-max=\"{}\">\n", exact(range.lo),
                     exact(range.hi));
  constexpr int steps = 64;
  for (int k = 0; k < steps; ++k) {
    out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"12\" fill=\"{}\"/>\n",
                       num(kMargin + k * bar / static_cast<double>(steps)), y,
                       num(bar / static_cast<double>(steps) + 0.5),
                       hex(cmap(k / static_cast<double>(steps - 1))));
  }
  out += fmt::format(
      "<text id=\"legend-min\" x=\"{}\" y=\"{}\" font-size=\"11\">{}</text>\n"
      "<text id=\"legend-label\" x=\"{}\" y=\"{}\" font-size=\"11\" "
      "text-anchor=\"middle\">{}</text>\n"
      "<text id=\"legend-max\" x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
      kMargin, y + 26, exact(range.lo), c.width() / 2, y + 26, label, c.width() - kMargin, y + 26,
      exact(range.hi));
  out += "</g>\n";
}

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string exact(double v) { return fmt::format("{}", v); }

RenderOutput render_svg(const RenderSpec& spec, const Scenario& scenario,
                        const Overlays& overlays) {
  if (!spec.any_layer()) throw InputError("render spec has no layers enabled");
  if (spec.width_px < 50) throw InputError("image width must be at least 50 px");
  const Colormap cmap = Colormap::named(spec.colormap);
  const Canvas canvas(scenario.environment.bounds, spec.width_px);

  std::string body;
  RenderOutput result;
  Range legend_range;
  const char* legend_label = nullptr;

  if (spec.density_heatmap) {
    heatmap(body, canvas, scenario, cmap, spec.heatmap_cells, false, "density");
  } else if (spec.variance_heatmap) {
    heatmap(body, canvas, scenario, cmap, spec.heatmap_cells, true, "variance");
  }
  obstacles(body, canvas, scenario);
  if (spec.velocity_quiver) result.arrows = quiver(body, canvas, scenario, spec.quiver_cells);
  if (spec.tree_edges && !overlays.tree.empty()) {
    tree(body, canvas, overlays.tree, cmap, legend_range);
    legend_label = "invasiveness per meter";
  }
  if (spec.naive_path) path(body, canvas, overlays.naive, "naive-path", true);
  if (spec.social_path) path(body, canvas, overlays.social, "social-path", false);
  if (spec.start_marker) {
    body += fmt::format(
        "<circle id=\"start\" cx=\"{}\" cy=\"{}\" r=\"6\" fill=\"none\" stroke=\"#000000\" "
        "stroke-width=\"2\"/>\n",
        num(canvas.px(scenario.start.x)), num(canvas.py(scenario.start.y)));
  }
  if (spec.goal_marker) {
    const double gx = canvas.px(scenario.goal.x);
    const double gy = canvas.py(scenario.goal.y);
    body += fmt::format(
        "<path id=\"goal\" d=\"M{} {} L{} {} M{} {} L{} {}\" stroke=\"#000000\" "
        "stroke-width=\"2\"/>\n",
        num(gx - 6), num(gy - 6), num(gx + 6), num(gy + 6), num(gx - 6), num(gy + 6), num(gx + 6),
        num(gy - 6));
  }
  if (legend_label != nullptr) legend(body, canvas, cmap, legend_range, legend_label);

  const int height = canvas.plot_height() + (legend_label != nullptr ? kLegendHeight : 0);
  result.svg = fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "viewBox=\"0 0 {} {}\">\n"
      "<title>{}</title>\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n{}</svg>\n",
      canvas.width(), height, canvas.width(), height, xml_escape(scenario.name), body);
  return result;
}

}  // namespace crowdflow::cli
