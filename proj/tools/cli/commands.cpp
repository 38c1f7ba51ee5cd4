#include "cli/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "crowdflow/error.hpp"
#include "crowdflow/oracle.hpp"
#include "crowdflow/roadmap.hpp"

namespace crowdflow::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json vec(Vec2 v) { return json::array({v.x, v.y}); }

json points(const std::vector<Vec2>& pts) {
  json arr = json::array();
  for (const Vec2& p : pts) arr.push_back(vec(p));
  return arr;
}

void write_output(const std::string& path, const std::string& content, std::ostream& fallback) {
  if (path.empty()) {
    fallback << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw InputError("failed writing '" + path + "'");
}

BuildOptions build_options(const Scenario& s, const CommonOptions& c) {
  BuildOptions o = s.build_options();
  if (c.samples) o.samples = *c.samples;
  if (c.seed) o.seed = *c.seed;
  if (c.quadrature_step) o.quadrature_step = *c.quadrature_step;
  return o;
}

std::string no_path_json(const NoPathError& e) {
  const auto& d = e.diagnostics();
  const json doc{{"version", kOutputSchemaVersion},
                 {"error", "no_path"},
                 {"message", e.what()},
                 {"diagnostics",
                  {{"nodes", d.nodes},
                   {"edges", d.edges},
                   {"reachable_from_start", d.reachable_from_source},
                   {"connection_radius", d.connection_radius}}}};
  return doc.dump(2) + "\n";
}

/// Maps library errors onto exit codes. `no_path_out` receives the
/// diagnostics document on exit code 2.
int guarded(const std::function<int()>& body, const std::string& no_path_out, std::ostream& out,
            std::ostream& err) {
  try {
    return body();
  } catch (const NoPathError& e) {
    err << "error: no path: " << e.what() << "\n";
    try {
      write_output(no_path_out, no_path_json(e), out);
    } catch (const Error& w) {
      err << "error: " << w.what() << "\n";
    }
    return kNoPath;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

RenderSpec figure_spec(const Scenario& s) {
  RenderSpec spec;
  // Heatmap of whichever field varies; quiver only when the crowd moves.
  const Rect& b = s.environment.bounds;
  double rho_lo = 1e300, rho_hi = -1e300, speed_hi = 0.0;
  for (int j = 0; j <= 20; ++j) {
    for (int i = 0; i <= 20; ++i) {
      const FlowSample f =
          s.flow.sample({b.min.x + b.width() * i / 20.0, b.min.y + b.height() * j / 20.0});
      rho_lo = std::min(rho_lo, f.density);
      rho_hi = std::max(rho_hi, f.density);
      speed_hi = std::max(speed_hi, norm(f.mean_velocity));
    }
  }
  spec.density_heatmap = rho_hi - rho_lo > 1e-9;
  spec.variance_heatmap = !spec.density_heatmap;
  spec.velocity_quiver = speed_hi > 0.0;
  spec.start_marker = spec.goal_marker = true;
  return spec;
}

}  // namespace

Scenario resolve_scenario(const CommonOptions& common) {
  const std::string& ref = common.scenario;
  if (ref.empty()) throw InputError("--scenario is required");

  Scenario s = [&] {
    const auto& names = builtin_scenario_names();
    if (std::find(names.begin(), names.end(), ref) != names.end()) return builtin_scenario(ref);
    if (fs::is_regular_file(ref)) return load_scenario(ref);
    if (const char* dir = std::getenv("CROWDFLOW_SCENARIO_DIR"); dir != nullptr && *dir != '\0') {
      for (const fs::path& candidate : {fs::path(dir) / ref, fs::path(dir) / (ref + ".json")})
        if (fs::is_regular_file(candidate)) return load_scenario(candidate);
    }
    return builtin_scenario(ref);  // throws, listing valid names
  }();

  if (common.vmin) s.environment.limits.v_min = *common.vmin;
  if (common.vmax) s.environment.limits.v_max = *common.vmax;
  s.validate();
  return s;
}

std::string plan_result_json(const Scenario& scenario, const PlanResult& plan,
                             const BuildOptions& options) {
  const json doc{{"version", kOutputSchemaVersion},
                 {"scenario", scenario.name},
                 {"n", options.samples},
                 {"seed", options.seed},
                 {"quadrature_step", options.quadrature_step},
                 {"waypoints", points(plan.waypoints)},
                 {"speeds", plan.speeds},
                 {"total_invasiveness", plan.total_invasiveness},
                 {"total_time", plan.total_time},
                 {"total_length", plan.total_length}};
  return doc.dump(2) + "\n";
}

int cmd_plan(const PlanArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        const Scenario s = resolve_scenario(args.common);
        const BuildOptions options = build_options(s, args.common);
        if (args.svg.empty()) {
          const PlanResult social = plan(s.environment, s.flow, s.start, s.goal, options);
          write_output(args.out, plan_result_json(s, social, options), out);
          return static_cast<int>(kOk);
        }
        const PlanComparison both = plan_both(s.environment, s.flow, s.start, s.goal, options);
        write_output(args.out, plan_result_json(s, both.social, options), out);
        RenderSpec spec = figure_spec(s);
        spec.social_path = spec.naive_path = true;
        write_output(args.svg, render_svg(spec, s, {{}, both.social.waypoints, both.naive.waypoints}).svg,
                     out);
        return static_cast<int>(kOk);
      },
      args.out, out, err);
}

int cmd_tree(const TreeArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        const Scenario s = resolve_scenario(args.common);
        const BuildOptions options = build_options(s, args.common);
        const Roadmap roadmap = build_roadmap(s.environment, s.flow, s.start, s.goal, options);
        if (args.source >= roadmap.node_count())
          throw InputError(fmt::format("--source {} out of range (roadmap has {} nodes)",
                                       args.source, roadmap.node_count()));
        const ShortestPathTree tree = dijkstra(roadmap, args.source, EdgeWeight::Invasiveness);

        std::vector<TreeEdge> edges;
        std::string csv = "from_x,from_y,to_x,to_y,invasiveness,length,cost_per_length\n";
        for (NodeId v = 0; v < roadmap.node_count(); ++v) {
          const NodeId p = tree.parent[v];
          if (p == kNoParent) continue;
          const RoadmapEdge* e = roadmap.find_edge(p, v);
          const TreeEdge te{roadmap.node(p), roadmap.node(v), e->invasiveness, e->length};
          csv += fmt::format("{},{},{},{},{},{},{}\n", exact(te.from.x), exact(te.from.y),
                             exact(te.to.x), exact(te.to.y), exact(te.invasiveness),
                             exact(te.length), exact(te.cost_per_length()));
          edges.push_back(te);
        }
        write_output(args.out, csv, out);
        if (!args.svg.empty()) {
          RenderSpec spec;
          spec.tree_edges = spec.start_marker = true;
          spec.colormap = "magma";
          write_output(args.svg, render_svg(spec, s, {edges, {}, {}}).svg, out);
        }
        return static_cast<int>(kOk);
      },
      "", err, err);
}

int cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        if (args.scenarios.empty()) throw InputError("--scenario is required");
        if (args.seeds.empty()) throw InputError("--seeds needs at least one seed");

        std::string csv = "scenario,seed,social_invasiveness,naive_invasiveness,ratio\n";
        std::string summary = fmt::format("{:<14} {:>7} {:>14} {:>14} {:>10}\n", "scenario", "seeds",
                                          "social (med)", "naive (med)", "ratio (med)");
        for (const std::string& ref : args.scenarios) {
          CommonOptions common = args.common;
          common.scenario = ref;
          const Scenario s = resolve_scenario(common);
          std::vector<double> social, naive, ratio;
          for (const std::uint64_t seed : args.seeds) {
            BuildOptions options = build_options(s, common);
            options.seed = seed;
            const PlanComparison r = plan_both(s.environment, s.flow, s.start, s.goal, options);
            const double q = r.naive.total_invasiveness > 0.0
                                 ? r.social.total_invasiveness / r.naive.total_invasiveness
                                 : 1.0;
            social.push_back(r.social.total_invasiveness);
            naive.push_back(r.naive.total_invasiveness);
            ratio.push_back(q);
            csv += fmt::format("{},{},{},{},{}\n", s.name, seed, exact(r.social.total_invasiveness),
                               exact(r.naive.total_invasiveness), exact(q));
          }
          summary += fmt::format("{:<14} {:>7} {:>14.3f} {:>14.3f} {:>10.3f}\n", s.name,
                                 args.seeds.size(), median(social), median(naive), median(ratio));
        }
        write_output(args.out, csv, out);
        (args.out.empty() ? err : out) << summary;
        return static_cast<int>(kOk);
      },
      "", err, err);
}

int cmd_oracle(const OracleArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        Scenario s = resolve_scenario(args.common);
        if (args.common.quadrature_step) s.defaults.quadrature_step = *args.common.quadrature_step;
        const LatticePlan p = lattice_plan(s, args.grid, args.connectivity);
        const json doc{{"version", kOutputSchemaVersion},
                       {"scenario", s.name},
                       {"resolution", p.resolution},
                       {"connectivity", p.connectivity},
                       {"cost", p.cost},
                       {"travel_time", p.travel_time},
                       {"length", p.length},
                       {"path", points(p.path)}};
        write_output(args.out, doc.dump(2) + "\n", out);
        return static_cast<int>(kOk);
      },
      args.out, out, err);
}

int cmd_render(const RenderArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        RenderSpec spec;
        for (const std::string& layer : args.layers) {
          if (layer == "density") spec.density_heatmap = true;
          else if (layer == "variance") spec.variance_heatmap = true;
          else if (layer == "quiver") spec.velocity_quiver = true;
          else if (layer == "start") spec.start_marker = true;
          else if (layer == "goal") spec.goal_marker = true;
          else if (layer != "none")
            throw InputError("unknown layer '" + layer +
                             "'; valid: density, variance, quiver, start, goal, none");
        }
        if (!spec.any_layer()) throw InputError("render needs at least one layer");
        spec.width_px = args.width;
        spec.colormap = args.colormap;

        const Scenario s = resolve_scenario(args.common);
        const RenderOutput r = render_svg(spec, s);
        write_output(args.out, r.svg, out);
        if (!args.arrows_csv.empty()) {
          std::string csv = "x,y,vx,vy\n";
          for (const auto& a : r.arrows)
            csv += fmt::format("{},{},{},{}\n", exact(a.at.x), exact(a.at.y), exact(a.velocity.x),
                               exact(a.velocity.y));
          write_output(args.arrows_csv, csv, out);
        }
        return static_cast<int>(kOk);
      },
      "", err, err);
}

int cmd_export(const ExportArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        write_output(args.out, to_json(resolve_scenario(args.common)), out);
        return static_cast<int>(kOk);
      },
      "", err, err);
}

// ---------------------------------------------------------------------------

namespace {

void add_common(CLI::App* cmd, CommonOptions& c, bool scenario = true) {
  if (scenario)
    cmd->add_option("--scenario", c.scenario, "Built-in name or scenario JSON path")->required();
  cmd->add_option("--samples", c.samples, "Roadmap node count (start and goal included)");
  cmd->add_option("--seed", c.seed, "Sampling seed");
  cmd->add_option("--quadrature-step", c.quadrature_step, "Line-integral step in meters");
  cmd->add_option("--vmin", c.vmin, "Minimum robot speed, m/s");
  cmd->add_option("--vmax", c.vmax, "Maximum robot speed, m/s");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimally invasive path planning through crowd flow fields", "crowdflow"};
  app.require_subcommand(1);

  PlanArgs plan_args;
  auto* plan_cmd = app.add_subcommand("plan", "Plan a minimally invasive path");
  add_common(plan_cmd, plan_args.common);
  plan_cmd->add_option("--out", plan_args.out, "PlanResult JSON path (default stdout)");
  plan_cmd->add_option("--svg", plan_args.svg, "Figure with social and naive paths");

  TreeArgs tree_args;
  auto* tree_cmd = app.add_subcommand("tree", "Export the minimally invasive tree");
  add_common(tree_cmd, tree_args.common);
  tree_cmd->add_option("--source", tree_args.source, "Tree root node id (0 = start)");
  tree_cmd->add_option("--out", tree_args.out, "Edge CSV path (default stdout)");
  tree_cmd->add_option("--svg", tree_args.svg, "Tree figure colored by invasiveness per meter");

  CompareArgs compare_args;
  compare_args.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  auto* compare_cmd = app.add_subcommand("compare", "Social vs naive planner over several seeds");
  compare_cmd->add_option("--scenario", compare_args.scenarios, "Scenario(s), comma separated")
      ->required()
      ->delimiter(',');
  add_common(compare_cmd, compare_args.common, false);
  compare_cmd->add_option("--seeds", compare_args.seeds, "Comma-separated seeds")->delimiter(',');
  compare_cmd->add_option("--out", compare_args.out, "CSV path (default stdout)");

  OracleArgs oracle_args;
  auto* oracle_cmd = app.add_subcommand("oracle", "Dense-lattice reference plan");
  add_common(oracle_cmd, oracle_args.common);
  oracle_cmd->add_option("--grid", oracle_args.grid, "Lattice cells per side")->capture_default_str();
  oracle_cmd->add_option("--connectivity", oracle_args.connectivity, "8 or 16")->capture_default_str();
  oracle_cmd->add_option("--out", oracle_args.out, "LatticePlan JSON path (default stdout)");

  RenderArgs render_args;
  render_args.layers = {"density", "quiver", "start", "goal"};
  auto* render_cmd = app.add_subcommand("render", "Render the crowd field as SVG");
  add_common(render_cmd, render_args.common);
  render_cmd->add_option("--layers", render_args.layers,
                         "density,variance,quiver,start,goal or none")
      ->delimiter(',');
  render_cmd->add_option("--width", render_args.width, "Image width in px")->capture_default_str();
  render_cmd->add_option("--colormap", render_args.colormap, "viridis, magma or gray")
      ->capture_default_str();
  render_cmd->add_option("--out", render_args.out, "SVG path (default stdout)");
  render_cmd->add_option("--arrows-csv", render_args.arrows_csv, "Quiver arrow vectors as CSV");

  ExportArgs export_args;
  auto* export_cmd = app.add_subcommand("export", "Write a scenario as canonical JSON");
  export_cmd->add_option("--scenario", export_args.common.scenario,
                         "Built-in name or scenario JSON path")
      ->required();
  export_cmd->add_option("--vmin", export_args.common.vmin, "Minimum robot speed, m/s");
  export_cmd->add_option("--vmax", export_args.common.vmax, "Maximum robot speed, m/s");
  export_cmd->add_option("--out", export_args.out, "Scenario JSON path (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  if (plan_cmd->parsed()) return cmd_plan(plan_args, out, err);
  if (tree_cmd->parsed()) return cmd_tree(tree_args, out, err);
  if (compare_cmd->parsed()) return cmd_compare(compare_args, out, err);
  if (oracle_cmd->parsed()) return cmd_oracle(oracle_args, out, err);
  if (export_cmd->parsed()) return cmd_export(export_args, out, err);
  return cmd_render(render_args, out, err);
}

}  // namespace crowdflow::cli
