#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cli/render.hpp"
#include "crowdflow/scenarios.hpp"

namespace crowdflow::cli {

/// Process exit codes.
enum ExitCode : int { kOk = 0, kUsageError = 1, kNoPath = 2 };

/// Version stamped into every JSON document the tool writes.
inline constexpr int kOutputSchemaVersion = 1;

/// Flags shared by every subcommand; unset values fall back to scenario defaults.
struct CommonOptions {
  std::string scenario;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> quadrature_step;
  std::optional<double> vmin;
  std::optional<double> vmax;
};

/// Resolves a built-in name, a file path, or a file in $CROWDFLOW_SCENARIO_DIR
/// (with or without a .json suffix), then applies speed-limit overrides.
/// Throws InputError listing built-in names when nothing matches.
Scenario resolve_scenario(const CommonOptions& common);

struct PlanArgs {
  CommonOptions common;
  std::string out;  ///< empty: stdout
  std::string svg;
};

struct TreeArgs {
  CommonOptions common;
  std::uint32_t source = 0;
  std::string out;  ///< edge CSV; empty: stdout
  std::string svg;
};

struct CompareArgs {
  std::vector<std::string> scenarios;
  CommonOptions common;  ///< `scenario` ignored
  std::vector<std::uint64_t> seeds;
  std::string out;  ///< CSV; empty: stdout
};

struct OracleArgs {
  CommonOptions common;
  int grid = 200;
  int connectivity = 16;
  std::string out;
};

struct RenderArgs {
  CommonOptions common;
  std::vector<std::string> layers;
  int width = 800;
  std::string colormap = "viridis";
  std::string out;
  std::string arrows_csv;
};

struct ExportArgs {
  CommonOptions common;
  std::string out;
};

int cmd_plan(const PlanArgs& args, std::ostream& out, std::ostream& err);
int cmd_tree(const TreeArgs& args, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream& err);
int cmd_oracle(const OracleArgs& args, std::ostream& out, std::ostream& err);
int cmd_render(const RenderArgs& args, std::ostream& out, std::ostream& err);
int cmd_export(const ExportArgs& args, std::ostream& out, std::ostream& err);

/// PlanResult serialized as the tool's canonical JSON document.
std::string plan_result_json(const Scenario& scenario, const PlanResult& plan,
                             const BuildOptions& options);

/// Parses argv (without the program name) and dispatches to a subcommand.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace crowdflow::cli
