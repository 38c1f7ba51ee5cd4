#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "crowdflow/error.hpp"
#include "crowdflow/scenarios.hpp"

namespace crowdflow {
namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// ----------------------------------------------------------------- writing

json vec(Vec2 v) { return json::array({v.x, v.y}); }
json rect(const Rect& r) { return {{"min", vec(r.min)}, {"max", vec(r.max)}}; }

json scalar(const ScalarField& f) {
  return std::visit(
      overloaded{
          [](const ConstantScalar& c) -> json { return {{"type", "constant"}, {"value", c.value}}; },
          [](const GaussianBump& g) -> json {
            return {{"type", "gaussian"}, {"center", vec(g.center)}, {"std", g.std_dev},
                    {"floor", g.floor},   {"peak", g.peak}};
          },
          [](const LinearRamp& r) -> json {
            return {{"type", "ramp"},      {"axis", r.axis == Axis::X ? "x" : "y"},
                    {"from", r.from},      {"to", r.to},
                    {"start_value", r.start_value}, {"end_value", r.end_value}};
          },
      },
      f);
}

json velocity(const VelocityField& f) {
  return std::visit(
      overloaded{
          [](const UniformVelocity& u) -> json { return {{"type", "uniform"}, {"value", vec(u.value)}}; },
          [](const Vortex& v) -> json {
            return {{"type", "vortex"}, {"center", vec(v.center)}, {"angular_rate", v.angular_rate}};
          },
          [](const Circulation& c) -> json {
            return {{"type", "circulation"}, {"center", vec(c.center)}, {"speed", c.speed}};
          },
          [](const Toward& t) -> json {
            return {{"type", "toward"}, {"target", vec(t.target)}, {"speed", t.speed}};
          },
      },
      f);
}

json flow_json(const CrowdFlow& flow) {
  return std::visit(
      overloaded{
          [](const CrowdFlow::Components& comps) -> json {
            json arr = json::array();
            for (const auto& c : comps) {
              json jc{{"density", scalar(c.density)},
                      {"velocity", velocity(c.velocity)},
                      {"variance", scalar(c.variance)}};
              if (c.support) jc["support"] = rect(*c.support);
              arr.push_back(std::move(jc));
            }
            return {{"components", std::move(arr)}};
          },
          [](const GridField& g) -> json {
            return {{"grid",
                     {{"origin", vec(g.origin())},
                      {"cell_size", g.cell_size()},
                      {"nx", g.nx()},
                      {"ny", g.ny()},
                      {"density", g.density()},
                      {"velocity_x", g.velocity_x()},
                      {"velocity_y", g.velocity_y()},
                      {"variance", g.variance()}}}};
          },
      },
      flow.source());
}

// ----------------------------------------------------------------- reading

std::string child(const std::string& ptr, std::string_view key) {
  return ptr + "/" + std::string(key);
}
std::string child(const std::string& ptr, std::size_t index) {
  return ptr + "/" + std::to_string(index);
}

const json& field(const json& obj, std::string_view key, const std::string& ptr) {
  if (!obj.is_object()) throw ParseError(ptr, "expected an object");
  const auto it = obj.find(std::string(key));
  if (it == obj.end()) throw ParseError(child(ptr, key), "missing required field '" + std::string(key) + "'");
  return *it;
}

double number(const json& j, const std::string& ptr) {
  if (!j.is_number()) throw ParseError(ptr, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(ptr, "expected a finite number");
  return v;
}

double number(const json& obj, std::string_view key, const std::string& ptr) {
  return number(field(obj, key, ptr), child(ptr, key));
}

double nonnegative(const json& obj, std::string_view key, const std::string& ptr,
                   const std::string& what) {
  const double v = number(obj, key, ptr);
  if (v < 0.0)
    throw ValidationError(child(ptr, key), what + " must be >= 0, got " + std::to_string(v));
  return v;
}

double positive(const json& obj, std::string_view key, const std::string& ptr) {
  const double v = number(obj, key, ptr);
  if (!(v > 0.0))
    throw ValidationError(child(ptr, key), std::string(key) + " must be > 0, got " + std::to_string(v));
  return v;
}

std::uint64_t unsigned_integer(const json& obj, std::string_view key, const std::string& ptr) {
  const json& j = field(obj, key, ptr);
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    throw ParseError(child(ptr, key), "expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

std::string string_field(const json& obj, std::string_view key, const std::string& ptr) {
  const json& j = field(obj, key, ptr);
  if (!j.is_string()) throw ParseError(child(ptr, key), "expected a string");
  return j.get<std::string>();
}

Vec2 read_vec(const json& j, const std::string& ptr) {
  if (!j.is_array() || j.size() != 2) throw ParseError(ptr, "expected [x, y]");
  return {number(j[0], child(ptr, std::size_t{0})), number(j[1], child(ptr, std::size_t{1}))};
}

Vec2 read_vec(const json& obj, std::string_view key, const std::string& ptr) {
  return read_vec(field(obj, key, ptr), child(ptr, key));
}

Rect read_rect(const json& j, const std::string& ptr) {
  Rect r{read_vec(j, "min", ptr), read_vec(j, "max", ptr)};
  if (r.degenerate()) throw ValidationError(ptr, "rectangle must have max > min on both axes");
  return r;
}

// `what` names the physical quantity so validation messages say which field is negative.
ScalarField read_scalar(const json& j, const std::string& ptr, const std::string& what) {
  const std::string type = string_field(j, "type", ptr);
  if (type == "constant") return ConstantScalar{nonnegative(j, "value", ptr, what)};
  if (type == "gaussian") {
    return GaussianBump{read_vec(j, "center", ptr), positive(j, "std", ptr),
                        nonnegative(j, "floor", ptr, what), nonnegative(j, "peak", ptr, what)};
  }
  if (type == "ramp") {
    const std::string axis = string_field(j, "axis", ptr);
    if (axis != "x" && axis != "y") throw ParseError(child(ptr, "axis"), "axis must be \"x\" or \"y\"");
    LinearRamp r{axis == "x" ? Axis::X : Axis::Y, number(j, "from", ptr), number(j, "to", ptr),
                 nonnegative(j, "start_value", ptr, what), nonnegative(j, "end_value", ptr, what)};
    if (r.from == r.to) throw ValidationError(child(ptr, "to"), "ramp needs from != to");
    return r;
  }
  throw ParseError(child(ptr, "type"), "unknown scalar field type '" + type + "'");
}

VelocityField read_velocity(const json& j, const std::string& ptr) {
  const std::string type = string_field(j, "type", ptr);
  if (type == "uniform") return UniformVelocity{read_vec(j, "value", ptr)};
  if (type == "vortex") return Vortex{read_vec(j, "center", ptr), number(j, "angular_rate", ptr)};
  if (type == "circulation") return Circulation{read_vec(j, "center", ptr), number(j, "speed", ptr)};
  if (type == "toward") return Toward{read_vec(j, "target", ptr), number(j, "speed", ptr)};
  throw ParseError(child(ptr, "type"), "unknown velocity field type '" + type + "'");
}

std::vector<double> read_array(const json& obj, std::string_view key, const std::string& ptr,
                               std::size_t expected, const char* nonneg_what) {
  const json& arr = field(obj, key, ptr);
  const std::string p = child(ptr, key);
  if (!arr.is_array()) throw ParseError(p, "expected an array");
  if (arr.size() != expected)
    throw ParseError(p, "expected nx*ny = " + std::to_string(expected) + " values, got " +
                            std::to_string(arr.size()));
  std::vector<double> out;
  out.reserve(expected);
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const double v = number(arr[k], child(p, k));
    if (nonneg_what != nullptr && v < 0.0)
      throw ValidationError(child(p, k), std::string(nonneg_what) + " must be >= 0, got " +
                                             std::to_string(v));
    out.push_back(v);
  }
  return out;
}

CrowdFlow read_flow(const json& j, const std::string& ptr, const Rect& bounds) {
  if (!j.is_object()) throw ParseError(ptr, "expected an object");
  const bool has_components = j.contains("components");
  const bool has_grid = j.contains("grid");
  if (has_components == has_grid)
    throw ParseError(ptr, "flow needs exactly one of 'components' or 'grid'");

  if (has_grid) {
    const std::string gp = child(ptr, "grid");
    const json& g = j["grid"];
    const auto nx = unsigned_integer(g, "nx", gp);
    const auto ny = unsigned_integer(g, "ny", gp);
    if (nx < 2 || ny < 2) throw ValidationError(gp, "grid needs nx >= 2 and ny >= 2");
    if (nx * ny > GridField::kDefaultMaxNodes) throw ValidationError(gp, "grid exceeds node cap");
    const std::size_t count = nx * ny;
    GridField grid(read_vec(g, "origin", gp), positive(g, "cell_size", gp), nx, ny,
                   read_array(g, "density", gp, count, "density"),
                   read_array(g, "velocity_x", gp, count, nullptr),
                   read_array(g, "velocity_y", gp, count, nullptr),
                   read_array(g, "variance", gp, count, "variance"));
    return CrowdFlow(bounds, std::move(grid));
  }

  const std::string cp = child(ptr, "components");
  const json& arr = j["components"];
  if (!arr.is_array()) throw ParseError(cp, "expected an array");
  if (arr.empty()) throw ValidationError(cp, "flow needs at least one component");
  CrowdFlow::Components comps;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const std::string p = child(cp, k);
    const json& c = arr[k];
    ComponentFlow comp;
    comp.density = read_scalar(field(c, "density", p), child(p, "density"), "density");
    comp.velocity = read_velocity(field(c, "velocity", p), child(p, "velocity"));
    if (c.contains("variance"))
      comp.variance = read_scalar(c["variance"], child(p, "variance"), "variance");
    if (c.contains("support")) comp.support = read_rect(c["support"], child(p, "support"));
    comps.push_back(std::move(comp));
  }
  return CrowdFlow(bounds, std::move(comps));
}

Obstacle read_obstacle(const json& j, const std::string& ptr) {
  const std::string type = string_field(j, "type", ptr);
  if (type == "circle") return Circle{read_vec(j, "center", ptr), positive(j, "radius", ptr)};
  if (type == "rect") return read_rect(j, ptr);
  throw ParseError(child(ptr, "type"), "unknown obstacle type '" + type + "'");
}

}  // namespace

std::string to_json(const Scenario& s) {
  json obstacles = json::array();
  for (const auto& o : s.environment.obstacles) {
    obstacles.push_back(std::visit(
        overloaded{
            [](const Circle& c) -> json {
              return {{"type", "circle"}, {"center", vec(c.center)}, {"radius", c.radius}};
            },
            [](const Rect& r) -> json {
              return {{"type", "rect"}, {"min", vec(r.min)}, {"max", vec(r.max)}};
            },
        },
        o));
  }
  const json doc{
      {"version", kScenarioSchemaVersion},
      {"name", s.name},
      {"bounds", rect(s.environment.bounds)},
      {"obstacles", std::move(obstacles)},
      {"limits", {{"v_min", s.environment.limits.v_min}, {"v_max", s.environment.limits.v_max}}},
      {"flow", flow_json(s.flow)},
      {"start", vec(s.start)},
      {"goal", vec(s.goal)},
      {"defaults",
       {{"samples", s.defaults.samples},
        {"seed", s.defaults.seed},
        {"quadrature_step", s.defaults.quadrature_step}}},
  };
  return doc.dump(2) + "\n";
}

Scenario scenario_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("", std::string("invalid JSON: ") + e.what());
  }
  const std::string root;
  if (!doc.is_object()) throw ParseError(root, "scenario must be a JSON object");

  const auto version = unsigned_integer(doc, "version", root);
  if (version != kScenarioSchemaVersion)
    throw ParseError("/version", "unsupported scenario version " + std::to_string(version));

  Environment env;
  env.bounds = read_rect(field(doc, "bounds", root), "/bounds");
  const json& obstacles = field(doc, "obstacles", root);
  if (!obstacles.is_array()) throw ParseError("/obstacles", "expected an array");
  for (std::size_t k = 0; k < obstacles.size(); ++k)
    env.obstacles.push_back(read_obstacle(obstacles[k], child("/obstacles", k)));
  const json& limits = field(doc, "limits", root);
  env.limits = {positive(limits, "v_min", "/limits"), positive(limits, "v_max", "/limits")};
  if (env.limits.v_max < env.limits.v_min)
    throw ValidationError("/limits/v_max", "v_max must be >= v_min");
  if (!(env.free_area() > 0.0)) throw ValidationError("/obstacles", "obstacles leave no free area");

  PlannerDefaults defaults;
  const json& d = field(doc, "defaults", root);
  defaults.samples = unsigned_integer(d, "samples", "/defaults");
  if (defaults.samples < 2) throw ValidationError("/defaults/samples", "samples must be >= 2");
  defaults.seed = unsigned_integer(d, "seed", "/defaults");
  defaults.quadrature_step = positive(d, "quadrature_step", "/defaults");

  CrowdFlow flow = read_flow(field(doc, "flow", root), "/flow", env.bounds);
  Scenario s{string_field(doc, "name", root),
             std::move(env),
             std::move(flow),
             read_vec(doc, "start", root),
             read_vec(doc, "goal", root),
             defaults};
  if (!s.environment.point_free(s.start))
    throw ValidationError("/start", "start lies outside the bounds or inside an obstacle");
  if (!s.environment.point_free(s.goal))
    throw ValidationError("/goal", "goal lies outside the bounds or inside an obstacle");
  return s;
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  out << to_json(scenario);
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open scenario file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return scenario_from_json(buffer.str());
}

}  // namespace crowdflow
