#include "cli/colormap.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "crowdflow/error.hpp"

namespace crowdflow::cli {

const std::vector<std::string>& Colormap::names() {
  static const std::vector<std::string> n{"viridis", "magma", "gray"};
  return n;
}

Colormap Colormap::named(std::string_view name) {
  // Stops sampled from matplotlib's maps at t = 0, 1/8, ..., 1.
  if (name == "viridis") {
    return Colormap({{68, 1, 84},    {71, 44, 122},  {59, 81, 139},  {44, 113, 142}, {33, 144, 141},
                     {39, 173, 129}, {92, 200, 99},  {170, 220, 50}, {253, 231, 37}});
  }
  if (name == "magma") {
    return Colormap({{0, 0, 4},       {28, 16, 68},    {79, 18, 123},   {129, 37, 129}, {181, 54, 122},
                     {229, 80, 100}, {251, 135, 97}, {254, 194, 135}, {252, 253, 191}});
  }
  if (name == "gray") return Colormap({{0, 0, 0}, {255, 255, 255}});
  std::string valid;
  for (const auto& n : names()) valid += (valid.empty() ? "" : ", ") + n;
  throw InputError("unknown colormap '" + std::string(name) + "'; valid: " + valid);
}

Rgb Colormap::operator()(double t) const {
  if (!std::isfinite(t)) t = 0.0;
  t = std::clamp(t, 0.0, 1.0) * static_cast<double>(stops_.size() - 1);
  const auto k = std::min(static_cast<std::size_t>(t), stops_.size() - 2);
  const double f = t - static_cast<double>(k);
  auto mix = [f](unsigned char a, unsigned char b) {
    return static_cast<unsigned char>(std::lround(a + f * (static_cast<double>(b) - a)));
  };
  const Rgb& a = stops_[k];
  const Rgb& b = stops_[k + 1];
  return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
}

std::string hex(Rgb c) { return fmt::format("#{:02x}{:02x}{:02x}", c.r, c.g, c.b); }

}  // namespace crowdflow::cli
