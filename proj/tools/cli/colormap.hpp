#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace crowdflow::cli {

struct Rgb {
  unsigned char r = 0;
  unsigned char g = 0;
  unsigned char b = 0;
};

/// Piecewise-linear colormap sampled at t in [0, 1] (clamped).
class Colormap {
 public:
  /// Throws InputError for unknown names.
  static Colormap named(std::string_view name);
  static const std::vector<std::string>& names();

  Rgb operator()(double t) const;

 private:
  explicit Colormap(std::vector<Rgb> stops) : stops_(std::move(stops)) {}
  std::vector<Rgb> stops_;
};

std::string hex(Rgb c);

}  // namespace crowdflow::cli
