#include "gradfuse/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace gf {

double Rng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1;
  do {
    u1 = uniform01();
  } while (u1 <= 0.0);
  double u2 = uniform01();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("Rng::below: bound must be positive");
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                        std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

std::uint64_t Rng::stream_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

void validate_spec(const SceneSpec& spec) {
  if (spec.height < 1 || spec.width < 1) {
    throw BadSpec("scene: dimensions must be positive, got " + std::to_string(spec.height) + "x" +
                  std::to_string(spec.width));
  }
  switch (spec.kind) {
    case SceneKind::FrontalPlane:
      if (spec.plane_depth <= 0.0) throw BadSpec("scene: plane depth must be positive");
      break;
    case SceneKind::RampX:
      if (spec.ramp_near <= 0.0 || spec.ramp_far <= 0.0) {
        throw BadSpec("scene: ramp depths must be positive");
      }
      break;
    case SceneKind::Box:
      if (spec.box_bg_depth <= 0.0 || spec.box_depth <= 0.0) {
        throw BadSpec("scene: box depths must be positive");
      }
      break;
    case SceneKind::Staircase:
      if (spec.stair_levels < 1) throw BadSpec("scene: staircase needs at least one level");
      break;
  }
}

RectSpec resolve_box_rect(const SceneSpec& spec) {
  RectSpec r = spec.box_rect;
  if (r.width <= 0 || r.height <= 0) {
    // Seeded layout: side lengths between 1/4 and 1/2 of the grid.
    Rng rng(Rng::stream_seed(spec.seed, 0xB0));
    r.width = std::max(1, spec.width / 4 + static_cast<int>(rng.below(
                              std::max<std::uint64_t>(1, spec.width / 4))));
    r.height = std::max(1, spec.height / 4 + static_cast<int>(rng.below(
                               std::max<std::uint64_t>(1, spec.height / 4))));
    r.width = std::min(r.width, spec.width);
    r.height = std::min(r.height, spec.height);
    r.x = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.width - r.width) + 1));
    r.y = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.height - r.height) + 1));
  }
  if (r.x < 0 || r.y < 0 || r.x + r.width > spec.width || r.y + r.height > spec.height) {
    throw BadSpec("scene: box rect outside grid bounds");
  }
  return r;
}

constexpr double kStairBase = 1.0;  // meters at the first band
constexpr double kStairRise = 0.5;  // meters per band

}  // namespace

std::pair<DepthMap, GradientMap> generate(const SceneSpec& spec) {
  validate_spec(spec);
  const int h = spec.height, w = spec.width;

  // Closed-form scene depth, evaluated directly at tap coordinates below so
  // the analytic gradient is an independent path from gradient_op.
  RectSpec rect;
  if (spec.kind == SceneKind::Box) rect = resolve_box_rect(spec);
  double ramp_slope =
      w > 1 ? (spec.ramp_far - spec.ramp_near) / static_cast<double>(w - 1) : 0.0;
  auto depth_at = [&](int x, int y) -> double {
    switch (spec.kind) {
      case SceneKind::FrontalPlane:
        return spec.plane_depth;
      case SceneKind::RampX:
        return spec.ramp_near + ramp_slope * x;
      case SceneKind::Box:
        return (x >= rect.x && x < rect.x + rect.width && y >= rect.y &&
                y < rect.y + rect.height)
                   ? spec.box_depth
                   : spec.box_bg_depth;
      case SceneKind::Staircase: {
        int band = std::min(spec.stair_levels - 1,
                            x * spec.stair_levels / std::max(1, w));
        return kStairBase + kStairRise * band;
      }
    }
    return 0.0;
  };

  DepthMap d = DepthMap::filled(h, w, 0.0, Scale::Linear);
  GradientMap g = GradientMap::zeros(h, w, Scale::Linear);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      d.at(x, y) = depth_at(x, y);
      std::size_t p = g.index(x, y);
      if (w >= 2) {
        if (x == 0)
          g.gx[p] = 2.0 * (depth_at(1, y) - depth_at(0, y));
        else if (x == w - 1)
          g.gx[p] = 2.0 * (depth_at(w - 1, y) - depth_at(w - 2, y));
        else
          g.gx[p] = depth_at(x + 1, y) - depth_at(x - 1, y);
      }
      if (h >= 2) {
        if (y == 0)
          g.gy[p] = 2.0 * (depth_at(x, 1) - depth_at(x, 0));
        else if (y == h - 1)
          g.gy[p] = 2.0 * (depth_at(x, h - 1) - depth_at(x, h - 2));
        else
          g.gy[p] = depth_at(x, y + 1) - depth_at(x, y - 1);
      }
    }
  return {std::move(d), std::move(g)};
}

std::pair<DepthMap, GradientMap> corrupt(const DepthMap& d, const GradientMap& g,
                                         const NoiseSpec& noise) {
  if (d.height != g.height || d.width != g.width) {
    throw ShapeMismatch("corrupt: depth and gradient shapes disagree");
  }
  if (noise.depth_sigma < 0.0 || noise.gradient_sigma < 0.0) {
    throw InvalidArgument("corrupt: sigmas must be nonnegative");
  }
  if (noise.hole_fraction < 0.0 || noise.hole_fraction >= 1.0) {
    throw InvalidArgument("corrupt: hole fraction must be in [0, 1)");
  }

  DepthMap nd = d;
  GradientMap ng = g;
  if (noise.depth_sigma > 0.0) {
    Rng rng(Rng::stream_seed(noise.seed, 1));
    for (std::size_t p = 0; p < nd.values.size(); ++p) {
      if (!nd.mask.bits[p]) continue;
      double v = nd.values[p] + noise.depth_sigma * rng.normal();
      // Linear depths stay positive; 20 sigma below any realistic scene.
      if (nd.scale == Scale::Linear && v < 1e-6) v = 1e-6;
      nd.values[p] = v;
    }
  }
  if (noise.gradient_sigma > 0.0) {
    Rng rng(Rng::stream_seed(noise.seed, 2));
    for (std::size_t p = 0; p < ng.gx.size(); ++p) {
      if (!ng.mask.bits[p]) continue;
      ng.gx[p] += noise.gradient_sigma * rng.normal();
      ng.gy[p] += noise.gradient_sigma * rng.normal();
    }
  }
  if (noise.hole_fraction > 0.0) {
    const std::size_t n = nd.pixel_count();
    const std::size_t holes = static_cast<std::size_t>(noise.hole_fraction * n);
    Rng rng(Rng::stream_seed(noise.seed, 3));
    // Partial Fisher-Yates: the first `holes` entries are a uniform sample
    // without replacement.
    std::vector<std::uint32_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::uint32_t>(i);
    for (std::size_t i = 0; i < holes; ++i) {
      std::size_t j = i + rng.below(n - i);
      std::swap(order[i], order[j]);
      nd.mask.bits[order[i]] = 0;
      nd.values[order[i]] = 0.0;
    }
  }
  return {std::move(nd), std::move(ng)};
}

}  // namespace gf
