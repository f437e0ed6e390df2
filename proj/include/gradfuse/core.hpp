#ifndef GRADFUSE_CORE_HPP
#define GRADFUSE_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gradfuse/errors.hpp"

namespace gf {

// Scale tag for depth-like rasters: Linear values are meters, Log values are
// natural-log meters.
enum class Scale : std::uint8_t { Linear = 0, Log = 1 };

const char* scale_name(Scale s);

// Boolean validity grid. A pixel is valid when its depth (or gradient) value
// is usable; invalid pixels are excluded from every sum in the library.
struct ValidMask {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> bits;  // 1 = valid, row-major

  static ValidMask all_valid(int height, int width);
  static ValidMask all_invalid(int height, int width);

  bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
  void set(int x, int y, bool v) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
  std::size_t valid_count() const;
  bool same_shape(const ValidMask& o) const { return height == o.height && width == o.width; }
};

ValidMask valid_intersection(const ValidMask& a, const ValidMask& b);

// Plain 2-d double raster without mask or scale semantics. Used for loss
// gradients and solver scratch space.
struct Grid {
  int height = 0;
  int width = 0;
  std::vector<double> v;

  Grid() = default;
  Grid(int h, int w, double fill = 0.0)
      : height(h), width(w), v(static_cast<std::size_t>(h) * w, fill) {}

  double& at(int x, int y) { return v[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return v[static_cast<std::size_t>(y) * width + x]; }
};

// Depth raster with validity mask and scale tag. Values at invalid pixels are
// stored as 0 and must never be read for numerical purposes.
struct DepthMap {
  int height = 0;
  int width = 0;
  std::vector<double> values;  // row-major, index p = y*width + x
  Scale scale = Scale::Linear;
  ValidMask mask;

  static DepthMap filled(int height, int width, double value, Scale scale = Scale::Linear);

  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
  double at(int x, int y) const { return values[index(x, y)]; }
  double& at(int x, int y) { return values[index(x, y)]; }
  bool valid(int x, int y) const { return mask.at(x, y); }
  std::size_t pixel_count() const { return static_cast<std::size_t>(height) * width; }
};

// Paired x/y depth-derivative rasters sharing one validity mask.
struct GradientMap {
  int height = 0;
  int width = 0;
  std::vector<double> gx;  // depth units per pixel step in x
  std::vector<double> gy;
  Scale scale = Scale::Linear;
  ValidMask mask;

  static GradientMap zeros(int height, int width, Scale scale = Scale::Linear);

  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
  bool valid(int x, int y) const { return mask.at(x, y); }
};

// RGB image with channels in [0,1], interleaved r,g,b.
struct RgbImage {
  int height = 0;
  int width = 0;
  std::vector<double> rgb;  // size height*width*3

  static RgbImage filled(int height, int width, double r, double g, double b);

  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width + x) * 3 + c;
  }
  double at(int x, int y, int c) const { return rgb[index(x, y, c)]; }
  double& at(int x, int y, int c) { return rgb[index(x, y, c)]; }
};

// Pinhole camera parameters in pixels.
struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
};

// Shape checks; throw ShapeMismatch naming the caller.
void require_same_shape(const DepthMap& a, const DepthMap& b, const char* what);
void require_same_shape(const GradientMap& a, const GradientMap& b, const char* what);
void require_same_scale(Scale a, Scale b, const char* what);

// Structural invariant checks for data arriving from outside (files, CLI).
// Verifies mask dimensions, finiteness at valid pixels and positivity of
// Linear-scale depths. Throws the matching error type.
void check_invariants(const DepthMap& d, const char* what);
void check_invariants(const GradientMap& g, const char* what);

// Natural log per valid pixel; requires Linear input with positive depths.
DepthMap to_log(const DepthMap& d);

// exp per valid pixel; requires Log input. Inverse of to_log.
DepthMap to_linear(const DepthMap& d);

}  // namespace gf

#endif  // GRADFUSE_CORE_HPP
