#include "gradfuse/core.hpp"

#include <cmath>
#include <string>

namespace gf {

const char* scale_name(Scale s) { return s == Scale::Linear ? "linear" : "log"; }

ValidMask ValidMask::all_valid(int height, int width) {
  ValidMask m;
  m.height = height;
  m.width = width;
  m.bits.assign(static_cast<std::size_t>(height) * width, 1);
  return m;
}

ValidMask ValidMask::all_invalid(int height, int width) {
  ValidMask m;
  m.height = height;
  m.width = width;
  m.bits.assign(static_cast<std::size_t>(height) * width, 0);
  return m;
}

std::size_t ValidMask::valid_count() const {
  std::size_t n = 0;
  for (std::uint8_t b : bits) n += b != 0;
  return n;
}

ValidMask valid_intersection(const ValidMask& a, const ValidMask& b) {
  if (!a.same_shape(b)) {
    throw ShapeMismatch("valid_intersection: " + std::to_string(a.height) + "x" +
                        std::to_string(a.width) + " vs " + std::to_string(b.height) + "x" +
                        std::to_string(b.width));
  }
  ValidMask out = a;
  for (std::size_t i = 0; i < out.bits.size(); ++i) out.bits[i] = (a.bits[i] && b.bits[i]) ? 1 : 0;
  return out;
}

DepthMap DepthMap::filled(int height, int width, double value, Scale scale) {
  DepthMap d;
  d.height = height;
  d.width = width;
  d.values.assign(static_cast<std::size_t>(height) * width, value);
  d.scale = scale;
  d.mask = ValidMask::all_valid(height, width);
  return d;
}

GradientMap GradientMap::zeros(int height, int width, Scale scale) {
  GradientMap g;
  g.height = height;
  g.width = width;
  g.gx.assign(static_cast<std::size_t>(height) * width, 0.0);
  g.gy.assign(static_cast<std::size_t>(height) * width, 0.0);
  g.scale = scale;
  g.mask = ValidMask::all_valid(height, width);
  return g;
}

RgbImage RgbImage::filled(int height, int width, double r, double g, double b) {
  RgbImage img;
  img.height = height;
  img.width = width;
  img.rgb.resize(static_cast<std::size_t>(height) * width * 3);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      img.at(x, y, 0) = r;
      img.at(x, y, 1) = g;
      img.at(x, y, 2) = b;
    }
  return img;
}

namespace {

std::string shape_str(int h, int w) { return std::to_string(h) + "x" + std::to_string(w); }

}  // namespace

void require_same_shape(const DepthMap& a, const DepthMap& b, const char* what) {
  if (a.height != b.height || a.width != b.width) {
    throw ShapeMismatch(std::string(what) + ": " + shape_str(a.height, a.width) + " vs " +
                        shape_str(b.height, b.width));
  }
}

void require_same_shape(const GradientMap& a, const GradientMap& b, const char* what) {
  if (a.height != b.height || a.width != b.width) {
    throw ShapeMismatch(std::string(what) + ": " + shape_str(a.height, a.width) + " vs " +
                        shape_str(b.height, b.width));
  }
}

void require_same_scale(Scale a, Scale b, const char* what) {
  if (a != b) {
    throw WrongScale(std::string(what) + ": " + scale_name(a) + " vs " + scale_name(b));
  }
}

void check_invariants(const DepthMap& d, const char* what) {
  if (d.mask.height != d.height || d.mask.width != d.width ||
      d.values.size() != d.pixel_count() || d.mask.bits.size() != d.pixel_count()) {
    throw ShapeMismatch(std::string(what) + ": mask/values shape disagrees with map");
  }
  for (int y = 0; y < d.height; ++y)
    for (int x = 0; x < d.width; ++x) {
      if (!d.valid(x, y)) continue;
      double v = d.at(x, y);
      if (!std::isfinite(v)) {
        throw Error(std::string(what) + ": non-finite depth at (" + std::to_string(x) + "," +
                    std::to_string(y) + ")");
      }
      if (d.scale == Scale::Linear && v <= 0.0) {
        throw NonPositiveDepth(std::string(what) + ": depth " + std::to_string(v) + " at (" +
                               std::to_string(x) + "," + std::to_string(y) + ")");
      }
    }
}

void check_invariants(const GradientMap& g, const char* what) {
  std::size_t n = static_cast<std::size_t>(g.height) * g.width;
  if (g.mask.height != g.height || g.mask.width != g.width || g.gx.size() != n ||
      g.gy.size() != n || g.mask.bits.size() != n) {
    throw ShapeMismatch(std::string(what) + ": mask/channel shape disagrees with map");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (g.mask.bits[i] && (!std::isfinite(g.gx[i]) || !std::isfinite(g.gy[i]))) {
      throw Error(std::string(what) + ": non-finite gradient at pixel " + std::to_string(i));
    }
  }
}

DepthMap to_log(const DepthMap& d) {
  if (d.scale != Scale::Linear) throw WrongScale("to_log: input already log-scale");
  DepthMap out = d;
  out.scale = Scale::Log;
  for (int y = 0; y < d.height; ++y)
    for (int x = 0; x < d.width; ++x) {
      if (!d.valid(x, y)) {
        out.at(x, y) = 0.0;
        continue;
      }
      double v = d.at(x, y);
      if (v <= 0.0) {
        throw NonPositiveDepth("to_log: depth " + std::to_string(v) + " at (" +
                               std::to_string(x) + "," + std::to_string(y) + ")");
      }
      out.at(x, y) = std::log(v);
    }
  return out;
}

DepthMap to_linear(const DepthMap& d) {
  if (d.scale != Scale::Log) throw WrongScale("to_linear: input already linear-scale");
  DepthMap out = d;
  out.scale = Scale::Linear;
  for (int y = 0; y < d.height; ++y)
    for (int x = 0; x < d.width; ++x) {
      out.at(x, y) = d.valid(x, y) ? std::exp(d.at(x, y)) : 0.0;
    }
  return out;
}

}  // namespace gf
