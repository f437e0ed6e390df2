#include "gradfuse/projection.hpp"

#include <cmath>
#include <cstdio>

#include "gradfuse/raster_io.hpp"

namespace gf {

PointCloud backproject(const DepthMap& d, const CameraIntrinsics& intr, const RgbImage* colors) {
  if (d.scale != Scale::Linear) throw WrongScale("backproject: depth must be linear meters");
  if (intr.fx <= 0.0 || intr.fy <= 0.0) {
    throw InvalidArgument("backproject: focal lengths must be positive");
  }
  if (colors && (colors->height != d.height || colors->width != d.width)) {
    throw ShapeMismatch("backproject: colour image shape disagrees with depth");
  }

  PointCloud cloud;
  cloud.points.reserve(d.mask.valid_count());
  if (colors) cloud.colors.reserve(d.mask.valid_count());
  for (int v = 0; v < d.height; ++v) {
    for (int u = 0; u < d.width; ++u) {
      if (!d.valid(u, v)) continue;
      double z = d.at(u, v);
      cloud.points.push_back({(u - intr.cx) / intr.fx * z, (v - intr.cy) / intr.fy * z, z});
      if (colors) {
        auto q = [&](int c) {
          return static_cast<std::uint8_t>(std::lround(colors->at(u, v, c) * 255.0));
        };
        cloud.colors.push_back({q(0), q(1), q(2)});
      }
    }
  }
  return cloud;
}

std::array<double, 2> project_point(const std::array<double, 3>& p, const CameraIntrinsics& intr) {
  return {p[0] / p[2] * intr.fx + intr.cx, p[1] / p[2] * intr.fy + intr.cy};
}

void write_ply(const std::string& path, const PointCloud& cloud) {
  const bool with_colors = !cloud.colors.empty();
  if (with_colors && cloud.colors.size() != cloud.points.size()) {
    throw InvalidArgument("write_ply: colour count disagrees with point count");
  }

  std::string out;
  out += "ply\nformat ascii 1.0\nelement vertex " + std::to_string(cloud.points.size()) + "\n";
  out += "property float x\nproperty float y\nproperty float z\n";
  if (with_colors) out += "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  out += "end_header\n";

  char line[160];
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const auto& p = cloud.points[i];
    if (with_colors) {
      const auto& c = cloud.colors[i];
      std::snprintf(line, sizeof(line), "%.9g %.9g %.9g %u %u %u\n", p[0], p[1], p[2], c[0], c[1],
                    c[2]);
    } else {
      std::snprintf(line, sizeof(line), "%.9g %.9g %.9g\n", p[0], p[1], p[2]);
    }
    out += line;
  }
  atomic_write_file(path, out);
}

CameraIntrinsics synthetic_intrinsics(int height, int width) {
  CameraIntrinsics intr;
  intr.fx = width;
  intr.fy = width;
  intr.cx = (width - 1) / 2.0;
  intr.cy = (height - 1) / 2.0;
  return intr;
}

}  // namespace gf
