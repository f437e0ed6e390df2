#ifndef GRADFUSE_PROJECTION_HPP
#define GRADFUSE_PROJECTION_HPP

#include <array>
#include <string>
#include <vector>

#include "gradfuse/core.hpp"

namespace gf {

struct PointCloud {
  std::vector<std::array<double, 3>> points;            // camera-space meters, z > 0
  std::vector<std::array<std::uint8_t, 3>> colors;      // empty when no colours attached
};

// Inverse pinhole mapping: each valid pixel (u,v) with depth z becomes
//   ((u - cx) * z / fx, (v - cy) * z / fy, z)
// in row-major pixel order. Requires Linear scale. colors, when given, must
// match the depth dimensions.
PointCloud backproject(const DepthMap& d, const CameraIntrinsics& intr,
                       const RgbImage* colors = nullptr);

// Forward pinhole mapping back to pixel coordinates (u, v).
std::array<double, 2> project_point(const std::array<double, 3>& p, const CameraIntrinsics& intr);

// ASCII PLY 1.0 with float x,y,z and, when colours are present, uchar
// red/green/blue. Output is byte-identical across runs for identical clouds.
void write_ply(const std::string& path, const PointCloud& cloud);

// Placeholder intrinsics for synthetic scenes without a calibrated camera:
// fx = fy = width, principal point at the grid centre.
CameraIntrinsics synthetic_intrinsics(int height, int width);

}  // namespace gf

#endif  // GRADFUSE_PROJECTION_HPP
