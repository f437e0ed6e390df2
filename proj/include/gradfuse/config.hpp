#ifndef GRADFUSE_CONFIG_HPP
#define GRADFUSE_CONFIG_HPP

#include <string>

#include "gradfuse/core.hpp"
#include "gradfuse/fusion.hpp"
#include "gradfuse/imaging.hpp"

namespace gf {

// Batch pipeline configuration. Declared in a plain-text key=value file with
// '#' comments; every key can also be set by a command-line flag, which takes
// precedence over the file.
struct PipelineConfig {
  double omega = 10.0;
  double lambda = 1.0;
  double epsilon = 1e-4;
  Scale fusion_domain = Scale::Log;
  IrlsConfig irls;
  BilateralParams bilateral;
  CameraIntrinsics intrinsics;  // fx <= 0 selects the synthetic default
};

// Recognized keys:
//   omega, lambda, epsilon, fusion_domain (log|linear),
//   irls.max_outer_iters, irls.outer_tol, irls.cg_tol, irls.cg_max_iters,
//   bilateral.window, bilateral.spatial_sigma, bilateral.range_sigma,
//   intrinsics.fx, intrinsics.fy, intrinsics.cx, intrinsics.cy
// Throws ConfigError naming the offending key and line.
void load_config_file(const std::string& path, PipelineConfig& config);

// Parses "log" / "linear"; throws ConfigError otherwise.
Scale parse_scale(const std::string& value);

}  // namespace gf

#endif  // GRADFUSE_CONFIG_HPP
