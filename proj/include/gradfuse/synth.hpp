#ifndef GRADFUSE_SYNTH_HPP
#define GRADFUSE_SYNTH_HPP

#include <cstdint>
#include <random>
#include <utility>

#include "gradfuse/core.hpp"

namespace gf {

// Seeded generator with fully specified output: mt19937_64 raw draws, uniform
// doubles as (x >> 11) * 2^-53 and normals via Box-Muller. Reproducible
// across platforms, unlike std::normal_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01();  // [0, 1)
  double normal();     // standard normal
  std::uint64_t below(std::uint64_t bound);  // uniform in [0, bound), rejection-sampled

  // Decorrelated stream seed for sub-generators (splitmix64 step).
  static std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

struct RectSpec {
  int x = 0, y = 0, width = 0, height = 0;
};

enum class SceneKind : std::uint8_t { FrontalPlane, RampX, Box, Staircase };

// Synthetic ground-truth scenes. All depths are linear meters.
//   FrontalPlane: constant plane_depth.
//   RampX:        depth rises linearly from ramp_near at x=0 to ramp_far at x=width-1.
//   Box:          box_depth rectangle over a box_bg_depth background; a rect
//                 with non-positive width/height is drawn from the seed.
//   Staircase:    stair_levels equal vertical bands along x, starting at
//                 1.0 m and rising 0.5 m per band.
struct SceneSpec {
  SceneKind kind = SceneKind::FrontalPlane;
  int height = 0;
  int width = 0;
  std::uint64_t seed = 0;

  double plane_depth = 2.0;
  double ramp_near = 1.0;
  double ramp_far = 3.0;
  double box_bg_depth = 3.0;
  double box_depth = 1.5;
  RectSpec box_rect;  // left unset to randomize from the seed
  int stair_levels = 4;
};

struct NoiseSpec {
  double depth_sigma = 0.0;     // meters
  double gradient_sigma = 0.0;  // per pixel
  double hole_fraction = 0.0;   // in [0, 1)
  std::uint64_t seed = 0;
};

// Deterministic ground-truth depth and its gradient under the same
// central/one-sided difference convention as gradient_op, computed directly
// from the scene's closed form.
std::pair<DepthMap, GradientMap> generate(const SceneSpec& spec);

// Adds seeded Gaussian noise to depth and gradients on independent streams
// and marks floor(hole_fraction * pixels) randomly chosen depth pixels
// invalid. Gradient masks are untouched (holes model missing sensor depth).
std::pair<DepthMap, GradientMap> corrupt(const DepthMap& d, const GradientMap& g,
                                         const NoiseSpec& noise);

}  // namespace gf

#endif  // GRADFUSE_SYNTH_HPP
