#ifndef GRADFUSE_TRANSFORMS_HPP
#define GRADFUSE_TRANSFORMS_HPP

#include <array>

#include "gradfuse/core.hpp"

namespace gf {

// Augmentation transform kinds. ColourInverse is the algebraic inverse of a
// Colour transform; both act as the identity on depth and gradient maps.
enum class TransformKind : std::uint8_t {
  Identity = 0,
  FlipHorizontal = 1,
  Colour = 2,
  ColourInverse = 3,
};

struct ColourParams {
  double brightness = 0.0;               // additive delta
  double contrast = 1.0;                 // multiplicative scale about 0.5
  std::array<double, 3> gamma{1, 1, 1};  // per-channel multiplier, each in [0.8, 1.2]
};

struct AugTransform {
  TransformKind kind = TransformKind::Identity;
  ColourParams colour;  // only meaningful for Colour / ColourInverse

  static AugTransform identity();
  static AugTransform flip_horizontal();
  // Throws InvalidArgument when a gamma component leaves [0.8, 1.2] or the
  // contrast factor is not positive.
  static AugTransform make_colour(double brightness, double contrast,
                                  const std::array<double, 3>& gamma);
};

AugTransform inverse(const AugTransform& t);

// Mirrors columns for FlipHorizontal; Colour adds brightness, scales contrast
// about 0.5, multiplies per-channel gamma and clamps to [0,1].
RgbImage apply_to_image(const AugTransform& t, const RgbImage& img);

// Spatial transforms permute pixels and mask identically; colour transforms
// are the identity on depth.
DepthMap apply_to_depth(const AugTransform& t, const DepthMap& d);

// FlipHorizontal mirrors both channels and negates gx (the x-derivative
// changes sign under a mirror); colour transforms are the identity.
GradientMap apply_to_gradients(const AugTransform& t, const GradientMap& g);

// Spatial action on a bare grid (no mask, no sign rules). Used to push loss
// gradients through realignment permutations.
Grid apply_spatial(const AugTransform& t, const Grid& g);

// Realignment mapping g_ij between two transforms: applied to the estimate of
// the target image it lands in the source image's reference frame.
struct TransformMapping {
  AugTransform source_transform;
  AugTransform target_transform;
};

// apply_to_depth(source, apply_to_depth(inverse(target), d))
DepthMap realign(const TransformMapping& m, const DepthMap& d);

Grid realign_spatial(const TransformMapping& m, const Grid& g);

// Adjoint of the realignment permutation: pushes a gradient grid living in
// the source frame back into the target frame.
Grid realign_adjoint_spatial(const TransformMapping& m, const Grid& g);

}  // namespace gf

#endif  // GRADFUSE_TRANSFORMS_HPP
