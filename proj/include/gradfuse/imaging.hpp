#ifndef GRADFUSE_IMAGING_HPP
#define GRADFUSE_IMAGING_HPP

#include "gradfuse/core.hpp"

namespace gf {

// Window sizes are centered, so the nominal 10x10 kernel becomes 11x11 with
// spatial sigma 5 px. Range sigma is in meters when the filtered signal is
// depth, and is reused as the guide-colour sigma for the cross-bilateral fill.
struct BilateralParams {
  int window = 11;  // odd, >= 3
  double spatial_sigma = 5.0;
  double range_sigma = 0.1;
};

void validate(const BilateralParams& params);

// Align-corners bilinear upsampling to (height*factor, width*factor). Corner
// values are preserved exactly. An output pixel is valid only when every
// interpolation tap with nonzero weight is valid.
DepthMap upsample_bilinear(const DepthMap& d, int factor);

struct FillResult {
  DepthMap map;
  int passes = 0;
  std::size_t unfilled = 0;  // invalid pixels no pass could reach
};

// Fills invalid pixels with the guide-weighted average of valid neighbours
// (spatial Gaussian x guide-colour Gaussian). Valid pixels are never
// modified. Pixels filled in one pass become sources for the next; stops when
// nothing is fillable or after 20 passes, reporting what remains unfilled.
FillResult cross_bilateral_fill(const DepthMap& d, const RgbImage& guide,
                                const BilateralParams& params = {});

// Classic bilateral filter with the depth itself as the range guide. Only
// valid taps contribute; the mask is preserved. Requires Linear scale since
// the range sigma is in meters.
DepthMap bilateral_smooth(const DepthMap& d, const BilateralParams& params = {});

}  // namespace gf

#endif  // GRADFUSE_IMAGING_HPP
