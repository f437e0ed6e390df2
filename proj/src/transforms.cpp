#include "gradfuse/transforms.hpp"

#include <algorithm>
#include <string>

namespace gf {

AugTransform AugTransform::identity() { return AugTransform{}; }

AugTransform AugTransform::flip_horizontal() {
  AugTransform t;
  t.kind = TransformKind::FlipHorizontal;
  return t;
}

AugTransform AugTransform::make_colour(double brightness, double contrast,
                                       const std::array<double, 3>& gamma) {
  for (double g : gamma) {
    if (g < 0.8 || g > 1.2) {
      throw InvalidArgument("colour transform: gamma " + std::to_string(g) +
                            " outside [0.8, 1.2]");
    }
  }
  if (contrast <= 0.0) {
    throw InvalidArgument("colour transform: contrast factor must be positive");
  }
  AugTransform t;
  t.kind = TransformKind::Colour;
  t.colour = ColourParams{brightness, contrast, gamma};
  return t;
}

AugTransform inverse(const AugTransform& t) {
  AugTransform out = t;
  switch (t.kind) {
    case TransformKind::Identity:
    case TransformKind::FlipHorizontal:  // self-inverse
      return out;
    case TransformKind::Colour:
      out.kind = TransformKind::ColourInverse;
      return out;
    case TransformKind::ColourInverse:
      out.kind = TransformKind::Colour;
      return out;
  }
  return out;
}

namespace {

bool is_spatial(const AugTransform& t) { return t.kind == TransformKind::FlipHorizontal; }

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Forward colour op: brightness add, contrast about 0.5, per-channel gamma.
double colour_forward(const ColourParams& p, double v, int c) {
  double out = v + p.brightness;
  out = (out - 0.5) * p.contrast + 0.5;
  return out * p.gamma[static_cast<std::size_t>(c)];
}

// Algebraic inverse of colour_forward. Exact only where the forward pass did
// not saturate the [0,1] clamp.
double colour_inverse(const ColourParams& p, double v, int c) {
  double out = v / p.gamma[static_cast<std::size_t>(c)];
  out = (out - 0.5) / p.contrast + 0.5;
  return out - p.brightness;
}

RgbImage flip_image(const RgbImage& img) {
  RgbImage out = img;
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = img.at(img.width - 1 - x, y, c);
  return out;
}

}  // namespace

RgbImage apply_to_image(const AugTransform& t, const RgbImage& img) {
  switch (t.kind) {
    case TransformKind::Identity:
      return img;
    case TransformKind::FlipHorizontal:
      return flip_image(img);
    case TransformKind::Colour: {
      RgbImage out = img;
      for (double& v : out.rgb) v = 0.0;
      for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
          for (int c = 0; c < 3; ++c)
            out.at(x, y, c) = clamp01(colour_forward(t.colour, img.at(x, y, c), c));
      return out;
    }
    case TransformKind::ColourInverse: {
      RgbImage out = img;
      for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
          for (int c = 0; c < 3; ++c)
            out.at(x, y, c) = clamp01(colour_inverse(t.colour, img.at(x, y, c), c));
      return out;
    }
  }
  return img;
}

DepthMap apply_to_depth(const AugTransform& t, const DepthMap& d) {
  if (!is_spatial(t)) return d;
  DepthMap out = d;
  for (int y = 0; y < d.height; ++y)
    for (int x = 0; x < d.width; ++x) {
      int sx = d.width - 1 - x;
      out.at(x, y) = d.at(sx, y);
      out.mask.set(x, y, d.valid(sx, y));
    }
  return out;
}

GradientMap apply_to_gradients(const AugTransform& t, const GradientMap& g) {
  if (!is_spatial(t)) return g;
  GradientMap out = g;
  for (int y = 0; y < g.height; ++y)
    for (int x = 0; x < g.width; ++x) {
      int sx = g.width - 1 - x;
      std::size_t p = g.index(x, y), q = g.index(sx, y);
      out.gx[p] = -g.gx[q];
      out.gy[p] = g.gy[q];
      out.mask.set(x, y, g.valid(sx, y));
    }
  return out;
}

Grid apply_spatial(const AugTransform& t, const Grid& g) {
  if (!is_spatial(t)) return g;
  Grid out(g.height, g.width);
  for (int y = 0; y < g.height; ++y)
    for (int x = 0; x < g.width; ++x) out.at(x, y) = g.at(g.width - 1 - x, y);
  return out;
}

DepthMap realign(const TransformMapping& m, const DepthMap& d) {
  return apply_to_depth(m.source_transform, apply_to_depth(inverse(m.target_transform), d));
}

Grid realign_spatial(const TransformMapping& m, const Grid& g) {
  return apply_spatial(m.source_transform, apply_spatial(inverse(m.target_transform), g));
}

Grid realign_adjoint_spatial(const TransformMapping& m, const Grid& g) {
  // The adjoint of a pixel permutation is its inverse, i.e. the realignment
  // with source and target swapped.
  TransformMapping swapped{m.target_transform, m.source_transform};
  return realign_spatial(swapped, g);
}

}  // namespace gf
