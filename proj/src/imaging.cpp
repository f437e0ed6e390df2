#include "gradfuse/imaging.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace gf {

void validate(const BilateralParams& params) {
  if (params.window < 3 || params.window % 2 == 0) {
    throw InvalidArgument("bilateral: window must be odd and >= 3, got " +
                          std::to_string(params.window));
  }
  if (params.spatial_sigma <= 0.0 || params.range_sigma <= 0.0) {
    throw InvalidArgument("bilateral: sigmas must be positive");
  }
}

namespace {

std::vector<double> spatial_kernel(int radius, double sigma) {
  int size = 2 * radius + 1;
  std::vector<double> k(static_cast<std::size_t>(size) * size);
  double inv = 1.0 / (2.0 * sigma * sigma);
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      k[static_cast<std::size_t>(dy + radius) * size + (dx + radius)] =
          std::exp(-(dx * dx + dy * dy) * inv);
  return k;
}

}  // namespace

DepthMap upsample_bilinear(const DepthMap& d, int factor) {
  if (factor < 1) throw InvalidArgument("upsample_bilinear: factor must be >= 1");
  if (factor == 1) return d;

  const int out_h = d.height * factor;
  const int out_w = d.width * factor;
  DepthMap out;
  out.height = out_h;
  out.width = out_w;
  out.scale = d.scale;
  out.values.assign(static_cast<std::size_t>(out_h) * out_w, 0.0);
  out.mask = ValidMask::all_invalid(out_h, out_w);

  const double sy_step = out_h > 1 ? static_cast<double>(d.height - 1) / (out_h - 1) : 0.0;
  const double sx_step = out_w > 1 ? static_cast<double>(d.width - 1) / (out_w - 1) : 0.0;
  for (int oy = 0; oy < out_h; ++oy) {
    double sy = oy * sy_step;
    int y0 = static_cast<int>(sy);
    double fy = sy - y0;
    int y1 = fy > 0.0 ? y0 + 1 : y0;
    for (int ox = 0; ox < out_w; ++ox) {
      double sx = ox * sx_step;
      int x0 = static_cast<int>(sx);
      double fx = sx - x0;
      int x1 = fx > 0.0 ? x0 + 1 : x0;
      if (!(d.valid(x0, y0) && d.valid(x1, y0) && d.valid(x0, y1) && d.valid(x1, y1))) continue;
      double v = (1.0 - fy) * ((1.0 - fx) * d.at(x0, y0) + fx * d.at(x1, y0)) +
                 fy * ((1.0 - fx) * d.at(x0, y1) + fx * d.at(x1, y1));
      out.at(ox, oy) = v;
      out.mask.set(ox, oy, true);
    }
  }
  return out;
}

FillResult cross_bilateral_fill(const DepthMap& d, const RgbImage& guide,
                                const BilateralParams& params) {
  validate(params);
  if (guide.height != d.height || guide.width != d.width) {
    throw ShapeMismatch("cross_bilateral_fill: guide " + std::to_string(guide.height) + "x" +
                        std::to_string(guide.width) + " vs depth " + std::to_string(d.height) +
                        "x" + std::to_string(d.width));
  }

  const int radius = params.window / 2;
  const std::vector<double> spatial = spatial_kernel(radius, params.spatial_sigma);
  const int ksize = 2 * radius + 1;
  const double inv_range = 1.0 / (2.0 * params.range_sigma * params.range_sigma);
  constexpr int kMaxPasses = 20;

  FillResult result;
  result.map = d;
  DepthMap& cur = result.map;
  std::vector<std::pair<std::size_t, double>> updates;
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    updates.clear();
    for (int y = 0; y < cur.height; ++y) {
      for (int x = 0; x < cur.width; ++x) {
        if (cur.valid(x, y)) continue;
        double wsum = 0.0, vsum = 0.0;
        for (int dy = -radius; dy <= radius; ++dy) {
          int qy = y + dy;
          if (qy < 0 || qy >= cur.height) continue;
          for (int dx = -radius; dx <= radius; ++dx) {
            int qx = x + dx;
            if (qx < 0 || qx >= cur.width || !cur.valid(qx, qy)) continue;
            double dist2 = 0.0;
            for (int c = 0; c < 3; ++c) {
              double dc = guide.at(x, y, c) - guide.at(qx, qy, c);
              dist2 += dc * dc;
            }
            double w = spatial[static_cast<std::size_t>(dy + radius) * ksize + (dx + radius)] *
                       std::exp(-dist2 * inv_range);
            wsum += w;
            vsum += w * cur.at(qx, qy);
          }
        }
        if (wsum > 0.0) updates.emplace_back(cur.index(x, y), vsum / wsum);
      }
    }
    if (updates.empty()) break;
    result.passes = pass + 1;
    for (const auto& [p, v] : updates) {
      cur.values[p] = v;
      cur.mask.bits[p] = 1;
    }
    if (cur.mask.valid_count() == cur.pixel_count()) break;
  }
  result.unfilled = cur.pixel_count() - cur.mask.valid_count();
  return result;
}

DepthMap bilateral_smooth(const DepthMap& d, const BilateralParams& params) {
  validate(params);
  if (d.scale != Scale::Linear) throw WrongScale("bilateral_smooth: depth must be linear meters");

  const int radius = params.window / 2;
  const std::vector<double> spatial = spatial_kernel(radius, params.spatial_sigma);
  const int ksize = 2 * radius + 1;
  const double inv_range = 1.0 / (2.0 * params.range_sigma * params.range_sigma);

  DepthMap out = d;
  for (int y = 0; y < d.height; ++y) {
    for (int x = 0; x < d.width; ++x) {
      if (!d.valid(x, y)) continue;
      double center = d.at(x, y);
      double wsum = 0.0, vsum = 0.0;
      for (int dy = -radius; dy <= radius; ++dy) {
        int qy = y + dy;
        if (qy < 0 || qy >= d.height) continue;
        for (int dx = -radius; dx <= radius; ++dx) {
          int qx = x + dx;
          if (qx < 0 || qx >= d.width || !d.valid(qx, qy)) continue;
          double v = d.at(qx, qy);
          double diff = v - center;
          double w = spatial[static_cast<std::size_t>(dy + radius) * ksize + (dx + radius)] *
                     std::exp(-diff * diff * inv_range);
          wsum += w;
          vsum += w * v;
        }
      }
      out.at(x, y) = vsum / wsum;  // center tap guarantees wsum > 0
    }
  }
  return out;
}

}  // namespace gf
