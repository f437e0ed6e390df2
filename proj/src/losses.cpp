#include "gradfuse/losses.hpp"

#include <string>

#include "gradfuse/fusion.hpp"

namespace gf {

namespace {

void add_scaled(Grid& acc, const Grid& g, double s) {
  for (std::size_t i = 0; i < acc.v.size(); ++i) acc.v[i] += s * g.v[i];
}

void scale(Grid& g, double s) {
  for (double& v : g.v) v *= s;
}

}  // namespace

void validate_batch(const ImageSetBatch& batch) {
  const std::size_t n = batch.estimates.size();
  if (n == 0) throw InvalidArgument("batch: at least one image required");
  if (batch.ground_truths.size() != n || batch.transforms.size() != n) {
    throw InvalidArgument("batch: estimates/ground_truths/transforms lengths disagree (" +
                          std::to_string(n) + ", " + std::to_string(batch.ground_truths.size()) +
                          ", " + std::to_string(batch.transforms.size()) + ")");
  }
  const DepthMap& ref = batch.estimates[0];
  for (std::size_t i = 0; i < n; ++i) {
    require_same_shape(ref, batch.estimates[i], "batch");
    require_same_shape(ref, batch.ground_truths[i], "batch");
    require_same_scale(ref.scale, batch.estimates[i].scale, "batch");
    require_same_scale(ref.scale, batch.ground_truths[i].scale, "batch");
  }
}

LossValue l2_pixelwise(const DepthMap& d1, const DepthMap& d2) {
  require_same_shape(d1, d2, "l2_pixelwise");
  require_same_scale(d1.scale, d2.scale, "l2_pixelwise");
  ValidMask joint = valid_intersection(d1.mask, d2.mask);
  std::size_t n = joint.valid_count();
  if (n == 0) throw EmptyMask("l2_pixelwise: no jointly valid pixels");

  LossValue out;
  Grid grad(d1.height, d1.width, 0.0);
  double sum = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t p = 0; p < d1.values.size(); ++p) {
    if (!joint.bits[p]) continue;
    double r = d1.values[p] - d2.values[p];
    sum += r * r;
    grad.v[p] = 2.0 * inv_n * r;
  }
  out.value = sum * inv_n;
  out.depth_grad.push_back(std::move(grad));
  return out;
}

LossValue loss_single(const ImageSetBatch& batch) {
  validate_batch(batch);
  const int n_images = batch.size();
  const double inv_n = 1.0 / n_images;

  LossValue out;
  for (int i = 0; i < n_images; ++i) {
    LossValue li = l2_pixelwise(batch.estimates[i], batch.ground_truths[i]);
    out.value += inv_n * li.value;
    scale(li.depth_grad[0], inv_n);
    out.depth_grad.push_back(std::move(li.depth_grad[0]));
  }
  return out;
}

LossValue set_regularizer(const ImageSetBatch& batch) {
  validate_batch(batch);
  const int n_images = batch.size();
  if (n_images < 2) throw SetTooSmall("set_regularizer: needs at least 2 images");
  const int h = batch.estimates[0].height, w = batch.estimates[0].width;
  const double pair_coeff = 2.0 / (static_cast<double>(n_images) * (n_images - 1));

  LossValue out;
  out.depth_grad.assign(static_cast<std::size_t>(n_images), Grid(h, w, 0.0));
  for (int i = 0; i < n_images; ++i) {
    for (int j = i + 1; j < n_images; ++j) {
      TransformMapping map{batch.transforms[static_cast<std::size_t>(i)],
                           batch.transforms[static_cast<std::size_t>(j)]};
      DepthMap realigned = realign(map, batch.estimates[static_cast<std::size_t>(j)]);
      const DepthMap& di = batch.estimates[static_cast<std::size_t>(i)];
      ValidMask joint = valid_intersection(di.mask, realigned.mask);
      std::size_t n = joint.valid_count();
      if (n == 0) {
        throw EmptyMask("set_regularizer: no jointly valid pixels for pair (" +
                        std::to_string(i) + "," + std::to_string(j) + ")");
      }
      const double inv_n = 1.0 / static_cast<double>(n);
      double sum = 0.0;
      Grid bar(h, w, 0.0);  // d(pair)/d(realigned D_j), negated below
      Grid& grad_i = out.depth_grad[static_cast<std::size_t>(i)];
      for (std::size_t p = 0; p < di.values.size(); ++p) {
        if (!joint.bits[p]) continue;
        double r = di.values[p] - realigned.values[p];
        sum += r * r;
        grad_i.v[p] += pair_coeff * 2.0 * inv_n * r;
        bar.v[p] = -pair_coeff * 2.0 * inv_n * r;
      }
      out.value += pair_coeff * sum * inv_n;
      add_scaled(out.depth_grad[static_cast<std::size_t>(j)], realign_adjoint_spatial(map, bar),
                 1.0);
    }
  }
  return out;
}

LossValue loss_set(const ImageSetBatch& batch, double lambda) {
  if (lambda < 0.0) throw InvalidArgument("loss_set: lambda must be nonnegative");
  LossValue out = loss_single(batch);
  if (batch.size() < 2 || lambda == 0.0) return out;
  LossValue reg = set_regularizer(batch);
  out.value += lambda * reg.value;
  for (std::size_t i = 0; i < out.depth_grad.size(); ++i) {
    add_scaled(out.depth_grad[i], reg.depth_grad[i], lambda);
  }
  return out;
}

LossValue l2g_pixelwise(const GradientMap& g1, const GradientMap& g2) {
  require_same_shape(g1, g2, "l2g_pixelwise");
  require_same_scale(g1.scale, g2.scale, "l2g_pixelwise");
  ValidMask joint = valid_intersection(g1.mask, g2.mask);
  std::size_t n = joint.valid_count();
  if (n == 0) throw EmptyMask("l2g_pixelwise: no jointly valid pixels");

  LossValue out;
  Grid grad_x(g1.height, g1.width, 0.0), grad_y(g1.height, g1.width, 0.0);
  double sum = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t p = 0; p < g1.gx.size(); ++p) {
    if (!joint.bits[p]) continue;
    double rx = g1.gx[p] - g2.gx[p];
    double ry = g1.gy[p] - g2.gy[p];
    sum += rx * rx + ry * ry;
    grad_x.v[p] = 2.0 * inv_n * rx;
    grad_y.v[p] = 2.0 * inv_n * ry;
  }
  out.value = sum * inv_n;
  out.gx_grad.push_back(std::move(grad_x));
  out.gy_grad.push_back(std::move(grad_y));
  return out;
}

LossValue loss_combined(const ImageSetBatch& batch,
                        const std::vector<GradientMap>& gradient_estimates, double lambda) {
  validate_batch(batch);
  if (gradient_estimates.size() != static_cast<std::size_t>(batch.size())) {
    throw ShapeMismatch("loss_combined: " + std::to_string(gradient_estimates.size()) +
                        " gradient estimates for " + std::to_string(batch.size()) + " images");
  }
  const int n_images = batch.size();
  const double inv_n = 1.0 / n_images;

  LossValue out = loss_set(batch, lambda);
  for (int i = 0; i < n_images; ++i) {
    GradientMap grad_d = gradient_op(batch.estimates[static_cast<std::size_t>(i)]);
    LossValue li = l2g_pixelwise(grad_d, gradient_estimates[static_cast<std::size_t>(i)]);
    out.value += inv_n * li.value;

    // Chain rule through the difference stencil into the depth estimate.
    scale(li.gx_grad[0], inv_n);
    scale(li.gy_grad[0], inv_n);
    add_scaled(out.depth_grad[static_cast<std::size_t>(i)],
               gradient_op_adjoint(li.gx_grad[0], li.gy_grad[0]), 1.0);

    scale(li.gx_grad[0], -1.0);
    scale(li.gy_grad[0], -1.0);
    out.gx_grad.push_back(std::move(li.gx_grad[0]));
    out.gy_grad.push_back(std::move(li.gy_grad[0]));
  }
  return out;
}

}  // namespace gf
