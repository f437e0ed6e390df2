#ifndef GRADFUSE_LOSSES_HPP
#define GRADFUSE_LOSSES_HPP

#include <vector>

#include "gradfuse/core.hpp"
#include "gradfuse/transforms.hpp"

namespace gf {

// An image set: per-image depth estimates, their ground truths and the
// augmentation transform that produced each image (index 0 is conventionally
// the identity). All maps share dimensions and scale.
struct ImageSetBatch {
  std::vector<DepthMap> estimates;
  std::vector<DepthMap> ground_truths;
  std::vector<AugTransform> transforms;

  int size() const { return static_cast<int>(estimates.size()); }
};

void validate_batch(const ImageSetBatch& batch);

// Loss value with analytic gradients. depth_grad holds d(value)/d(estimate i);
// gx_grad/gy_grad hold the per-channel gradients when the differentiated
// argument is a gradient map. Entries not applicable to an operation are left
// empty. Gradients are exactly zero at invalid pixels.
struct LossValue {
  double value = 0.0;
  std::vector<Grid> depth_grad;
  std::vector<Grid> gx_grad;
  std::vector<Grid> gy_grad;
};

// Mean squared pixel difference over jointly valid pixels:
//   (1/n) * sum_p (d1_p - d2_p)^2
// depth_grad[0] is the gradient with respect to d1; the gradient with respect
// to d2 is its negation.
LossValue l2_pixelwise(const DepthMap& d1, const DepthMap& d2);

// Mean per-image estimation error: (1/N) * sum_i l2(D_i, D_gt_i).
LossValue loss_single(const ImageSetBatch& batch);

// Pairwise consistency of the set after realignment:
//   2/(N(N-1)) * sum_i sum_{j>i} l2(D_i, g_ij(D_j))
// Gradients flow to both maps of each pair, through the realignment
// permutation for the second. Requires N >= 2.
LossValue set_regularizer(const ImageSetBatch& batch);

// loss_single + lambda * set_regularizer. With N == 1 the pair set is empty
// and the regularizer term is dropped.
LossValue loss_set(const ImageSetBatch& batch, double lambda = 1.0);

// Mean squared gradient difference over jointly valid pixels:
//   (1/n) * sum_p (g1x_p - g2x_p)^2 + (g1y_p - g2y_p)^2
// gx_grad[0]/gy_grad[0] are the gradients with respect to g1's channels.
LossValue l2g_pixelwise(const GradientMap& g1, const GradientMap& g2);

// loss_set + (1/N) * sum_i l2g(grad(D_i), G_est_i), where grad is gradient_op.
// depth_grad[i] includes the adjoint of the difference stencil; gx_grad[i] and
// gy_grad[i] are the gradients with respect to the gradient estimates.
LossValue loss_combined(const ImageSetBatch& batch,
                        const std::vector<GradientMap>& gradient_estimates,
                        double lambda = 1.0);

}  // namespace gf

#endif  // GRADFUSE_LOSSES_HPP
