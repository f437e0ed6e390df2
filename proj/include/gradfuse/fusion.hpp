#ifndef GRADFUSE_FUSION_HPP
#define GRADFUSE_FUSION_HPP

#include <vector>

#include "gradfuse/core.hpp"

namespace gf {

// Reconciliation of a depth estimate with a gradient estimate under the
// robust penalty phi(x) = sqrt(x^2 + epsilon).
struct FusionProblem {
  DepthMap d_est;
  GradientMap g_est;
  double omega = 10.0;
  double epsilon = 1e-4;
};

struct IrlsConfig {
  int max_outer_iters = 50;
  double outer_tol = 1e-6;  // relative change in objective
  double cg_tol = 1e-8;     // relative residual for the inner CG solve
  int cg_max_iters = 0;     // 0 selects 10 * number of unknowns
};

struct FusionResult {
  DepthMap d_star;
  std::vector<double> objective_trace;  // objective before and after each outer step
  bool converged = false;
  int outer_iters = 0;
};

// Depth derivatives with [-1,0,1] central differences at interior pixels and
// one-sided differences scaled by 2 at borders (same magnitude on ramps).
// The output mask is valid only where every stencil tap is valid.
// Requires width >= 3 and height >= 3.
GradientMap gradient_op(const DepthMap& d);

// Transpose of the gradient_op stencil. The inputs are cotangents for the x
// and y channels (zero where no equation should contribute); positions follow
// the same interior/border tap rules as gradient_op.
Grid gradient_op_adjoint(const Grid& bar_x, const Grid& bar_y);

// Objective of the fusion problem at depth d:
//   sum_p phi(d_p - d_est_p) + omega * sum_q [phi(dx_q - gx_q) + phi(dy_q - gy_q)]
// The data sum runs over d_est's valid pixels; the gradient sum over pixels
// where the stencil output is valid and g_est is valid. d supplies values at
// those pixels; its own mask is not consulted.
double fusion_objective(const FusionProblem& problem, const DepthMap& d);

// Analytic gradient of fusion_objective with respect to d. Zero at pixels the
// objective never reads.
Grid fusion_objective_gradient(const FusionProblem& problem, const DepthMap& d);

// IRLS minimization of fusion_objective. Each outer iteration reweights the
// residuals by 1/phi(r) and solves the weighted normal equations with a
// Jacobi-preconditioned conjugate-gradient solver warm-started at the current
// iterate, which keeps the objective trace monotone. Deterministic:
// identical inputs and config give bit-identical results.
FusionResult solve_fusion(const FusionProblem& problem, const IrlsConfig& config = {});

// Reference minimizer: the same outer loop with a dense direct solve, 500
// outer iterations and tolerance 1e-12. Limited to height*width <= 400.
DepthMap dense_oracle_fusion(const FusionProblem& problem);

}  // namespace gf

#endif  // GRADFUSE_FUSION_HPP
