#include "gradfuse/fusion.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

namespace gf {

namespace {

// One first-difference term c*(d[plus] - d[minus]).
struct Diff {
  int plus;
  int minus;
  double coeff;
};

inline Diff x_diff(int x, int y, int w) {
  int row = y * w;
  if (x == 0) return {row + 1, row, 2.0};
  if (x == w - 1) return {row + w - 1, row + w - 2, 2.0};
  return {row + x + 1, row + x - 1, 1.0};
}

inline Diff y_diff(int x, int y, int w, int h) {
  if (y == 0) return {w + x, x, 2.0};
  if (y == h - 1) return {(h - 1) * w + x, (h - 2) * w + x, 2.0};
  return {(y + 1) * w + x, (y - 1) * w + x, 1.0};
}

inline double phi(double r, double eps) { return std::sqrt(r * r + eps); }
inline double phi_prime(double r, double eps) { return r / std::sqrt(r * r + eps); }

void validate_problem(const FusionProblem& pb) {
  if (pb.d_est.height != pb.g_est.height || pb.d_est.width != pb.g_est.width) {
    throw ShapeMismatch("fusion: depth " + std::to_string(pb.d_est.height) + "x" +
                        std::to_string(pb.d_est.width) + " vs gradients " +
                        std::to_string(pb.g_est.height) + "x" + std::to_string(pb.g_est.width));
  }
  require_same_scale(pb.d_est.scale, pb.g_est.scale, "fusion");
  if (pb.d_est.width < 3 || pb.d_est.height < 3) {
    throw TooSmall("fusion: grid must be at least 3x3");
  }
  if (pb.epsilon <= 0.0) throw InvalidArgument("fusion: epsilon must be positive");
  if (pb.omega < 0.0) throw InvalidArgument("fusion: omega must be nonnegative");
}

// Gradient equation over unknown indices.
struct Equation {
  int plus;
  int minus;
  double coeff;
  double target;
};

// Compressed view of one fusion problem: unknowns are the valid pixels of
// d_est; gradient equations exist where the stencil output is valid and
// g_est is valid, so every tap is an unknown.
struct FusionState {
  int height = 0, width = 0;
  double omega = 0.0, epsilon = 0.0;
  std::vector<int> unknown_of_pixel;  // -1 where the pixel is not an unknown
  std::vector<int> pixel_of_unknown;
  std::vector<double> d_est;  // per unknown
  std::vector<Equation> eqs;  // fixed order: row-major, x equation then y
};

FusionState build_state(const FusionProblem& pb) {
  validate_problem(pb);
  const DepthMap& d = pb.d_est;
  const GradientMap& g = pb.g_est;
  const int h = d.height, w = d.width;
  const std::size_t n = d.pixel_count();

  FusionState st;
  st.height = h;
  st.width = w;
  st.omega = pb.omega;
  st.epsilon = pb.epsilon;
  st.unknown_of_pixel.assign(n, -1);
  for (std::size_t p = 0; p < n; ++p) {
    if (d.mask.bits[p]) {
      st.unknown_of_pixel[p] = static_cast<int>(st.pixel_of_unknown.size());
      st.pixel_of_unknown.push_back(static_cast<int>(p));
      st.d_est.push_back(d.values[p]);
    }
  }
  if (st.pixel_of_unknown.empty()) throw EmptyMask("fusion: no valid pixels in the data term");

  auto valid = [&](int p) { return d.mask.bits[static_cast<std::size_t>(p)] != 0; };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      std::size_t p = static_cast<std::size_t>(y) * w + x;
      if (!g.mask.bits[p]) continue;
      Diff dx = x_diff(x, y, w);
      Diff dy = y_diff(x, y, w, h);
      if (!valid(dx.plus) || !valid(dx.minus) || !valid(dy.plus) || !valid(dy.minus)) continue;
      st.eqs.push_back({st.unknown_of_pixel[dx.plus], st.unknown_of_pixel[dx.minus], dx.coeff,
                        g.gx[p]});
      st.eqs.push_back({st.unknown_of_pixel[dy.plus], st.unknown_of_pixel[dy.minus], dy.coeff,
                        g.gy[p]});
    }
  return st;
}

double state_objective(const FusionState& st, const std::vector<double>& x) {
  double sum = 0.0;
  for (std::size_t u = 0; u < x.size(); ++u) sum += phi(x[u] - st.d_est[u], st.epsilon);
  for (const Equation& e : st.eqs) {
    double r = e.coeff * (x[e.plus] - x[e.minus]) - e.target;
    sum += st.omega * phi(r, st.epsilon);
  }
  return sum;
}

// IRLS weights: w = 1/phi(r) majorizes phi by a quadratic that touches at the
// current residual.
void compute_weights(const FusionState& st, const std::vector<double>& x,
                     std::vector<double>& w_data, std::vector<double>& w_eq) {
  w_data.resize(x.size());
  for (std::size_t u = 0; u < x.size(); ++u)
    w_data[u] = 1.0 / phi(x[u] - st.d_est[u], st.epsilon);
  w_eq.resize(st.eqs.size());
  for (std::size_t i = 0; i < st.eqs.size(); ++i) {
    const Equation& e = st.eqs[i];
    double r = e.coeff * (x[e.plus] - x[e.minus]) - e.target;
    w_eq[i] = 1.0 / phi(r, st.epsilon);
  }
}

void build_rhs(const FusionState& st, const std::vector<double>& w_data,
               const std::vector<double>& w_eq, std::vector<double>& b) {
  b.assign(st.d_est.size(), 0.0);
  for (std::size_t u = 0; u < b.size(); ++u) b[u] = w_data[u] * st.d_est[u];
  for (std::size_t i = 0; i < st.eqs.size(); ++i) {
    const Equation& e = st.eqs[i];
    double t = st.omega * w_eq[i] * e.coeff * e.target;
    b[e.plus] += t;
    b[e.minus] -= t;
  }
}

// out = (W_data + omega * S^T W_eq S) x
void apply_normal(const FusionState& st, const std::vector<double>& w_data,
                  const std::vector<double>& w_eq, const std::vector<double>& x,
                  std::vector<double>& out) {
  out.resize(x.size());
  for (std::size_t u = 0; u < x.size(); ++u) out[u] = w_data[u] * x[u];
  for (std::size_t i = 0; i < st.eqs.size(); ++i) {
    const Equation& e = st.eqs[i];
    double s = e.coeff * (x[e.plus] - x[e.minus]);
    double t = st.omega * w_eq[i] * e.coeff * s;
    out[e.plus] += t;
    out[e.minus] -= t;
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Jacobi-preconditioned CG on the normal system, warm-started at x.
void cg_solve(const FusionState& st, const std::vector<double>& w_data,
              const std::vector<double>& w_eq, const std::vector<double>& b,
              std::vector<double>& x, double tol, int max_iters) {
  const std::size_t nu = x.size();
  std::vector<double> diag(nu);
  for (std::size_t u = 0; u < nu; ++u) diag[u] = w_data[u];
  for (std::size_t i = 0; i < st.eqs.size(); ++i) {
    const Equation& e = st.eqs[i];
    double c2 = st.omega * w_eq[i] * st.eqs[i].coeff * st.eqs[i].coeff;
    diag[e.plus] += c2;
    diag[e.minus] += c2;
  }

  std::vector<double> r(nu), z(nu), p(nu), q(nu);
  apply_normal(st, w_data, w_eq, x, q);
  for (std::size_t u = 0; u < nu; ++u) r[u] = b[u] - q[u];
  double b_norm = std::sqrt(dot(b, b));
  double stop = tol * b_norm;
  if (std::sqrt(dot(r, r)) <= stop) return;

  for (std::size_t u = 0; u < nu; ++u) z[u] = r[u] / diag[u];
  p = z;
  double rz = dot(r, z);
  for (int it = 0; it < max_iters; ++it) {
    apply_normal(st, w_data, w_eq, p, q);
    double pq = dot(p, q);
    if (pq <= 0.0) break;  // numerical breakdown; keep the best iterate
    double alpha = rz / pq;
    for (std::size_t u = 0; u < nu; ++u) {
      x[u] += alpha * p[u];
      r[u] -= alpha * q[u];
    }
    if (std::sqrt(dot(r, r)) <= stop) break;
    for (std::size_t u = 0; u < nu; ++u) z[u] = r[u] / diag[u];
    double rz_new = dot(r, z);
    double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t u = 0; u < nu; ++u) p[u] = z[u] + beta * p[u];
  }
}

// Dense direct solve of the same normal system (oracle path).
void dense_solve(const FusionState& st, const std::vector<double>& w_data,
                 const std::vector<double>& w_eq, const std::vector<double>& b,
                 std::vector<double>& x) {
  const int nu = static_cast<int>(x.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nu, nu);
  for (int u = 0; u < nu; ++u) A(u, u) = w_data[static_cast<std::size_t>(u)];
  for (std::size_t i = 0; i < st.eqs.size(); ++i) {
    const Equation& e = st.eqs[i];
    double k = st.omega * w_eq[i];
    double c2 = k * e.coeff * e.coeff;
    A(e.plus, e.plus) += c2;
    A(e.minus, e.minus) += c2;
    A(e.plus, e.minus) -= c2;
    A(e.minus, e.plus) -= c2;
  }
  Eigen::VectorXd rhs(nu);
  for (int u = 0; u < nu; ++u) rhs(u) = b[static_cast<std::size_t>(u)];
  Eigen::VectorXd sol = A.ldlt().solve(rhs);
  for (int u = 0; u < nu; ++u) x[static_cast<std::size_t>(u)] = sol(u);
}

DepthMap assemble_result(const FusionProblem& pb, const FusionState& st,
                         const std::vector<double>& x) {
  DepthMap out = pb.d_est;  // pixels without equations keep d_est, mask included
  for (std::size_t u = 0; u < x.size(); ++u)
    out.values[static_cast<std::size_t>(st.pixel_of_unknown[u])] = x[u];
  return out;
}

template <typename Solve>
FusionResult irls_loop(const FusionProblem& pb, const FusionState& st, int max_outer,
                       double outer_tol, Solve solve) {
  std::vector<double> x = st.d_est;
  std::vector<double> w_data, w_eq, b;

  FusionResult res;
  res.objective_trace.push_back(state_objective(st, x));
  int consecutive_increases = 0;
  for (int k = 1; k <= max_outer; ++k) {
    res.outer_iters = k;
    compute_weights(st, x, w_data, w_eq);
    build_rhs(st, w_data, w_eq, b);
    solve(st, w_data, w_eq, b, x);

    double prev = res.objective_trace.back();
    double f = state_objective(st, x);
    res.objective_trace.push_back(f);
    if (f > prev + 1e-10 * std::max(1.0, std::abs(prev))) {
      if (++consecutive_increases >= 3) {
        throw SolverDiverged("fusion: objective increased for 3 consecutive outer iterations");
      }
    } else {
      consecutive_increases = 0;
    }
    if (std::abs(f - prev) <= outer_tol * std::max(std::abs(prev), 1e-30)) {
      res.converged = true;
      break;
    }
  }
  res.d_star = assemble_result(pb, st, x);
  return res;
}

}  // namespace

GradientMap gradient_op(const DepthMap& d) {
  if (d.width < 3 || d.height < 3) {
    throw TooSmall("gradient_op: grid must be at least 3x3, got " + std::to_string(d.height) +
                   "x" + std::to_string(d.width));
  }
  const int h = d.height, w = d.width;
  GradientMap g = GradientMap::zeros(h, w, d.scale);
  auto valid = [&](int p) { return d.mask.bits[static_cast<std::size_t>(p)] != 0; };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      Diff dx = x_diff(x, y, w);
      Diff dy = y_diff(x, y, w, h);
      bool ok = valid(dx.plus) && valid(dx.minus) && valid(dy.plus) && valid(dy.minus);
      g.mask.set(x, y, ok);
      if (!ok) continue;
      std::size_t p = g.index(x, y);
      g.gx[p] = dx.coeff * (d.values[static_cast<std::size_t>(dx.plus)] -
                            d.values[static_cast<std::size_t>(dx.minus)]);
      g.gy[p] = dy.coeff * (d.values[static_cast<std::size_t>(dy.plus)] -
                            d.values[static_cast<std::size_t>(dy.minus)]);
    }
  return g;
}

Grid gradient_op_adjoint(const Grid& bar_x, const Grid& bar_y) {
  if (bar_x.height != bar_y.height || bar_x.width != bar_y.width) {
    throw ShapeMismatch("gradient_op_adjoint: channel shapes disagree");
  }
  const int h = bar_x.height, w = bar_x.width;
  Grid out(h, w, 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      std::size_t p = static_cast<std::size_t>(y) * w + x;
      Diff dx = x_diff(x, y, w);
      out.v[static_cast<std::size_t>(dx.plus)] += dx.coeff * bar_x.v[p];
      out.v[static_cast<std::size_t>(dx.minus)] -= dx.coeff * bar_x.v[p];
      Diff dy = y_diff(x, y, w, h);
      out.v[static_cast<std::size_t>(dy.plus)] += dy.coeff * bar_y.v[p];
      out.v[static_cast<std::size_t>(dy.minus)] -= dy.coeff * bar_y.v[p];
    }
  return out;
}

double fusion_objective(const FusionProblem& problem, const DepthMap& d) {
  require_same_shape(problem.d_est, d, "fusion_objective");
  FusionState st = build_state(problem);
  std::vector<double> x(st.pixel_of_unknown.size());
  for (std::size_t u = 0; u < x.size(); ++u)
    x[u] = d.values[static_cast<std::size_t>(st.pixel_of_unknown[u])];
  return state_objective(st, x);
}

Grid fusion_objective_gradient(const FusionProblem& problem, const DepthMap& d) {
  require_same_shape(problem.d_est, d, "fusion_objective_gradient");
  FusionState st = build_state(problem);
  std::vector<double> x(st.pixel_of_unknown.size());
  for (std::size_t u = 0; u < x.size(); ++u)
    x[u] = d.values[static_cast<std::size_t>(st.pixel_of_unknown[u])];

  Grid out(d.height, d.width, 0.0);
  for (std::size_t u = 0; u < x.size(); ++u) {
    out.v[static_cast<std::size_t>(st.pixel_of_unknown[u])] +=
        phi_prime(x[u] - st.d_est[u], st.epsilon);
  }
  for (const Equation& e : st.eqs) {
    double r = e.coeff * (x[e.plus] - x[e.minus]) - e.target;
    double t = st.omega * phi_prime(r, st.epsilon) * e.coeff;
    out.v[static_cast<std::size_t>(st.pixel_of_unknown[e.plus])] += t;
    out.v[static_cast<std::size_t>(st.pixel_of_unknown[e.minus])] -= t;
  }
  return out;
}

FusionResult solve_fusion(const FusionProblem& problem, const IrlsConfig& config) {
  if (config.max_outer_iters <= 0 || config.outer_tol <= 0.0 || config.cg_tol <= 0.0 ||
      config.cg_max_iters < 0) {
    throw InvalidArgument("solve_fusion: config values must be positive");
  }
  FusionState st = build_state(problem);
  int cg_iters = config.cg_max_iters > 0
                     ? config.cg_max_iters
                     : 10 * static_cast<int>(st.pixel_of_unknown.size());
  return irls_loop(problem, st, config.max_outer_iters, config.outer_tol,
                   [&](const FusionState& s, const std::vector<double>& wd,
                       const std::vector<double>& we, const std::vector<double>& b,
                       std::vector<double>& x) { cg_solve(s, wd, we, b, x, config.cg_tol, cg_iters); });
}

DepthMap dense_oracle_fusion(const FusionProblem& problem) {
  if (problem.d_est.pixel_count() > 400) {
    throw TooLarge("dense_oracle_fusion: limited to 400 pixels, got " +
                   std::to_string(problem.d_est.pixel_count()));
  }
  FusionState st = build_state(problem);
  FusionResult res = irls_loop(problem, st, 500, 1e-12,
                               [](const FusionState& s, const std::vector<double>& wd,
                                  const std::vector<double>& we, const std::vector<double>& b,
                                  std::vector<double>& x) { dense_solve(s, wd, we, b, x); });
  return res.d_star;
}

}  // namespace gf
