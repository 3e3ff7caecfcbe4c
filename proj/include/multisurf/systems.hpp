#pragma once

// Continuous-time sign systems  x' in f(t, x) - g(x) Sgn(h(x)).
//
// Three classes are supported:
//  - LinearSignSystem:      x' in E x + a - B Sgn(C x + D)
//  - AffineGainSignSystem:  x' in f(t, x) - sum_i (A_i x + B_i) sgn(C_i x + D_i)
//  - NonlinearSignSystem:   x' in f(t, x) - g(x) Sgn(h(x))
// The last two carry hypomonotonicity shifts used by the implicit schemes.

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace multisurf {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct LinearSignSystem {
  MatrixXd E;
  VectorXd a;
  MatrixXd B;
  MatrixXd C;
  VectorXd D;

  Eigen::Index n() const { return E.rows(); }
  Eigen::Index m() const { return C.rows(); }
};

/// Builds a linear system and validates its dimensions (throws std::invalid_argument).
LinearSignSystem make_linear_system(MatrixXd E, VectorXd a, MatrixXd B, MatrixXd C, VectorXd D);

/// Zero drift (E = 0, a = 0) and D = 0.
LinearSignSystem make_linear_system(MatrixXd B, MatrixXd C);

void validate(const LinearSignSystem& sys);

using DriftFn = std::function<VectorXd(const VectorXd& x, double t)>;
using DriftJacobianFn = std::function<MatrixXd(const VectorXd& x, double t)>;

struct AffineGainSignSystem {
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  std::vector<MatrixXd> A;      // m matrices, n x n
  std::vector<VectorXd> B;      // m vectors, length n
  std::vector<Eigen::RowVectorXd> C;  // m rows, length n
  VectorXd D;                   // length m
  DriftFn f;
  DriftJacobianFn dfdx;
  std::vector<double> rho;      // per-surface hypomonotonicity constants

  double total_rho() const;
};

void validate(const AffineGainSignSystem& sys);

/// Third-order Jacobian of g: slice p holds dg/dx_p (n x m).
struct GainJacobian {
  std::vector<MatrixXd> slices;

  /// Contraction (dg (x) s)_{kp} = sum_l dg_{kl}/dx_p s_l, an n x n matrix.
  MatrixXd contract(const VectorXd& s) const;
};

struct NonlinearSignSystem {
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  DriftFn f;
  DriftJacobianFn dfdx;
  std::function<MatrixXd(const VectorXd&)> g;
  std::function<GainJacobian(const VectorXd&)> dgdx;
  std::function<VectorXd(const VectorXd&)> h;
  std::function<MatrixXd(const VectorXd&)> dhdx;
  double rho = 0.0;
};

void validate(const NonlinearSignSystem& sys);

NonlinearSignSystem as_nonlinear(const LinearSignSystem& sys);
NonlinearSignSystem as_nonlinear(const AffineGainSignSystem& sys);

// Checked evaluations of a nonlinear system: every result is shape-checked
// against the declared n, m and std::logic_error is thrown on mismatch.
VectorXd eval_f(const NonlinearSignSystem& sys, const VectorXd& x, double t);
MatrixXd eval_dfdx(const NonlinearSignSystem& sys, const VectorXd& x, double t);
MatrixXd eval_g(const NonlinearSignSystem& sys, const VectorXd& x);
GainJacobian eval_dgdx(const NonlinearSignSystem& sys, const VectorXd& x);
VectorXd eval_h(const NonlinearSignSystem& sys, const VectorXd& x);
MatrixXd eval_dhdx(const NonlinearSignSystem& sys, const VectorXd& x);

/// Surface values y = C x + D (linear, affine-gain) or h(x) (nonlinear).
VectorXd output(const LinearSignSystem& sys, const VectorXd& x);
VectorXd output(const AffineGainSignSystem& sys, const VectorXd& x);
VectorXd output(const NonlinearSignSystem& sys, const VectorXd& x);

struct CbReport {
  MatrixXd CB;
  bool is_positive_definite = false;
};

/// Advisory relative-degree-one check: is the symmetric part of CB positive definite?
CbReport check_cb_positive(const LinearSignSystem& sys);
CbReport check_cb_positive(const AffineGainSignSystem& sys);

/// Leading principal minors of (A + A^T)/2 all strictly positive.
bool symmetric_part_positive_definite(const MatrixXd& A);

// Plant x' = E x - B u + B gamma(t) under the Lyapunov-based feedback
// u_i in gains_i sgn(B_i^T P x), i.e. V(x) = x^T P x / 2.
struct DisturbedLinearSystem {
  MatrixXd E;
  MatrixXd B;
  VectorXd gains;
  MatrixXd P;
  std::function<VectorXd(double)> disturbance;
  VectorXd disturbance_bounds;

  Eigen::Index n() const { return E.rows(); }
  Eigen::Index m() const { return B.cols(); }
};

/// Checks dimensions, symmetry of P (1e-12) and its positive definiteness.
void validate(const DisturbedLinearSystem& sys);

/// True when |gamma_i(t)| < bound_i on `samples` evenly spaced points of [t0, t1].
bool disturbance_within_bounds(const DisturbedLinearSystem& sys, double t0, double t1, int samples);

/// The equivalent sign system with B_sign = B diag(gains), C = B^T P, D = 0, a = 0.
LinearSignSystem closed_loop_sign_system(const DisturbedLinearSystem& sys);

/// Closed-loop right-hand side. Empty when some surface value B_i^T P x is zero
/// (the inclusion is multivalued there).
std::optional<VectorXd> closed_loop_rhs(const DisturbedLinearSystem& sys, const VectorXd& x, double t);

}  // namespace multisurf
