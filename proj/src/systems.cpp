#include "multisurf/systems.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/LU>

namespace multisurf {
namespace {

std::string shape(Eigen::Index rows, Eigen::Index cols) {
  std::ostringstream os;
  os << rows << "x" << cols;
  return os.str();
}

void require(bool condition, const std::string& what) {
  if (!condition) throw std::invalid_argument(what);
}

void check_shape(const MatrixXd& value, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (value.rows() != rows || value.cols() != cols) {
    throw std::logic_error(std::string(name) + " returned " + shape(value.rows(), value.cols()) +
                           ", expected " + shape(rows, cols));
  }
}

void check_length(const VectorXd& value, Eigen::Index n, const char* name) {
  if (value.size() != n) {
    throw std::logic_error(std::string(name) + " returned length " + std::to_string(value.size()) +
                           ", expected " + std::to_string(n));
  }
}

void check_state(const VectorXd& x, Eigen::Index n) {
  require(x.size() == n, "state has length " + std::to_string(x.size()) + ", expected " +
                             std::to_string(n));
}

}  // namespace

void validate(const LinearSignSystem& sys) {
  const auto n = sys.E.rows();
  const auto m = sys.C.rows();
  require(n >= 1, "system needs at least one state");
  require(m >= 1, "system needs at least one switching surface");
  require(sys.E.cols() == n, "E must be square, got " + shape(sys.E.rows(), sys.E.cols()));
  require(sys.a.size() == n, "a must have length n");
  require(sys.B.rows() == n && sys.B.cols() == m,
          "B must be " + shape(n, m) + ", got " + shape(sys.B.rows(), sys.B.cols()));
  require(sys.C.cols() == n, "C must be " + shape(m, n) + ", got " + shape(sys.C.rows(), sys.C.cols()));
  require(sys.D.size() == m, "D must have length m");
}

LinearSignSystem make_linear_system(MatrixXd E, VectorXd a, MatrixXd B, MatrixXd C, VectorXd D) {
  LinearSignSystem sys{std::move(E), std::move(a), std::move(B), std::move(C), std::move(D)};
  validate(sys);
  return sys;
}

LinearSignSystem make_linear_system(MatrixXd B, MatrixXd C) {
  const auto n = B.rows();
  const auto m = C.rows();
  return make_linear_system(MatrixXd::Zero(n, n), VectorXd::Zero(n), std::move(B), std::move(C),
                            VectorXd::Zero(m));
}

double AffineGainSignSystem::total_rho() const {
  return std::accumulate(rho.begin(), rho.end(), 0.0);
}

void validate(const AffineGainSignSystem& sys) {
  require(sys.n >= 1 && sys.m >= 1, "affine-gain system needs n >= 1 and m >= 1");
  const auto m = static_cast<std::size_t>(sys.m);
  require(sys.A.size() == m && sys.B.size() == m && sys.C.size() == m && sys.rho.size() == m,
          "A, B, C and rho must each hold m entries");
  for (std::size_t i = 0; i < m; ++i) {
    require(sys.A[i].rows() == sys.n && sys.A[i].cols() == sys.n, "A_i must be n x n");
    require(sys.B[i].size() == sys.n, "B_i must have length n");
    require(sys.C[i].size() == sys.n, "C_i must have length n");
    require(sys.rho[i] >= 0.0, "hypomonotonicity constants must be non-negative");
  }
  require(sys.D.size() == sys.m, "D must have length m");
  require(static_cast<bool>(sys.f) && static_cast<bool>(sys.dfdx), "drift and its Jacobian are required");
}

MatrixXd GainJacobian::contract(const VectorXd& s) const {
  if (slices.empty()) return MatrixXd();
  const auto n = slices.front().rows();
  MatrixXd out(n, static_cast<Eigen::Index>(slices.size()));
  for (std::size_t p = 0; p < slices.size(); ++p) out.col(static_cast<Eigen::Index>(p)) = slices[p] * s;
  return out;
}

void validate(const NonlinearSignSystem& sys) {
  require(sys.n >= 1 && sys.m >= 1, "nonlinear system needs n >= 1 and m >= 1");
  require(sys.f && sys.dfdx && sys.g && sys.dgdx && sys.h && sys.dhdx,
          "nonlinear system requires f, g, h and all their Jacobians");
  require(sys.rho >= 0.0, "hypomonotonicity constant must be non-negative");
}

NonlinearSignSystem as_nonlinear(const LinearSignSystem& sys) {
  validate(sys);
  NonlinearSignSystem out;
  out.n = sys.n();
  out.m = sys.m();
  out.f = [E = sys.E, a = sys.a](const VectorXd& x, double) -> VectorXd { return E * x + a; };
  out.dfdx = [E = sys.E](const VectorXd&, double) -> MatrixXd { return E; };
  out.g = [B = sys.B](const VectorXd&) -> MatrixXd { return B; };
  out.dgdx = [n = out.n, m = out.m](const VectorXd&) {
    return GainJacobian{std::vector<MatrixXd>(static_cast<std::size_t>(n), MatrixXd::Zero(n, m))};
  };
  out.h = [C = sys.C, D = sys.D](const VectorXd& x) -> VectorXd { return C * x + D; };
  out.dhdx = [C = sys.C](const VectorXd&) -> MatrixXd { return C; };
  return out;
}

NonlinearSignSystem as_nonlinear(const AffineGainSignSystem& sys) {
  validate(sys);
  const auto n = sys.n;
  const auto m = sys.m;
  MatrixXd C(m, n);
  for (Eigen::Index i = 0; i < m; ++i) C.row(i) = sys.C[static_cast<std::size_t>(i)];

  // Column l of g(x) is A_l x + B_l, so dg_{kl}/dx_p = A_l(k, p).
  std::vector<MatrixXd> slices(static_cast<std::size_t>(n), MatrixXd::Zero(n, m));
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index l = 0; l < m; ++l)
      slices[static_cast<std::size_t>(p)].col(l) = sys.A[static_cast<std::size_t>(l)].col(p);

  NonlinearSignSystem out;
  out.n = n;
  out.m = m;
  out.f = sys.f;
  out.dfdx = sys.dfdx;
  out.g = [A = sys.A, B = sys.B, n, m](const VectorXd& x) -> MatrixXd {
    MatrixXd g(n, m);
    for (Eigen::Index l = 0; l < m; ++l)
      g.col(l) = A[static_cast<std::size_t>(l)] * x + B[static_cast<std::size_t>(l)];
    return g;
  };
  out.dgdx = [slices = std::move(slices)](const VectorXd&) { return GainJacobian{slices}; };
  out.h = [C, D = sys.D](const VectorXd& x) -> VectorXd { return C * x + D; };
  out.dhdx = [C](const VectorXd&) -> MatrixXd { return C; };
  out.rho = sys.total_rho();
  return out;
}

VectorXd eval_f(const NonlinearSignSystem& sys, const VectorXd& x, double t) {
  VectorXd v = sys.f(x, t);
  check_length(v, sys.n, "f");
  return v;
}

MatrixXd eval_dfdx(const NonlinearSignSystem& sys, const VectorXd& x, double t) {
  MatrixXd v = sys.dfdx(x, t);
  check_shape(v, sys.n, sys.n, "df/dx");
  return v;
}

MatrixXd eval_g(const NonlinearSignSystem& sys, const VectorXd& x) {
  MatrixXd v = sys.g(x);
  check_shape(v, sys.n, sys.m, "g");
  return v;
}

GainJacobian eval_dgdx(const NonlinearSignSystem& sys, const VectorXd& x) {
  GainJacobian v = sys.dgdx(x);
  if (static_cast<Eigen::Index>(v.slices.size()) != sys.n)
    throw std::logic_error("dg/dx must provide n slices");
  for (const auto& slice : v.slices) check_shape(slice, sys.n, sys.m, "dg/dx slice");
  return v;
}

VectorXd eval_h(const NonlinearSignSystem& sys, const VectorXd& x) {
  VectorXd v = sys.h(x);
  check_length(v, sys.m, "h");
  return v;
}

MatrixXd eval_dhdx(const NonlinearSignSystem& sys, const VectorXd& x) {
  MatrixXd v = sys.dhdx(x);
  check_shape(v, sys.m, sys.n, "dh/dx");
  return v;
}

VectorXd output(const LinearSignSystem& sys, const VectorXd& x) {
  check_state(x, sys.n());
  return sys.C * x + sys.D;
}

VectorXd output(const AffineGainSignSystem& sys, const VectorXd& x) {
  check_state(x, sys.n);
  VectorXd y(sys.m);
  for (Eigen::Index i = 0; i < sys.m; ++i) y(i) = sys.C[static_cast<std::size_t>(i)].dot(x) + sys.D(i);
  return y;
}

VectorXd output(const NonlinearSignSystem& sys, const VectorXd& x) {
  check_state(x, sys.n);
  return eval_h(sys, x);
}

bool symmetric_part_positive_definite(const MatrixXd& A) {
  if (A.rows() != A.cols() || A.rows() == 0) return false;
  const MatrixXd S = 0.5 * (A + A.transpose());
  for (Eigen::Index k = 1; k <= S.rows(); ++k) {
    if (!(S.topLeftCorner(k, k).determinant() > 0.0)) return false;
  }
  return true;
}

CbReport check_cb_positive(const LinearSignSystem& sys) {
  validate(sys);
  CbReport r;
  r.CB = sys.C * sys.B;
  r.is_positive_definite = symmetric_part_positive_definite(r.CB);
  return r;
}

CbReport check_cb_positive(const AffineGainSignSystem& sys) {
  validate(sys);
  MatrixXd B(sys.n, sys.m);
  MatrixXd C(sys.m, sys.n);
  for (Eigen::Index i = 0; i < sys.m; ++i) {
    B.col(i) = sys.B[static_cast<std::size_t>(i)];
    C.row(i) = sys.C[static_cast<std::size_t>(i)];
  }
  CbReport r;
  r.CB = C * B;
  r.is_positive_definite = symmetric_part_positive_definite(r.CB);
  return r;
}

void validate(const DisturbedLinearSystem& sys) {
  const auto n = sys.E.rows();
  const auto m = sys.B.cols();
  require(n >= 1 && m >= 1, "disturbed system needs n >= 1 and m >= 1");
  require(sys.E.cols() == n && sys.B.rows() == n, "E must be n x n and B n x m");
  require(sys.gains.size() == m && sys.disturbance_bounds.size() == m, "gains and bounds need length m");
  require(sys.P.rows() == n && sys.P.cols() == n, "P must be n x n");
  require((sys.P - sys.P.transpose()).cwiseAbs().maxCoeff() <= 1e-12, "P must be symmetric");
  Eigen::LLT<MatrixXd> llt(sys.P);
  require(llt.info() == Eigen::Success, "P must be positive definite");
  require(static_cast<bool>(sys.disturbance), "disturbance function is required");
}

bool disturbance_within_bounds(const DisturbedLinearSystem& sys, double t0, double t1, int samples) {
  for (int k = 0; k < samples; ++k) {
    const double t = samples > 1 ? t0 + (t1 - t0) * k / (samples - 1) : t0;
    const VectorXd g = sys.disturbance(t);
    if (g.size() != sys.m()) return false;
    if ((g.cwiseAbs().array() >= sys.disturbance_bounds.array()).any()) return false;
  }
  return true;
}

LinearSignSystem closed_loop_sign_system(const DisturbedLinearSystem& sys) {
  validate(sys);
  return make_linear_system(sys.E, VectorXd::Zero(sys.n()), sys.B * sys.gains.asDiagonal(),
                            sys.B.transpose() * sys.P, VectorXd::Zero(sys.m()));
}

std::optional<VectorXd> closed_loop_rhs(const DisturbedLinearSystem& sys, const VectorXd& x, double t) {
  check_state(x, sys.n());
  const VectorXd surface = sys.B.transpose() * sys.P * x;
  if ((surface.array() == 0.0).any()) return std::nullopt;
  const VectorXd u = sys.gains.cwiseProduct(surface.unaryExpr([](double v) { return v > 0 ? 1.0 : -1.0; }));
  return VectorXd(sys.E * x - sys.B * u + sys.B * sys.disturbance(t));
}

}  // namespace multisurf
