#include "multisurf/zoh.hpp"

#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

namespace multisurf {

ExpIntegral exp_and_integral(const MatrixXd& F, double h) {
  if (F.rows() != F.cols()) throw std::invalid_argument("F must be square");
  const auto n = F.rows();
  MatrixXd aug = MatrixXd::Zero(2 * n, 2 * n);
  aug.topLeftCorner(n, n) = F * h;
  aug.topRightCorner(n, n) = MatrixXd::Identity(n, n) * h;
  const MatrixXd e = aug.exp();
  return {e.topLeftCorner(n, n), e.topRightCorner(n, n)};
}

ZohPair zoh_discretize(const MatrixXd& F, const MatrixXd& G, const MatrixXd& C, double h, double alpha) {
  if (!(h > 0)) throw std::invalid_argument("step size h must be positive");
  if (G.rows() != F.rows() || C.cols() != F.rows() || C.rows() != G.cols())
    throw std::invalid_argument("ZOH data dimensions are inconsistent");
  Eigen::FullPivLU<MatrixXd> cg(C * G);
  if (!cg.isInvertible()) throw std::invalid_argument("CG is singular");
  const auto [eF, iF] = exp_and_integral(F, h);
  const MatrixXd K = iF * G * cg.inverse();
  return {eF - K * C * F, alpha * K};
}

StepResult step_zoh(const ZohPair& pair, const MatrixXd& C, const VectorXd& D, const VectorXd& x_k, ZohMode mode,
                    const SignSolverSettings& settings) {
  if (mode == ZohMode::implicit_hold) {
    const DiscreteSignSystem ds{pair.Phi, VectorXd::Zero(x_k.size()), pair.Gamma, C, D};
    return step_discrete(ds, x_k, settings);
  }
  StepResult r;
  r.s = sign_of(C * x_k + D);
  r.x = pair.Phi * x_k - pair.Gamma * r.s;
  r.y = C * r.x + D;
  return r;
}

Trajectory simulate_zoh(const ZohPair& pair, const MatrixXd& C, const VectorXd& D, const VectorXd& x0, double t0,
                        double T, double h, ZohMode mode, const SignSolverSettings& settings,
                        const SimulationOptions& opt) {
  return simulate(x0, C * x0 + D, t0, T, h,
                  [&](const VectorXd& x, const VectorXd&, double) { return step_zoh(pair, C, D, x, mode, settings); },
                  opt);
}

}  // namespace multisurf
