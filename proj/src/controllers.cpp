#include "multisurf/controllers.hpp"

#include <algorithm>

#include <Eigen/LU>

namespace multisurf {

double iec_control(double x_k, double h) {
  if (!(h > 0)) throw std::invalid_argument("step size h must be positive");
  return -std::clamp(x_k / h, -1.0, 1.0);
}

EcbSmcController make_ecb_controller(MatrixXd F, MatrixXd G, MatrixXd C, double alpha, double h, ZohMode mode) {
  if (!(alpha > 0)) throw std::invalid_argument("alpha must be positive");
  EcbSmcController ctl;
  ctl.pair = zoh_discretize(F, G, C, h, alpha);
  ctl.F = std::move(F);
  ctl.G = std::move(G);
  ctl.C = std::move(C);
  ctl.alpha = alpha;
  ctl.h = h;
  ctl.mode = mode;
  return ctl;
}

VectorXd ecb_control(const EcbSmcController& ctl, const VectorXd& x_k, const VectorXd& s) {
  const MatrixXd CG = ctl.C * ctl.G;
  return -CG.fullPivLu().solve(ctl.C * ctl.F * x_k + ctl.alpha * s);
}

EcbStep ecb_step(const EcbSmcController& ctl, const VectorXd& x_k, const SignSolverSettings& settings) {
  const VectorXd D = VectorXd::Zero(ctl.C.rows());
  const StepResult r = step_zoh(ctl.pair, ctl.C, D, x_k, ctl.mode, settings);
  return {r.x, {ecb_control(ctl, x_k, r.s), r.s}, r.y};
}

Trajectory simulate_ecb(const EcbSmcController& ctl, const VectorXd& x0, double t0, double T,
                        const SignSolverSettings& settings, const SimulationOptions& opt) {
  return simulate(x0, ctl.C * x0, t0, T, ctl.h,
                  [&](const VectorXd& x, const VectorXd&, double) {
                    const EcbStep e = ecb_step(ctl, x, settings);
                    StepResult r;
                    r.x = e.x;
                    r.s = e.control.s_used;
                    r.y = e.y;
                    r.u = e.control.u;
                    return r;
                  },
                  opt);
}

namespace {

VectorXd disturbance_at(const DisturbedLinearSystem& sys, double t) {
  if (!sys.disturbance) return VectorXd::Zero(sys.m());
  VectorXd g = sys.disturbance(t);
  if (g.size() != sys.m()) throw std::logic_error("disturbance has the wrong length");
  return g;
}

}  // namespace

StepResult lyapunov_control_step(const DisturbedLinearSystem& sys, const VectorXd& x_k, double t_k,
                                 const SchemeConfig& cfg, LyapunovScheme scheme) {
  validate(cfg);
  const LinearSignSystem cl = closed_loop_sign_system(sys);
  const VectorXd Bg = sys.B * disturbance_at(sys, t_k);
  StepResult r;
  if (scheme == LyapunovScheme::explicit_euler) {
    r = step_explicit(cl, x_k, t_k, cfg.h);
    r.x += cfg.h * Bg;
    r.y = output(cl, r.x);
  } else {
    const DiscreteSignSystem ds = discretize_theta(cl, cfg.h, cfg.theta);
    const auto n = sys.n();
    const VectorXd extra = (MatrixXd::Identity(n, n) - cfg.h * cfg.theta * sys.E).fullPivLu().solve(cfg.h * Bg);
    r = step_discrete(ds, x_k, cfg.sign, &extra);
  }
  r.u = sys.gains.cwiseProduct(r.s);
  return r;
}

Trajectory simulate_lyapunov(const DisturbedLinearSystem& sys, const VectorXd& x0, double t0, double T,
                             const SchemeConfig& cfg, LyapunovScheme scheme, const SimulationOptions& opt) {
  validate(sys);
  validate(cfg);
  const VectorXd y0 = sys.B.transpose() * sys.P * x0;
  return simulate(x0, y0, t0, T, cfg.h,
                  [&](const VectorXd& x, const VectorXd&, double t) {
                    return lyapunov_control_step(sys, x, t, cfg, scheme);
                  },
                  opt);
}

}  // namespace multisurf
