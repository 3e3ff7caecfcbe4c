#include "multisurf/integrators.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/LU>

namespace multisurf {

void validate(const SchemeConfig& cfg) {
  if (!(cfg.h > 0) || !std::isfinite(cfg.h)) throw std::invalid_argument("step size h must be positive");
  if (!(cfg.theta >= 0 && cfg.theta <= 1)) throw std::invalid_argument("theta must lie in [0, 1]");
  if (!(cfg.gamma >= 0 && cfg.gamma <= 1)) throw std::invalid_argument("gamma must lie in [0, 1]");
  if (!(cfg.newton_tol > 0)) throw std::invalid_argument("newton tolerance must be positive");
  if (cfg.newton_max_iter < 1) throw std::invalid_argument("newton needs at least one iteration");
}

VectorXd sign_of(const VectorXd& y) {
  VectorXd s(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) s(i) = y(i) > 0 ? 1.0 : (y(i) < 0 ? -1.0 : 0.0);
  return s;
}

VectorXd solve_sign_step(const MatrixXd& W, const VectorXd& b, const SignSolverSettings& settings) {
  if (b.size() == 0) return VectorXd(0);
  const auto p = from_sign_step(SignStepProblemd{W, b});
  MlcpSolutiond sol;
  try {
    sol = solve(p, settings.solver, settings.mlcp);
  } catch (const std::exception& e) {
    throw StepFailure(std::string("MLCP solver error: ") + e.what(), dump(p));
  }
  if (sol.status != MlcpStatus::solved) {
    std::ostringstream os;
    os << "MLCP not solved (" << to_string(sol.status) << ", residual " << sol.residual << ")";
    throw StepFailure(os.str(), dump(p));
  }
  return sol.z;
}

StepResult step_discrete(const DiscreteSignSystem& ds, const VectorXd& x_k, const SignSolverSettings& settings,
                         const VectorXd* extra) {
  VectorXd free = ds.R * x_k + ds.p;
  if (extra) free += *extra;
  const VectorXd b = ds.C * free + ds.D;
  StepResult r;
  r.s = solve_sign_step(ds.W(), b, settings);
  r.x = free - ds.S * r.s;
  r.y = ds.C * r.x + ds.D;
  return r;
}

DiscreteSignSystem discretize_theta(const LinearSignSystem& sys, double h, double theta) {
  validate(sys);
  const auto n = sys.n();
  const MatrixXd I = MatrixXd::Identity(n, n);
  Eigen::FullPivLU<MatrixXd> lu(I - h * theta * sys.E);
  if (!lu.isInvertible()) throw StepFailure("I - h theta E is singular");
  DiscreteSignSystem ds;
  ds.R = lu.solve(I + h * (1 - theta) * sys.E);
  ds.p = lu.solve(h * sys.a);
  ds.S = lu.solve(h * sys.B);
  ds.C = sys.C;
  ds.D = sys.D;
  return ds;
}

StepResult step_linear(const LinearSignSystem& sys, const VectorXd& x_k, double, const SchemeConfig& cfg) {
  validate(cfg);
  return step_discrete(discretize_theta(sys, cfg.h, cfg.theta), x_k, cfg.sign);
}

StepResult step_explicit(const LinearSignSystem& sys, const VectorXd& x_k, double, double h) {
  StepResult r;
  r.s = sign_of(output(sys, x_k));
  r.x = x_k + h * (sys.E * x_k + sys.a) - h * sys.B * r.s;
  r.y = output(sys, r.x);
  return r;
}

VectorXd newton_residual(const NonlinearSignSystem& sys, const VectorXd& x, const VectorXd& s, const VectorXd& x_k,
                         double t_k, const SchemeConfig& cfg) {
  const double h = cfg.h;
  const VectorXd xt = cfg.theta * x + (1 - cfg.theta) * x_k;
  const VectorXd xg = cfg.gamma * x + (1 - cfg.gamma) * x_k;
  return x - x_k - h * eval_f(sys, xt, t_k + cfg.theta * h) + h * eval_g(sys, xg) * s + h * sys.rho * (x - x_k);
}

StepResult step_newton(const NonlinearSignSystem& sys, const VectorXd& x_k, const VectorXd& s_prev, double t_k,
                       const SchemeConfig& cfg) {
  validate(cfg);
  const auto n = sys.n;
  const auto m = sys.m;
  if (x_k.size() != n) throw std::invalid_argument("state has the wrong length");
  const double h = cfg.h;
  const double tt = t_k + cfg.theta * h;
  const MatrixXd I = MatrixXd::Identity(n, n);

  VectorXd x = x_k;
  VectorXd s = s_prev.size() == m ? s_prev : VectorXd::Zero(m);
  double res = 0, gap = 0;
  for (int it = 1; it <= cfg.newton_max_iter; ++it) {
    const VectorXd xt = cfg.theta * x + (1 - cfg.theta) * x_k;
    const VectorXd xg = cfg.gamma * x + (1 - cfg.gamma) * x_k;
    const MatrixXd g = eval_g(sys, xg);
    const MatrixXd H = eval_dhdx(sys, x);
    const MatrixXd J = I - h * cfg.theta * eval_dfdx(sys, xt, tt) + h * cfg.gamma * eval_dgdx(sys, xg).contract(s) +
                       h * sys.rho * I;
    const VectorXd r0 = x - x_k - h * eval_f(sys, xt, tt) + h * sys.rho * (x - x_k);

    Eigen::FullPivLU<MatrixXd> lu(J);
    if (!lu.isInvertible()) {
      std::ostringstream os;
      os << "singular Newton matrix at iteration " << it;
      throw StepFailure(os.str());
    }
    const MatrixXd Jg = lu.solve(g);
    const VectorXd Jr = lu.solve(r0);
    const MatrixXd W = h * H * Jg;
    const VectorXd b = eval_h(sys, x) - H * Jr;

    const VectorXd s_new = solve_sign_step(W, b, cfg.sign);
    const VectorXd x_new = x - Jr - h * Jg * s_new;
    const VectorXd y_lin = b - W * s_new;
    if (!x_new.allFinite()) throw StepFailure("Newton iterate is not finite");

    const VectorXd y_new = eval_h(sys, x_new);
    res = newton_residual(sys, x_new, s_new, x_k, t_k, cfg).lpNorm<Eigen::Infinity>();
    gap = m > 0 ? (y_new - y_lin).lpNorm<Eigen::Infinity>() : 0.0;
    x = x_new;
    s = s_new;
    if (res < cfg.newton_tol && gap < cfg.newton_tol) {
      StepResult r;
      r.x = x;
      r.s = s;
      r.y = y_new;
      r.iterations = it;
      return r;
    }
  }
  std::ostringstream os;
  os << "Newton did not converge in " << cfg.newton_max_iter << " iterations (residual " << res << ", surface gap "
     << gap << ")";
  throw StepFailure(os.str());
}

StepResult step_newton(const AffineGainSignSystem& sys, const VectorXd& x_k, const VectorXd& s_prev, double t_k,
                       const SchemeConfig& cfg) {
  return step_newton(as_nonlinear(sys), x_k, s_prev, t_k, cfg);
}

bool check_trajectory(const Trajectory& traj, double h, bool selections_in_box) {
  const auto N = traj.times.size();
  if (traj.states.size() != N || traj.selections.size() != N || traj.outputs.size() != N) return false;
  if (!traj.controls.empty() && traj.controls.size() != N) return false;
  if (!traj.newton_iters.empty() && traj.newton_iters.size() != N) return false;
  for (std::size_t k = 1; k < N; ++k)
    if (std::abs(traj.times[k] - traj.times[k - 1] - h) > 1e-12) return false;
  if (selections_in_box)
    for (std::size_t k = 1; k < N; ++k)
      if (traj.selections[k].size() > 0 && traj.selections[k].lpNorm<Eigen::Infinity>() > 1 + 1e-9) return false;
  return true;
}

long step_count(double t0, double T, double h) {
  if (!(h > 0)) throw std::invalid_argument("step size h must be positive");
  if (!(T >= t0)) throw std::invalid_argument("final time must not precede the initial time");
  // Absorb roundoff in (T - t0) / h so that e.g. 3 / 0.2 gives 15 steps.
  return static_cast<long>(std::ceil((T - t0) / h - 1e-9));
}

Trajectory simulate(const VectorXd& x0, const VectorXd& y0, double t0, double T, double h, const Stepper& stepper,
                    const SimulationOptions& opt) {
  const long N = step_count(t0, T, h);
  Trajectory traj;
  traj.times.reserve(N + 1);
  traj.states.reserve(N + 1);
  traj.times.push_back(t0);
  traj.states.push_back(x0);
  traj.outputs.push_back(y0);
  traj.selections.push_back(VectorXd::Zero(y0.size()));
  traj.newton_iters.push_back(0);
  bool has_control = false;

  for (long k = 0; k < N; ++k) {
    const double t_k = t0 + static_cast<double>(k) * h;
    StepResult r;
    try {
      r = stepper(traj.states.back(), traj.selections.back(), t_k);
    } catch (const StepFailure& e) {
      std::ostringstream os;
      os << "step " << k << " at t = " << t_k << ": " << e.what();
      if (!e.diagnostics().empty()) os << "\n" << e.diagnostics();
      traj.failure = os.str();
      break;
    }
    if (r.u) {
      if (!has_control) {
        // backfill rows recorded before the first control was reported
        traj.controls.assign(traj.times.size(), VectorXd::Zero(r.u->size()));
        has_control = true;
      }
    }
    traj.times.push_back(t0 + static_cast<double>(k + 1) * h);
    traj.states.push_back(r.x);
    traj.selections.push_back(r.s);
    traj.outputs.push_back(r.y);
    traj.newton_iters.push_back(r.iterations);
    if (has_control) traj.controls.push_back(r.u ? *r.u : VectorXd::Zero(traj.controls.front().size()));

    if (!r.x.allFinite() || r.x.lpNorm<Eigen::Infinity>() > opt.blowup) {
      std::ostringstream os;
      os << "diverged at step " << k + 1 << " (|x| = " << r.x.lpNorm<Eigen::Infinity>() << ")";
      traj.failure = os.str();
      traj.diverged = true;
      break;
    }
  }
  return traj;
}

Trajectory simulate(const LinearSignSystem& sys, const VectorXd& x0, double t0, double T, const SchemeConfig& cfg,
                    Scheme scheme, const SimulationOptions& opt) {
  validate(cfg);
  validate(sys);
  if (x0.size() != sys.n()) throw std::invalid_argument("initial state has the wrong length");
  if (scheme == Scheme::explicit_euler) {
    const double h = cfg.h;
    return simulate(x0, output(sys, x0), t0, T, h,
                    [&](const VectorXd& x, const VectorXd&, double t) { return step_explicit(sys, x, t, h); }, opt);
  }
  const DiscreteSignSystem ds = discretize_theta(sys, cfg.h, cfg.theta);
  return simulate(x0, output(sys, x0), t0, T, cfg.h,
                  [&](const VectorXd& x, const VectorXd&, double) { return step_discrete(ds, x, cfg.sign); }, opt);
}

Trajectory simulate(const NonlinearSignSystem& sys, const VectorXd& x0, double t0, double T, const SchemeConfig& cfg,
                    const SimulationOptions& opt) {
  validate(cfg);
  validate(sys);
  if (x0.size() != sys.n) throw std::invalid_argument("initial state has the wrong length");
  return simulate(x0, eval_h(sys, x0), t0, T, cfg.h,
                  [&](const VectorXd& x, const VectorXd& s, double t) { return step_newton(sys, x, s, t, cfg); },
                  opt);
}

Trajectory simulate(const AffineGainSignSystem& sys, const VectorXd& x0, double t0, double T,
                    const SchemeConfig& cfg, const SimulationOptions& opt) {
  return simulate(as_nonlinear(sys), x0, t0, T, cfg, opt);
}

}  // namespace multisurf
