#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "multisurf/mlcp.hpp"
#include "multisurf/systems.hpp"

namespace multisurf {

/// MLCP backend used for every implicit sign step.
struct SignSolverSettings {
  SolverKind solver = SolverKind::automatic;
  MlcpOptions mlcp;
};

struct SchemeConfig {
  double h = 0.1;
  double theta = 1.0;
  double gamma = 1.0;
  double newton_tol = 1e-10;
  int newton_max_iter = 50;
  SignSolverSettings sign;
};

void validate(const SchemeConfig& cfg);

/// Raised when one time step cannot be completed.
class StepFailure : public std::runtime_error {
 public:
  explicit StepFailure(const std::string& what, std::string diagnostics = {})
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}

  const std::string& diagnostics() const { return diagnostics_; }

 private:
  std::string diagnostics_;
};

struct StepResult {
  VectorXd x;                 // x_{k+1}
  VectorXd s;                 // selection used on [t_k, t_{k+1})
  VectorXd y;                 // y_{k+1}
  std::optional<VectorXd> u;  // control held on [t_k, t_{k+1}), when meaningful
  int iterations = 0;
};

/// Componentwise sign with sgn(0) = 0.
VectorXd sign_of(const VectorXd& y);

/// Solves s in Sgn(b - W s). Throws StepFailure (with an MLCP dump) when no
/// certified solution is found.
VectorXd solve_sign_step(const MatrixXd& W, const VectorXd& b, const SignSolverSettings& settings);

// x_{k+1} = R x_k + p - S s_{k+1},  y_{k+1} = C x_{k+1} + D,  s_{k+1} in Sgn(y_{k+1}).
// Common form of the theta-Euler and ZOH discretizations of linear sign systems.
struct DiscreteSignSystem {
  MatrixXd R;
  VectorXd p;
  MatrixXd S;
  MatrixXd C;
  VectorXd D;

  MatrixXd W() const { return C * S; }
};

/// Implicit step of a discrete sign system; `extra` is added to p for this step only.
StepResult step_discrete(const DiscreteSignSystem& ds, const VectorXd& x_k, const SignSolverSettings& settings,
                         const VectorXd* extra = nullptr);

/// theta-method discretization of the linear drift with step h; throws
/// StepFailure when I - h theta E is singular.
DiscreteSignSystem discretize_theta(const LinearSignSystem& sys, double h, double theta);

/// One implicit step of x' in E x + a - B Sgn(C x + D): a single MLCP solve.
StepResult step_linear(const LinearSignSystem& sys, const VectorXd& x_k, double t_k, const SchemeConfig& cfg);

/// Forward Euler with s_k = sgn(C x_k + D), sgn(0) = 0.
StepResult step_explicit(const LinearSignSystem& sys, const VectorXd& x_k, double t_k, double h);

/// One-step nonsmooth problem solved by an outer Newton loop with an MLCP per
/// iterate. `s_prev` warm-starts the selection. The hypomonotone shift rho is
/// applied as + h rho (x_{k+1} - x_k) in the residual.
StepResult step_newton(const NonlinearSignSystem& sys, const VectorXd& x_k, const VectorXd& s_prev, double t_k,
                       const SchemeConfig& cfg);
StepResult step_newton(const AffineGainSignSystem& sys, const VectorXd& x_k, const VectorXd& s_prev, double t_k,
                       const SchemeConfig& cfg);

/// Residual x - x_k - h f(x_theta) + h g(x_gamma) s + h rho (x - x_k) of the implicit step.
VectorXd newton_residual(const NonlinearSignSystem& sys, const VectorXd& x, const VectorXd& s, const VectorXd& x_k,
                         double t_k, const SchemeConfig& cfg);

// Sampled record of a simulation. Row k holds t_k, x_k, y_k and the selection
// (and control) that acted on [t_{k-1}, t_k); row 0 carries the initial
// selection, zero by convention.
struct Trajectory {
  std::vector<double> times;
  std::vector<VectorXd> states;
  std::vector<VectorXd> selections;
  std::vector<VectorXd> outputs;
  std::vector<VectorXd> controls;  // empty when the run has no control signal
  std::vector<int> newton_iters;
  std::optional<std::string> failure;
  bool diverged = false;

  std::size_t size() const { return times.size(); }
  bool completed() const { return !failure.has_value(); }
};

/// Invariants: equal lengths, uniform spacing h within 1e-12, |s_k| <= 1 + 1e-9 for k >= 1.
bool check_trajectory(const Trajectory& traj, double h, bool selections_in_box = true);

using Stepper = std::function<StepResult(const VectorXd& x_k, const VectorXd& s_prev, double t_k)>;

struct SimulationOptions {
  double blowup = 1e6;  // |x_k| beyond this stops the run as diverged
};

/// Number of uniform steps covering [t0, T]; the last step may overshoot T.
long step_count(double t0, double T, double h);

/// Uniform time loop t_k = t0 + k h. Step failures end the run early with the
/// partial trajectory and the failure message.
Trajectory simulate(const VectorXd& x0, const VectorXd& y0, double t0, double T, double h, const Stepper& stepper,
                    const SimulationOptions& opt = {});

enum class Scheme { implicit, explicit_euler };

Trajectory simulate(const LinearSignSystem& sys, const VectorXd& x0, double t0, double T, const SchemeConfig& cfg,
                    Scheme scheme = Scheme::implicit, const SimulationOptions& opt = {});
Trajectory simulate(const NonlinearSignSystem& sys, const VectorXd& x0, double t0, double T, const SchemeConfig& cfg,
                    const SimulationOptions& opt = {});
Trajectory simulate(const AffineGainSignSystem& sys, const VectorXd& x0, double t0, double T,
                    const SchemeConfig& cfg, const SimulationOptions& opt = {});

}  // namespace multisurf
