#pragma once

#include <Eigen/Core>

#include "multisurf/integrators.hpp"
#include "multisurf/systems.hpp"
#include "multisurf/zoh.hpp"

namespace multisurf {

/// Implicit Euler controller of the scalar integrator: u_k = -clamp(x_k / h, -1, 1).
double iec_control(double x_k, double h);

// Equivalent-control sliding mode controller u = -(CG)^-1 (C F x + alpha Sgn(C x))
// sampled with a zero-order hold. alpha is folded into Gamma.
struct EcbSmcController {
  MatrixXd F;
  MatrixXd G;
  MatrixXd C;
  double alpha = 1.0;
  double h = 0.0;
  ZohPair pair;
  ZohMode mode = ZohMode::implicit_hold;
};

EcbSmcController make_ecb_controller(MatrixXd F, MatrixXd G, MatrixXd C, double alpha, double h, ZohMode mode);

struct ControlRecord {
  VectorXd u;       // held on [t_k, t_{k+1})
  VectorXd s_used;  // selection consumed by the controller
};

struct EcbStep {
  VectorXd x;  // x_{k+1}
  ControlRecord control;
  VectorXd y;  // C x_{k+1}
};

/// Control from the state and the selection: -(CG)^-1 (C F x_k + alpha s).
VectorXd ecb_control(const EcbSmcController& ctl, const VectorXd& x_k, const VectorXd& s);

EcbStep ecb_step(const EcbSmcController& ctl, const VectorXd& x_k, const SignSolverSettings& settings = {});

Trajectory simulate_ecb(const EcbSmcController& ctl, const VectorXd& x0, double t0, double T,
                        const SignSolverSettings& settings = {}, const SimulationOptions& opt = {});

enum class LyapunovScheme { implicit, explicit_euler };

/// One step of x' = E x - B u + B gamma(t), u_i in gains_i Sgn(B_i^T P x). The
/// disturbance is taken at t_k; the returned StepResult carries u_k = gains o s.
StepResult lyapunov_control_step(const DisturbedLinearSystem& sys, const VectorXd& x_k, double t_k,
                                 const SchemeConfig& cfg, LyapunovScheme scheme = LyapunovScheme::implicit);

Trajectory simulate_lyapunov(const DisturbedLinearSystem& sys, const VectorXd& x0, double t0, double T,
                             const SchemeConfig& cfg, LyapunovScheme scheme = LyapunovScheme::implicit,
                             const SimulationOptions& opt = {});

}  // namespace multisurf
