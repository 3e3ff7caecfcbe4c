#pragma once

// Zero-order-hold sampling of x' = F x + G u under the equivalent-control
// sliding law u = -(CG)^-1 (C F x + alpha s):
//
//   x_{k+1} = Phi x_k - Gamma s,
//   Phi   = e^{Fh} - Int_0^h e^{F tau} dtau G (CG)^-1 C F,
//   Gamma = alpha Int_0^h e^{F tau} dtau G (CG)^-1.

#include <Eigen/Core>

#include "multisurf/integrators.hpp"

namespace multisurf {

struct ZohPair {
  MatrixXd Phi;
  MatrixXd Gamma;
};

struct ExpIntegral {
  MatrixXd exp;       // e^{F h}
  MatrixXd integral;  // Int_0^h e^{F tau} dtau
};

/// Both blocks from one exponential of the augmented matrix [[F, I], [0, 0]] h.
ExpIntegral exp_and_integral(const MatrixXd& F, double h);

/// Throws std::invalid_argument when CG is singular or h <= 0.
ZohPair zoh_discretize(const MatrixXd& F, const MatrixXd& G, const MatrixXd& C, double h, double alpha = 1.0);

enum class ZohMode { explicit_hold, implicit_hold };

/// Implicit: s solves s in Sgn(C Phi x_k + D - C Gamma s). Explicit: s = sgn(C x_k + D).
StepResult step_zoh(const ZohPair& pair, const MatrixXd& C, const VectorXd& D, const VectorXd& x_k, ZohMode mode,
                    const SignSolverSettings& settings = {});

Trajectory simulate_zoh(const ZohPair& pair, const MatrixXd& C, const VectorXd& D, const VectorXd& x0, double t0,
                        double T, double h, ZohMode mode, const SignSolverSettings& settings = {},
                        const SimulationOptions& opt = {});

}  // namespace multisurf
