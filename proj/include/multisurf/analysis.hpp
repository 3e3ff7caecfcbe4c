#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "multisurf/integrators.hpp"

namespace multisurf {

struct ErrorReport {
  double inf_norm = 0;
  double l1_norm = 0;
  double l2_norm = 0;
};

/// max_k |e_k| and (h sum_k |e_k|^p)^(1/p), p = 1, 2.
ErrorReport error_norms(const std::vector<double>& errors, double h);

/// Errors f_k - reference(t_k) on the trajectory grid for one scalar channel.
ErrorReport error_norms(const std::vector<double>& times, const std::vector<double>& values,
                        const std::function<double(double)>& reference, double h);

/// Least-squares slope of log(error) against log(h); needs >= 3 positive points.
double convergence_slope(const std::vector<std::pair<double, double>>& points);

/// Last 25% of the sequence, at least 8 samples (or everything when shorter).
std::vector<double> tail_window(const std::vector<double>& values);

/// Alternation test on a tail: |v_{k+2} - v_k| <= tol and |v_{k+1} - v_k| > 10 tol for every k.
bool detect_period2(const std::vector<double>& tail, double tol);

/// Smallest k with |values_{k'}| <= tol for all k' >= k.
std::optional<std::size_t> arrival_step(const std::vector<double>& values, double tol = 1e-12);
std::optional<std::size_t> arrival_step(const Trajectory& traj, Eigen::Index surface, double tol = 1e-12);

// Scalar channels of a trajectory.
std::vector<double> state_channel(const Trajectory& traj, Eigen::Index i);
std::vector<double> selection_channel(const Trajectory& traj, Eigen::Index i);
std::vector<double> output_channel(const Trajectory& traj, Eigen::Index i);
std::vector<double> control_channel(const Trajectory& traj, Eigen::Index i);

/// Analytic solution of x' in -Sgn(x): sgn(x0) max(|x0| - t, 0).
double simple_state_reference(double x0, double t);
/// Its selection: sgn(x0) on t < |x0|, zero afterwards.
double simple_selection_reference(double x0, double t);

}  // namespace multisurf
