#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "multisurf/integrators.hpp"
#include "multisurf/systems.hpp"

namespace multisurf {

/// Header t,x0..,s0..,y0..[,u0..] and one row per step, 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

struct ConvergenceRow {
  double h;
  double inf;
  double l1;
  double l2;
};

/// Rows h,inf,l1,l2 followed by a "# slope" summary line.
void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows, double slope_l1,
                           double slope_l2);

/// Linear system from JSON keys E, a, B, C, D (row-major nested arrays; a and D
/// default to zero, E to the zero matrix).
LinearSignSystem parse_linear_system(const std::string& json_text);
LinearSignSystem load_linear_system(const std::string& path);

}  // namespace multisurf
