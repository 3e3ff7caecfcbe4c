#include "multisurf/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace multisurf {

ErrorReport error_norms(const std::vector<double>& errors, double h) {
  ErrorReport r;
  double s1 = 0, s2 = 0;
  for (double e : errors) {
    const double a = std::abs(e);
    r.inf_norm = std::max(r.inf_norm, a);
    s1 += a;
    s2 += a * a;
  }
  r.l1_norm = h * s1;
  r.l2_norm = std::sqrt(h * s2);
  return r;
}

ErrorReport error_norms(const std::vector<double>& times, const std::vector<double>& values,
                        const std::function<double(double)>& reference, double h) {
  if (times.size() != values.size()) throw std::invalid_argument("times and values differ in length");
  std::vector<double> e(values.size());
  for (std::size_t k = 0; k < e.size(); ++k) e[k] = values[k] - reference(times[k]);
  return error_norms(e, h);
}

double convergence_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("convergence slope needs at least 3 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [h, e] : points) {
    if (!(h > 0) || !(e > 0)) throw std::invalid_argument("convergence slope needs positive h and error");
    const double x = std::log(h), y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(points.size());
  const double den = n * sxx - sx * sx;
  if (den == 0) throw std::invalid_argument("convergence slope needs distinct step sizes");
  return (n * sxy - sx * sy) / den;
}

std::vector<double> tail_window(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::size_t len = std::max<std::size_t>(n / 4, 8);
  len = std::min(len, n);
  return {values.end() - static_cast<std::ptrdiff_t>(len), values.end()};
}

bool detect_period2(const std::vector<double>& tail, double tol) {
  if (tail.size() < 8) return false;
  for (std::size_t k = 0; k + 1 < tail.size(); ++k) {
    if (std::abs(tail[k + 1] - tail[k]) <= 10 * tol) return false;
    if (k + 2 < tail.size() && std::abs(tail[k + 2] - tail[k]) > tol) return false;
  }
  return true;
}

std::optional<std::size_t> arrival_step(const std::vector<double>& values, double tol) {
  std::size_t k = values.size();
  while (k > 0 && std::abs(values[k - 1]) <= tol) --k;
  if (k == values.size()) return std::nullopt;
  return k;
}

std::optional<std::size_t> arrival_step(const Trajectory& traj, Eigen::Index surface, double tol) {
  return arrival_step(output_channel(traj, surface), tol);
}

namespace {

std::vector<double> channel(const std::vector<VectorXd>& seq, Eigen::Index i) {
  std::vector<double> out;
  out.reserve(seq.size());
  for (const auto& v : seq) {
    if (i < 0 || i >= v.size()) throw std::out_of_range("channel index out of range");
    out.push_back(v(i));
  }
  return out;
}

}  // namespace

std::vector<double> state_channel(const Trajectory& traj, Eigen::Index i) { return channel(traj.states, i); }
std::vector<double> selection_channel(const Trajectory& traj, Eigen::Index i) { return channel(traj.selections, i); }
std::vector<double> output_channel(const Trajectory& traj, Eigen::Index i) { return channel(traj.outputs, i); }
std::vector<double> control_channel(const Trajectory& traj, Eigen::Index i) { return channel(traj.controls, i); }

double simple_state_reference(double x0, double t) {
  const double sg = x0 > 0 ? 1.0 : (x0 < 0 ? -1.0 : 0.0);
  return sg * std::max(std::abs(x0) - t, 0.0);
}

double simple_selection_reference(double x0, double t) {
  const double sg = x0 > 0 ? 1.0 : (x0 < 0 ? -1.0 : 0.0);
  return t < std::abs(x0) ? sg : 0.0;
}

}  // namespace multisurf
