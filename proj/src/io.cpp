#include "multisurf/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace multisurf {

namespace {

void put_columns(std::ostream& os, const char* prefix, Eigen::Index count) {
  for (Eigen::Index i = 0; i < count; ++i) os << ',' << prefix << i;
}

void put_values(std::ostream& os, const VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) os << ',' << v(i);
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size();
  const Eigen::Index m = traj.outputs.empty() ? 0 : traj.outputs.front().size();
  const bool with_u = !traj.controls.empty();
  const Eigen::Index mu = with_u ? traj.controls.front().size() : 0;
  os << 't';
  put_columns(os, "x", n);
  put_columns(os, "s", m);
  put_columns(os, "y", m);
  if (with_u) put_columns(os, "u", mu);
  os << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    os << traj.times[k];
    put_values(os, traj.states[k]);
    put_values(os, traj.selections[k]);
    put_values(os, traj.outputs[k]);
    if (with_u) put_values(os, traj.controls[k]);
    os << '\n';
  }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  write_trajectory_csv(f, traj);
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows, double slope_l1,
                           double slope_l2) {
  os << "h,inf,l1,l2\n" << std::setprecision(17);
  for (const auto& r : rows) os << r.h << ',' << r.inf << ',' << r.l1 << ',' << r.l2 << '\n';
  os << "# slope l1=" << slope_l1 << " l2=" << slope_l2 << '\n';
}

namespace {

using nlohmann::json;

MatrixXd to_matrix(const json& j, const char* key) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument(std::string(key) + " must be a non-empty nested array");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) throw std::invalid_argument(std::string(key) + " must be a nested array");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  MatrixXd M(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw std::invalid_argument(std::string(key) + " has ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) M(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return M;
}

VectorXd to_vector(const json& j, const char* key) {
  if (!j.is_array()) throw std::invalid_argument(std::string(key) + " must be an array");
  VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    // accept [[1],[2]] column form as well
    const auto& e = j[i];
    v(static_cast<Eigen::Index>(i)) = e.is_array() && e.size() == 1 ? e[0].get<double>() : e.get<double>();
  }
  return v;
}

}  // namespace

LinearSignSystem parse_linear_system(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
  }
  if (!j.contains("B") || !j.contains("C")) throw std::invalid_argument("system file needs keys B and C");
  try {
    MatrixXd B = to_matrix(j["B"], "B");
    MatrixXd C = to_matrix(j["C"], "C");
    const auto n = B.rows(), m = C.rows();
    MatrixXd E = j.contains("E") ? to_matrix(j["E"], "E") : MatrixXd::Zero(n, n);
    VectorXd a = j.contains("a") ? to_vector(j["a"], "a") : VectorXd::Zero(n);
    VectorXd D = j.contains("D") ? to_vector(j["D"], "D") : VectorXd::Zero(m);
    return make_linear_system(std::move(E), std::move(a), std::move(B), std::move(C), std::move(D));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad system entry: ") + e.what());
  }
}

LinearSignSystem load_linear_system(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_linear_system(ss.str());
}

}  // namespace multisurf
