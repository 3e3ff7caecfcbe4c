// multisurf: run the registered sliding-mode experiments and write CSV output.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "multisurf/analysis.hpp"
#include "multisurf/experiments.hpp"
#include "multisurf/io.hpp"

namespace fs = std::filesystem;
using namespace multisurf;

namespace {

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y%m%d-%H%M%S");
  return os.str();
}

fs::path output_dir(const std::string& out, const std::string& name) {
  return out.empty() ? fs::path("out") / name / timestamp() : fs::path(out);
}

int report(const ExperimentResult& r, const fs::path& dir) {
  write_result(r, dir);
  std::cout << summarize(r);
  std::cout << (r.passed() ? "all properties passed" : "property failure") << "; output in " << dir.string()
            << '\n';
  return r.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Implicit time-stepping of sliding-mode systems"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");

  // run
  auto* run = app.add_subcommand("run", "run a registered experiment");
  run->set_help_flag("--help", "print help");
  std::string name, out, scheme, x0, solver;
  double h = 0, T = 0, theta = 0, gamma = 0;
  run->add_option("name", name, "experiment name (see list)")->required();
  auto* o_h = run->add_option("--h", h, "step size")->check(CLI::PositiveNumber);
  auto* o_T = run->add_option("--T", T, "final time")->check(CLI::NonNegativeNumber);
  auto* o_theta = run->add_option("--theta", theta, "drift implicitness")->check(CLI::Range(0.0, 1.0));
  auto* o_gamma = run->add_option("--gamma", gamma, "gain implicitness")->check(CLI::Range(0.0, 1.0));
  run->add_option("--scheme", scheme, "implicit | explicit")->check(CLI::IsMember({"implicit", "explicit"}));
  run->add_option("--x0", x0, "initial state v1,v2,...");
  run->add_option("--out", out, "output directory (default out/<name>/<timestamp>)");
  run->add_option("--solver", solver, "MLCP solver")->check(CLI::IsMember({"enumerative", "psor", "pivot"}));

  // list
  auto* list = app.add_subcommand("list", "list registered experiments");
  list->set_help_flag("--help", "print help");
  bool as_json = false;
  list->add_flag("--json", as_json, "machine-readable output");

  // convergence
  auto* conv = app.add_subcommand("convergence", "order study on the simple system");
  conv->set_help_flag("--help", "print help");
  double h_min = 1e-3, h_max = 1e-1;
  int points = 8;
  std::string conv_out;
  conv->add_option("--h-min", h_min, "smallest step")->check(CLI::PositiveNumber);
  conv->add_option("--h-max", h_max, "largest step")->check(CLI::PositiveNumber);
  conv->add_option("--points", points, "number of step sizes")->check(CLI::Range(3, 1000));
  conv->add_option("--out", conv_out, "output directory");

  // sim
  auto* sim = app.add_subcommand("sim", "simulate a linear sign system read from JSON");
  sim->set_help_flag("--help", "print help");
  std::string sys_file, sim_x0, sim_scheme = "implicit", sim_out;
  double sim_h = 0.01, sim_T = 1.0, sim_theta = 1.0;
  sim->add_option("--system", sys_file, "JSON file with E, a, B, C, D")->required()->check(CLI::ExistingFile);
  sim->add_option("--x0", sim_x0, "initial state v1,v2,...")->required();
  sim->add_option("--h", sim_h, "step size")->check(CLI::PositiveNumber);
  sim->add_option("--T", sim_T, "final time")->check(CLI::NonNegativeNumber);
  sim->add_option("--theta", sim_theta, "drift implicitness")->check(CLI::Range(0.0, 1.0));
  sim->add_option("--scheme", sim_scheme, "implicit | explicit")->check(CLI::IsMember({"implicit", "explicit"}));
  sim->add_option("--out", sim_out, "CSV file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      const auto& infos = list_experiments();
      if (as_json) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& i : infos) j.push_back({{"name", i.name}, {"description", i.description}, {"defaults", i.defaults}});
        std::cout << j.dump(2) << '\n';
      } else {
        for (const auto& i : infos) std::cout << std::left << std::setw(14) << i.name << i.description << "\n"
                                              << std::setw(14) << "" << "defaults: " << i.defaults << '\n';
      }
      return 0;
    }
    if (*run) {
      if (!has_experiment(name)) {
        std::cerr << "unknown experiment '" << name << "'; try `multisurf list`\n";
        return 2;
      }
      Overrides ov;
      if (*o_h) ov.h = h;
      if (*o_T) ov.T = T;
      if (*o_theta) ov.theta = theta;
      if (*o_gamma) ov.gamma = gamma;
      if (!scheme.empty()) ov.scheme = scheme;
      if (!x0.empty()) ov.x0 = parse_vector(x0);
      if (!solver.empty()) ov.solver = parse_solver(solver);
      return report(run_experiment(name, ov), output_dir(out, name));
    }
    if (*conv) {
      Overrides ov;
      ov.h_min = h_min;
      ov.h_max = h_max;
      ov.points = points;
      return report(run_experiment("convergence", ov), output_dir(conv_out, "convergence"));
    }
    if (*sim) {
      const auto sys = load_linear_system(sys_file);
      const auto v = parse_vector(sim_x0);
      SchemeConfig cfg;
      cfg.h = sim_h;
      cfg.theta = sim_theta;
      const auto cb = check_cb_positive(sys);
      if (!cb.is_positive_definite) std::cerr << "warning: symmetric part of CB is not positive definite\n";
      const Trajectory traj =
          simulate(sys, Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())), 0.0, sim_T, cfg,
                   sim_scheme == "explicit" ? Scheme::explicit_euler : Scheme::implicit);
      if (sim_out.empty()) write_trajectory_csv(std::cout, traj);
      else write_trajectory_csv(sim_out, traj);
      if (traj.failure) {
        std::cerr << "simulation stopped: " << *traj.failure << '\n';
        return 1;
      }
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
