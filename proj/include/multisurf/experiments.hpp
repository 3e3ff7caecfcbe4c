#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "multisurf/integrators.hpp"

namespace multisurf {

// Per-run parameter overrides from the command line. Unset fields keep the
// experiment defaults; a set field replaces the value in every variant.
struct Overrides {
  std::optional<double> h;
  std::optional<double> T;
  std::optional<double> theta;
  std::optional<double> gamma;
  std::optional<std::string> scheme;  // implicit | explicit (zoh-* experiments: the hold mode)
  std::optional<std::vector<double>> x0;
  std::optional<SolverKind> solver;
  // convergence sweep
  std::optional<double> h_min;
  std::optional<double> h_max;
  std::optional<int> points;
};

struct Property {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Variant {
  std::string label;
  Trajectory traj;
  std::vector<Property> properties;
};

struct ExperimentResult {
  std::string name;
  std::vector<Variant> variants;
  std::vector<Property> properties;  // experiment-wide checks
  std::vector<std::pair<std::string, std::string>> extra_files;  // file name, contents

  bool passed() const;
};

struct ExperimentInfo {
  std::string name;
  std::string description;
  std::string defaults;
};

const std::vector<ExperimentInfo>& list_experiments();

bool has_experiment(const std::string& name);

/// Throws std::invalid_argument for an unknown name or inconsistent overrides.
ExperimentResult run_experiment(const std::string& name, const Overrides& ov = {});

/// traj.csv for a single variant, traj_<label>.csv for each of several, plus extra files.
void write_result(const ExperimentResult& result, const std::filesystem::path& dir);

/// Human-readable verdict lines, one per property.
std::string summarize(const ExperimentResult& result);

SolverKind parse_solver(const std::string& s);
std::vector<double> parse_vector(const std::string& s);

}  // namespace multisurf
