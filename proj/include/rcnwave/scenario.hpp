#pragma once

#include <string>
#include <vector>

#include "rcnwave/io.hpp"
#include "rcnwave/radial_geometry.hpp"
#include "rcnwave/wave_sim.hpp"

namespace rcnwave {

inline constexpr const char* kSchemaVersion = "rcnwave/1";

struct CheckDecl {
  std::string type;  // cone | silo | energy
  json params = json::object();
};

struct Scenario {
  WaveScenario wave;
  bool has_grid = false;
  std::vector<CheckDecl> checks;
  std::string out_dir = ".";
};

// Strict parsers; errors are Schema and name the offending key path.
RadialPotential parse_potential(const json& j);
TestProfile parse_profile(const json& j, const std::string& path);
Scenario parse_scenario(const json& j);
Scenario load_scenario(const std::string& file);

// outputs.dir unless RCNWAVE_OUT is set
std::string output_dir(const Scenario& s);

struct SimulationOutcome {
  Trajectory trajectory;
  std::vector<CheckReport> checks;
  bool all_pass = true;
};

SimulationOutcome simulate(const Scenario& s);
// snapshot_NNNN.csv, energy.csv and checks.json under dir
void write_outcome(const SimulationOutcome& o, const std::string& dir);

}  // namespace rcnwave
