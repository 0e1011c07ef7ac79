#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rcnwave/io.hpp"
#include "rcnwave/quadratic_forms.hpp"
#include "rcnwave/radial_geometry.hpp"

namespace rcnwave {

enum class GridCoord { r, tau };
enum class BoundaryKind { dirichlet_zero, excised_cutoff };
// schrodinger: rho u_tt + (H u) rho = rho f, tau-speed q^{-1/2}.
// lorentzian: (rho/q) u_tt + (H u) rho = rho f, unit tau-speed.
enum class Dynamics { schrodinger, lorentzian };

Dynamics default_dynamics(const RadialPotential& p);
const char* dynamics_name(Dynamics d);
Dynamics dynamics_from_name(const std::string& s);

using SourceFn = std::function<double(double t, double x)>;

struct WaveScenario {
  RadialPotential potential;
  GridCoord coordinate = GridCoord::r;
  double lo = 0, hi = 1;
  int cells = 100;
  BoundaryKind inner = BoundaryKind::dirichlet_zero;
  double r_cut = 0;
  // tau grids: x = direction * (tau(r) - tau(anchor))
  std::optional<double> tau_anchor;
  int tau_direction = 0;  // 0 picks "toward the horizon"
  double t_end = 1, cfl = 0.5;
  std::optional<Dynamics> dynamics;
  std::optional<TestProfile> u0, v0;  // in the grid coordinate
  SourceFn source;                     // empty means 0
  int snapshot_every = 0;              // steps; 0 keeps only the first and last
};

struct WaveGrid {
  GridCoord coord = GridCoord::r;
  Dynamics dynamics = Dynamics::schrodinger;
  double h = 0;
  std::vector<double> x, r, q, tau;  // nodes
  std::vector<double> rho;           // dmu/dx at nodes
  std::vector<double> mass, pot;     // lumped kinetic mass and rho V, times h
  std::vector<double> a_half;        // rho |grad x|^2 at x_{i+1/2}
  double dtau_max = 0, dtau_min = 0;
  std::size_t size() const { return x.size(); }
};

// r_min when tau is finite there, else a point one unit (or mid-domain) away
// from the horizon.
double default_tau_anchor(const RadialPotential& p);

WaveGrid build_grid(const WaveScenario& s);
double cfl_dt(const WaveScenario& s, const WaveGrid& g);
double cfl_dt(const WaveScenario& s);

struct WaveState {
  double t = 0;
  std::vector<double> u, ut;
};

struct EnergyRecord {
  double t = 0, total = 0, kinetic = 0, gradient = 0, potential = 0;
};

struct Trajectory {
  WaveGrid grid;
  double dt = 0;
  long steps = 0;
  double peak0 = 0;                      // max |u0| (or max |u| if u0 = 0)
  double support_lo = 0, support_hi = 0;  // tau extent of the initial data
  bool has_support = false;
  std::vector<WaveState> snapshots;
  std::vector<EnergyRecord> energy;       // every step
  std::vector<double> source_integral;    // int_0^t int f^2 dmu, per energy record
};

Trajectory run_wave(const WaveScenario& s);

EnergyRecord energy_of(const WaveGrid& g, const WaveState& st);

struct ConeSpec {
  double anchor_tau = 0;  // tau (grid) position of the cone's apex point
  double tau0 = 1;
  double delta_hat = 0.5;
  double T_hat() const;
};

// Energy over {t + (1-delta_hat)^{1/2} |tau - anchor| < T_hat}; full slice without a cone.
EnergyRecord energy_slice(const WaveGrid& g, const WaveState& st,
                          const std::optional<ConeSpec>& cone = std::nullopt);

struct CheckReport {
  std::string check;
  bool pass = true;
  double worst_value = 0;
  double worst_location = 0;
  double worst_time = 0;
  std::vector<std::vector<double>> trace;
};

json to_json(const CheckReport& c);

// Exterior of the speed-`speed` cone around the data support, dilated by two cells.
CheckReport verify_cone(const Trajectory& tr, double tol, double speed = 1.0);

// Amplitude within two cells of either grid end, while the unit-speed front
// (dilated by two cells) has not reached it. The t = 0 snapshot is always checked.
CheckReport verify_silo(const Trajectory& tr, double tol);

struct DirichletResult {
  std::vector<double> x, r, u;
  double residual = 0;
  double form_value = 0;
};

// Static problem H u = f with zero boundary values on the scenario grid.
DirichletResult solve_dirichlet(const WaveScenario& s, const Fn& f);

void write_snapshot_csv(const WaveGrid& g, const WaveState& st, std::ostream& os);
void write_energy_csv(const Trajectory& tr, std::ostream& os);

// max_t |E(t) - E(0)| / E(0)
double energy_drift(const Trajectory& tr);
// smallest C with E(t) <= C (E(0) + int_0^t int f^2 dmu) along the run
double energy_constant(const Trajectory& tr);

// L2(dmu) norm of a state's u.
double l2_norm(const WaveGrid& g, const WaveState& st);

}  // namespace rcnwave
