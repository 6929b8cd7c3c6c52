#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hcb/dynamics.hpp"
#include "hcb/ensembles.hpp"
#include "hcb/hamiltonian.hpp"
#include "hcb/lattice.hpp"
#include "hcb/reduction.hpp"
#include "hcb/spectral.hpp"

namespace hcb {

inline constexpr int kOutputSchemaVersion = 1;

enum class Scenario {
  kSpectrumStats,
  kQuench,
  kInitialStateSweep,
  kLatticeSweep,
  kMixedTemperature,
  kEntanglement,
};

std::string to_string(Scenario scenario);

// Parsed and validated scenario file. Every run is a deterministic function
// of this struct: the pipeline has no RNG.
struct ScenarioConfig {
  Scenario scenario = Scenario::kQuench;

  // Exactly one of lattice_file / catalog names the geometry.
  std::filesystem::path lattice_file;
  std::string catalog;
  std::vector<std::string> sweep_lattices;  // lattice_sweep only

  int n_particles = 0;
  int dense_guard = kDefaultDenseGuard;
  CouplingTerms coupling_terms = CouplingTerms::kBoth;
  bool dump_operators = false;  // write (row, col, value) triplets of H and H_S

  // Spectrum statistics.
  int poly_degree = 7;
  double edge_trim = 0.02;
  int n_bins = 40;

  // Quench grids and ensemble parameters (times in 1/J).
  double delta_e = -1.0;  // <0 means 0.1*J
  double beta_tol = 1e-8;
  double t_max = 200.0;
  double dt = 0.5;
  double t_relax = 100.0;
  std::vector<double> timeavg_windows = {25.0, 50.0, 100.0};

  // Initial-state sweep.
  std::vector<int> sweep_n_system;          // defaults to N..0
  double micro_pair_threshold = 1e-2;       // splits closer than delta_e in energy
                                            // must agree to this HS^2 distance

  // Mixed-temperature quench.
  double beta_system = 1.0;
  double beta_bath = 2.0;
  int n_system = -1;
  int n_bath = -1;
  std::vector<double> snapshot_times_early = {0.0, 1.0, 2.0, 3.0};
  std::vector<double> snapshot_times_late = {7.0, 8.0, 9.0, 10.0};

  // Entanglement tracking.
  std::vector<std::pair<int, int>> pairs;

  std::string config_echo;  // original JSON, re-emitted into summaries
};

ScenarioConfig load_scenario(const std::filesystem::path& config_path, Scenario expected);

std::pair<Lattice, Bipartition> resolve_lattice(const ScenarioConfig& config);

struct SpectrumStatsResult {
  double ks_wigner = 0.0;
  double ks_poisson = 0.0;
  bool chaotic = false;
  int n_levels = 0;
};

SpectrumStatsResult run_spectrum_stats(const ScenarioConfig& config,
                                       const std::filesystem::path& out_dir);

struct QuenchResult {
  double e0 = 0.0;
  double beta = 0.0;
  int micro_window_count = 0;
  double max_energy_drift = 0.0;  // max |<H>(t) - E0| over the grid
  double max_norm_drift = 0.0;    // max ||psi(t)| - 1| over the grid

  // Pairwise reduced-ensemble distances, keys like "gibbs|micro".
  std::map<std::string, double> ensemble_distances;

  double d_gibbs_t0 = 0.0;          // ||rho_S(0) - rho_S_gibbs||^2
  double d_gibbs_relaxed_mean = 0.0;  // mean over the relaxed window
  std::vector<double> timeavg_window_lengths;
  std::vector<double> timeavg_gibbs_distance;  // ||avg_[t_relax, +w] - gibbs||^2

  double entropy_t0 = 0.0;
  std::vector<double> entropy_relaxed;  // per relaxed-window sample
};

QuenchResult run_quench(const ScenarioConfig& config, const std::filesystem::path& out_dir);

struct InitialStateSweepRow {
  int n_system = 0;
  double energy_system = 0.0;
  double energy_bath = 0.0;
  double energy_sum = 0.0;
  double energy_total = 0.0;
  double d_timeavg_gibbs = 0.0;
  double d_timeavg_micro = 0.0;
  double d_gibbs_micro = 0.0;
};

struct InitialStateSweepResult {
  std::vector<InitialStateSweepRow> rows;
  // (n_S a, n_S b, |E_a - E_b|, ||micro_a - micro_b||^2) for all pairs.
  std::vector<std::tuple<int, int, double, double>> micro_pairs;
  // False when some pair with |E_a - E_b| < delta_e exceeds the threshold.
  bool micro_pairs_consistent = true;
};

InitialStateSweepResult run_initial_state_sweep(const ScenarioConfig& config,
                                                const std::filesystem::path& out_dir);

struct LatticeSweepResult {
  std::vector<std::string> lattices;
  std::vector<QuenchResult> quenches;
};

LatticeSweepResult run_lattice_sweep(const ScenarioConfig& config,
                                     const std::filesystem::path& out_dir);

struct MixedTemperatureResult {
  double energy_total = 0.0;
  double max_energy_drift = 0.0;     // over all snapshots, |E(t) - E(0)|
  double early_change_metric = 0.0;  // max pairwise ||rho_S(t)-rho_S(t')||^2, early times
  double late_change_metric = 0.0;   // same over late times
  double beta_average = 0.0;         // solve_beta against the conserved energy
  double d_final_thermal = 0.0;      // ||rho_S(t_last) - Omega_S(beta_avg)||^2
};

MixedTemperatureResult run_mixed_temperature(const ScenarioConfig& config,
                                             const std::filesystem::path& out_dir);

struct EntanglementResult {
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> concurrence_t0;
  std::vector<double> concurrence_max;       // over the whole grid
  std::vector<double> concurrence_late_max;  // over the relaxed window
  double entropy_t0 = 0.0;
  double entropy_late_mean = 0.0;
  double entropy_late_fluctuation = 0.0;  // relative fluctuation sigma/mean over the window
};

EntanglementResult run_entanglement(const ScenarioConfig& config,
                                    const std::filesystem::path& out_dir);

}  // namespace hcb
