#include "hcb/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hcb/errors.hpp"
#include "hcb/io.hpp"

namespace hcb {
namespace {

using nlohmann::json;

std::string scenario_key(Scenario scenario) {
  switch (scenario) {
    case Scenario::kSpectrumStats: return "spectrum_stats";
    case Scenario::kQuench: return "quench";
    case Scenario::kInitialStateSweep: return "initial_state_sweep";
    case Scenario::kLatticeSweep: return "lattice_sweep";
    case Scenario::kMixedTemperature: return "mixed_temperature";
    case Scenario::kEntanglement: return "entanglement";
  }
  return "quench";
}

Scenario scenario_from_key(const std::string& key) {
  for (Scenario s : {Scenario::kSpectrumStats, Scenario::kQuench, Scenario::kInitialStateSweep,
                     Scenario::kLatticeSweep, Scenario::kMixedTemperature,
                     Scenario::kEntanglement}) {
    if (scenario_key(s) == key) return s;
  }
  throw ConfigError("unknown scenario '" + key + "'");
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void write_summary(const std::filesystem::path& out_dir, const ScenarioConfig& config,
                   json results, double wall_seconds) {
  json doc;
  doc["schema_version"] = kOutputSchemaVersion;
  doc["scenario"] = scenario_key(config.scenario);
  doc["config"] = json::parse(config.config_echo);
  doc["results"] = std::move(results);
  doc["wall_seconds"] = wall_seconds;
  std::ofstream out(out_dir / "summary.json");
  if (!out) throw ConfigError("cannot write " + (out_dir / "summary.json").string());
  out << doc.dump(2) << "\n";
}

std::string time_label(double t) {
  std::string label = format_double(t);
  for (char& c : label) {
    if (c == '.') c = 'p';
    if (c == '-') c = 'm';
  }
  return label;
}

// Everything the dynamical scenarios share: the split Hamiltonian, the
// spectrum of the post-quench Hamiltonian, and the reduction bookkeeping.
struct Workspace {
  Lattice lattice;
  Bipartition bipartition;
  BasisSector sector;
  SplitHamiltonian parts;
  SparseOperator h_evolution;
  SpectralDecomposition eig;
  TraceMap trace_map;
  SparseOperator h_fock;
  double delta_e = 0.0;
};

Workspace make_workspace(const ScenarioConfig& config,
                         const std::filesystem::path& out_dir = {}) {
  auto [lattice, bipartition] = resolve_lattice(config);
  if (config.n_particles < 1 || config.n_particles > lattice.n_sites) {
    throw ConfigError("n_particles must be in [1, n_sites]");
  }
  BasisSector sector(lattice.n_sites, config.n_particles);
  SplitHamiltonian parts = split_hamiltonian(lattice, bipartition, sector, config.coupling_terms);
  SparseOperator h_evolution = parts.system;
  h_evolution += parts.bath;
  h_evolution += parts.interaction;
  SpectralDecomposition eig = diagonalize(h_evolution, config.dense_guard);
  TraceMap trace_map(sector, bipartition);
  SparseOperator h_fock =
      subsystem_hamiltonian(lattice, bipartition, SubsystemFockSpace(bipartition.system_sites));
  if (config.dump_operators && !out_dir.empty()) {
    dump_operator(h_evolution, out_dir / "h_evolution.txt");
    dump_operator(h_fock, out_dir / "h_subsystem.txt");
  }
  const double delta_e = config.delta_e > 0.0 ? config.delta_e : 0.1 * lattice.hopping_j;
  return Workspace{std::move(lattice),     std::move(bipartition), std::move(sector),
                   std::move(parts),       std::move(h_evolution), std::move(eig),
                   std::move(trace_map),   std::move(h_fock),      delta_e};
}

std::vector<double> time_grid(const ScenarioConfig& config) {
  std::vector<double> grid;
  const int steps = static_cast<int>(std::floor(config.t_max / config.dt + 1e-9));
  grid.reserve(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) grid.push_back(k * config.dt);
  return grid;
}

ReducedState as_reduced(DensityMatrix rho, const SubsystemFockSpace& fock) {
  ReducedState out;
  out.block_weights = block_weights_of(rho, fock);
  out.rho = std::move(rho);
  return out;
}

void write_profile(const std::filesystem::path& path, const ReducedState& reduced,
                   const SparseOperator& h_fock) {
  CsvWriter csv(path, {"energy", "weight"});
  for (const auto& [energy, weight] : energy_resolved_profile(reduced, h_fock)) {
    csv.write_row(std::vector<double>{energy, weight});
  }
}

json distances_json(const std::map<std::string, double>& distances) {
  json out;
  for (const auto& [key, value] : distances) out[key] = value;
  return out;
}

// Shared core of quench-style runs: evolve the pure state over the grid,
// write the trajectory, accumulate window averages.
struct QuenchCore {
  QuenchResult result;
  ReducedState reduced_final;
  ReducedState reduced_timeavg;  // over [t_relax, t_relax + max window]
};

QuenchCore run_quench_core(const ScenarioConfig& config, const Workspace& ws,
                           const EvolvingState& state, const std::filesystem::path& out_dir,
                           bool write_files) {
  QuenchCore core;
  QuenchResult& result = core.result;
  result.e0 = state.overlaps.energy;
  result.beta = solve_beta(ws.eig, result.e0, config.beta_tol * ws.lattice.hopping_j);

  const RealVector w_micro = microcanonical_weights(ws.eig, result.e0, ws.delta_e);
  result.micro_window_count = static_cast<int>(std::round(1.0 / w_micro.maxCoeff()));
  const RealVector w_cano = canonical_weights(ws.eig, result.beta);
  const RealVector w_gibbs = diagonal_ensemble_weights(state.overlaps);

  const ReducedState red_micro = reduce_eigen_mixture(ws.eig, w_micro, ws.trace_map);
  const ReducedState red_cano = reduce_eigen_mixture(ws.eig, w_cano, ws.trace_map);
  const ReducedState red_gibbs = reduce_eigen_mixture(ws.eig, w_gibbs, ws.trace_map);
  const ReducedState red_thermal =
      as_reduced(thermal_subsystem(ws.h_fock, result.beta), ws.trace_map.fock());

  const std::vector<std::pair<std::string, const ReducedState*>> ensembles = {
      {"gibbs", &red_gibbs}, {"micro", &red_micro}, {"cano", &red_cano}, {"thermal", &red_thermal}};
  for (std::size_t a = 0; a < ensembles.size(); ++a) {
    for (std::size_t b = a + 1; b < ensembles.size(); ++b) {
      result.ensemble_distances[ensembles[a].first + "|" + ensembles[b].first] =
          hs_distance_sq(ensembles[a].second->rho, ensembles[b].second->rho);
    }
  }

  const std::vector<double> grid = time_grid(config);
  std::vector<double> windows = config.timeavg_windows;
  std::sort(windows.begin(), windows.end());
  const double max_window = windows.empty() ? 0.0 : windows.back();
  if (config.t_relax + max_window > config.t_max + 1e-9) {
    throw ConfigError("t_relax plus the largest averaging window exceeds t_max");
  }

  std::vector<ComplexMatrix> window_sums(windows.size());
  std::vector<int> window_counts(windows.size(), 0);
  const int fock_dim = ws.trace_map.fock().dim();
  for (auto& sum : window_sums) sum = ComplexMatrix::Zero(fock_dim, fock_dim);

  double d_gibbs_sum_relaxed = 0.0;
  int relaxed_count = 0;

  std::optional<CsvWriter> trajectory;
  if (write_files) {
    trajectory.emplace(out_dir / "trajectory.csv",
                       std::vector<std::string>{"t", "d_thermal", "d_micro", "d_cano", "d_gibbs",
                                                "entropy", "energy"});
  }

  ReducedState reduced;
  for (double t : grid) {
    const ComplexVector psi_t = evolve_pure(state, t);
    reduced = partial_trace(psi_t, ws.trace_map);
    const double d_thermal = hs_distance_sq(reduced.rho, red_thermal.rho);
    const double d_micro = hs_distance_sq(reduced.rho, red_micro.rho);
    const double d_cano = hs_distance_sq(reduced.rho, red_cano.rho);
    const double d_gibbs = hs_distance_sq(reduced.rho, red_gibbs.rho);
    const double entropy = von_neumann_entropy(reduced.rho);
    const double energy = ws.h_evolution.expectation(psi_t);
    result.max_energy_drift = std::max(result.max_energy_drift, std::abs(energy - result.e0));
    result.max_norm_drift = std::max(result.max_norm_drift, std::abs(psi_t.norm() - 1.0));
    if (trajectory) {
      trajectory->write_row(std::vector<double>{t, d_thermal, d_micro, d_cano, d_gibbs, entropy,
                                                energy});
    }
    if (t == grid.front()) {
      result.d_gibbs_t0 = d_gibbs;
      result.entropy_t0 = entropy;
    }
    if (t >= config.t_relax - 1e-9) {
      d_gibbs_sum_relaxed += d_gibbs;
      ++relaxed_count;
      result.entropy_relaxed.push_back(entropy);
      for (std::size_t wdx = 0; wdx < windows.size(); ++wdx) {
        if (t <= config.t_relax + windows[wdx] + 1e-9) {
          window_sums[wdx] += reduced.rho.matrix;
          ++window_counts[wdx];
        }
      }
    }
  }
  result.d_gibbs_relaxed_mean = relaxed_count ? d_gibbs_sum_relaxed / relaxed_count : 0.0;
  core.reduced_final = reduced;

  for (std::size_t wdx = 0; wdx < windows.size(); ++wdx) {
    DensityMatrix avg;
    avg.matrix = window_sums[wdx] / static_cast<double>(window_counts[wdx]);
    avg.basis_tag = ws.trace_map.fock().tag();
    ReducedState avg_state = as_reduced(std::move(avg), ws.trace_map.fock());
    result.timeavg_window_lengths.push_back(windows[wdx]);
    result.timeavg_gibbs_distance.push_back(hs_distance_sq(avg_state.rho, red_gibbs.rho));
    if (wdx + 1 == windows.size()) core.reduced_timeavg = std::move(avg_state);
  }

  result.ensemble_distances["timeavg|gibbs"] =
      hs_distance_sq(core.reduced_timeavg.rho, red_gibbs.rho);
  result.ensemble_distances["timeavg|micro"] =
      hs_distance_sq(core.reduced_timeavg.rho, red_micro.rho);
  result.ensemble_distances["final|timeavg"] =
      hs_distance_sq(core.reduced_final.rho, core.reduced_timeavg.rho);
  result.ensemble_distances["final|gibbs"] =
      hs_distance_sq(core.reduced_final.rho, red_gibbs.rho);
  result.ensemble_distances["final|micro"] =
      hs_distance_sq(core.reduced_final.rho, red_micro.rho);

  if (write_files) {
    {
      CsvWriter csv(out_dir / "timeavg_convergence.csv", {"window_length", "d_gibbs"});
      for (std::size_t wdx = 0; wdx < windows.size(); ++wdx) {
        csv.write_row(std::vector<double>{result.timeavg_window_lengths[wdx],
                                          result.timeavg_gibbs_distance[wdx]});
      }
    }
    {
      // Full-sector ensemble weights against E_alpha, for log-scale scatters.
      CsvWriter csv(out_dir / "ensemble_weights.csv",
                    {"energy", "w_micro", "w_cano", "w_gibbs"});
      for (int a = 0; a < ws.eig.dim(); ++a) {
        csv.write_row(std::vector<double>{ws.eig.values(a), w_micro(a), w_cano(a), w_gibbs(a)});
      }
    }

    write_profile(out_dir / "profile_micro.csv", red_micro, ws.h_fock);
    write_profile(out_dir / "profile_cano.csv", red_cano, ws.h_fock);
    write_profile(out_dir / "profile_gibbs.csv", red_gibbs, ws.h_fock);
    write_profile(out_dir / "profile_thermal.csv", red_thermal, ws.h_fock);
    write_profile(out_dir / "profile_timeavg.csv", core.reduced_timeavg, ws.h_fock);
    write_profile(out_dir / "profile_final.csv", core.reduced_final, ws.h_fock);

    dump_matrix(red_micro.rho.matrix, out_dir / "rho_s_micro.txt");
    dump_matrix(red_cano.rho.matrix, out_dir / "rho_s_cano.txt");
    dump_matrix(red_gibbs.rho.matrix, out_dir / "rho_s_gibbs.txt");
    dump_matrix(red_thermal.rho.matrix, out_dir / "rho_s_thermal.txt");
    dump_matrix(core.reduced_timeavg.rho.matrix, out_dir / "rho_s_timeavg.txt");
    dump_matrix(core.reduced_final.rho.matrix, out_dir / "rho_s_final.txt");
  }
  return core;
}

}  // namespace

std::string to_string(Scenario scenario) { return scenario_key(scenario); }

ScenarioConfig load_scenario(const std::filesystem::path& config_path, Scenario expected) {
  std::ifstream in(config_path);
  if (!in) throw ConfigError("load_scenario: cannot open " + config_path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("load_scenario: " + config_path.string() + ": " + e.what());
  }

  ScenarioConfig config;
  try {
    config.scenario = scenario_from_key(doc.at("scenario").get<std::string>());
    if (config.scenario != expected) {
      throw ConfigError("scenario '" + scenario_key(config.scenario) +
                        "' does not match the requested command '" + scenario_key(expected) + "'");
    }
    const bool has_file = doc.contains("lattice");
    const bool has_catalog = doc.contains("catalog");
    if (has_file == has_catalog && config.scenario != Scenario::kLatticeSweep) {
      throw ConfigError("exactly one of 'lattice' or 'catalog' must name the geometry");
    }
    if (has_file) {
      config.lattice_file = config_path.parent_path() / doc.at("lattice").get<std::string>();
      if (!std::filesystem::exists(config.lattice_file)) {
        throw ConfigError("lattice file does not exist: " + config.lattice_file.string());
      }
    }
    if (has_catalog) config.catalog = doc.at("catalog").get<std::string>();
    if (config.scenario == Scenario::kLatticeSweep) {
      for (const auto& entry : doc.at("lattices")) {
        std::string name = entry.get<std::string>();
        // Entries with a dot are lattice files relative to the config.
        if (name.find('.') != std::string::npos) {
          const std::filesystem::path path = config_path.parent_path() / name;
          if (!std::filesystem::exists(path)) {
            throw ConfigError("lattice file does not exist: " + path.string());
          }
          name = path.string();
        }
        config.sweep_lattices.push_back(std::move(name));
      }
      if (config.sweep_lattices.empty()) throw ConfigError("lattice_sweep: empty lattice list");
    }

    config.n_particles = doc.at("n_particles").get<int>();
    config.dense_guard = doc.value("dense_guard", kDefaultDenseGuard);
    config.coupling_terms = coupling_terms_from_string(doc.value("coupling_terms", "both"));
    config.dump_operators = doc.value("dump_operators", false);
    config.poly_degree = doc.value("poly_degree", 7);
    config.edge_trim = doc.value("edge_trim", 0.02);
    config.n_bins = doc.value("n_bins", 40);
    config.delta_e = doc.value("delta_e", -1.0);
    config.beta_tol = doc.value("beta_tol", 1e-8);
    config.t_max = doc.value("t_max", 200.0);
    config.dt = doc.value("dt", 0.5);
    config.t_relax = doc.value("t_relax", 100.0);
    if (doc.contains("timeavg_windows")) {
      config.timeavg_windows = doc.at("timeavg_windows").get<std::vector<double>>();
    }
    if (doc.contains("splits")) {
      config.sweep_n_system = doc.at("splits").get<std::vector<int>>();
    }
    config.micro_pair_threshold = doc.value("micro_pair_threshold", 1e-2);
    config.beta_system = doc.value("beta_s", 1.0);
    config.beta_bath = doc.value("beta_b", 2.0);
    config.n_system = doc.value("n_s", -1);
    config.n_bath = doc.value("n_b", -1);
    if (doc.contains("snapshot_times_early")) {
      config.snapshot_times_early = doc.at("snapshot_times_early").get<std::vector<double>>();
    }
    if (doc.contains("snapshot_times_late")) {
      config.snapshot_times_late = doc.at("snapshot_times_late").get<std::vector<double>>();
    }
    if (doc.contains("pairs")) {
      for (const auto& pair : doc.at("pairs")) {
        if (!pair.is_array() || pair.size() != 2) throw ConfigError("pairs must be 2-arrays");
        config.pairs.emplace_back(pair[0].get<int>(), pair[1].get<int>());
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError("load_scenario: " + config_path.string() + ": " + e.what());
  }

  if (config.n_particles < 1) throw ConfigError("n_particles must be positive");
  if (!(config.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(config.t_max > 0.0)) throw ConfigError("t_max must be positive");
  if (config.t_relax < 0.0 || config.t_relax > config.t_max) {
    throw ConfigError("t_relax must lie in [0, t_max]");
  }
  if (config.delta_e == 0.0 || (config.delta_e < 0.0 && config.delta_e != -1.0)) {
    throw ConfigError("delta_e must be positive");
  }
  if (config.timeavg_windows.empty()) throw ConfigError("timeavg_windows must not be empty");
  for (double w : config.timeavg_windows) {
    if (!(w > 0.0)) throw ConfigError("timeavg_windows entries must be positive");
  }
  auto strictly_increasing = [](const std::vector<double>& ts) {
    for (std::size_t i = 1; i < ts.size(); ++i) {
      if (!(ts[i] > ts[i - 1])) return false;
    }
    return true;
  };
  if (!strictly_increasing(config.snapshot_times_early) ||
      !strictly_increasing(config.snapshot_times_late)) {
    throw ConfigError("snapshot time lists must be strictly increasing");
  }

  config.config_echo = doc.dump();
  return config;
}

std::pair<Lattice, Bipartition> resolve_lattice(const ScenarioConfig& config) {
  if (!config.catalog.empty()) return example_lattice(config.catalog);
  return load_lattice(config.lattice_file);
}

SpectrumStatsResult run_spectrum_stats(const ScenarioConfig& config,
                                       const std::filesystem::path& out_dir) {
  Stopwatch watch;
  std::filesystem::create_directories(out_dir);
  const Workspace ws = make_workspace(config, out_dir);
  const SpacingStatistics stats =
      unfold_and_spacings(ws.eig.values, config.poly_degree, config.edge_trim, config.n_bins);

  {
    CsvWriter csv(out_dir / "spacing_histogram.csv", {"bin_center", "density"});
    for (Eigen::Index b = 0; b < stats.densities.size(); ++b) {
      csv.write_row(std::vector<double>{0.5 * (stats.bin_edges(b) + stats.bin_edges(b + 1)),
                                        stats.densities(b)});
    }
  }
  {
    CsvWriter csv(out_dir / "eigenvalues.csv", {"index", "energy"});
    for (int a = 0; a < ws.eig.dim(); ++a) {
      csv.write_row(std::vector<double>{static_cast<double>(a), ws.eig.values(a)});
    }
  }

  SpectrumStatsResult result;
  result.ks_wigner = stats.ks_wigner;
  result.ks_poisson = stats.ks_poisson;
  result.chaotic = stats.ks_wigner < stats.ks_poisson;
  result.n_levels = ws.eig.dim();

  json results;
  results["ks_wigner"] = result.ks_wigner;
  results["ks_poisson"] = result.ks_poisson;
  results["chaotic"] = result.chaotic;
  results["n_levels"] = result.n_levels;
  results["levels_used"] = stats.levels_used;
  results["mean_spacing"] = stats.spacings.mean();
  write_summary(out_dir, config, std::move(results), watch.seconds());
  return result;
}

QuenchResult run_quench(const ScenarioConfig& config, const std::filesystem::path& out_dir) {
  Stopwatch watch;
  std::filesystem::create_directories(out_dir);
  const Workspace ws = make_workspace(config, out_dir);

  const ProductPureInitial initial =
      product_pure_initial(ws.lattice, ws.bipartition, ws.sector, config.n_particles, 0,
                           config.coupling_terms);
  const EvolvingState state = make_pure_state(initial.psi, ws.eig);
  QuenchCore core = run_quench_core(config, ws, state, out_dir, true);

  json results;
  results["e0"] = core.result.e0;
  results["beta"] = core.result.beta;
  results["delta_e"] = ws.delta_e;
  results["micro_window_count"] = core.result.micro_window_count;
  results["d_gibbs_t0"] = core.result.d_gibbs_t0;
  results["d_gibbs_relaxed_mean"] = core.result.d_gibbs_relaxed_mean;
  results["distances"] = distances_json(core.result.ensemble_distances);
  write_summary(out_dir, config, std::move(results), watch.seconds());
  return core.result;
}

InitialStateSweepResult run_initial_state_sweep(const ScenarioConfig& config,
                                                const std::filesystem::path& out_dir) {
  Stopwatch watch;
  std::filesystem::create_directories(out_dir);
  const Workspace ws = make_workspace(config, out_dir);
  const int n = config.n_particles;
  const int max_system = static_cast<int>(ws.bipartition.system_sites.size());
  const int max_bath = static_cast<int>(ws.bipartition.bath_sites.size());

  std::vector<int> splits = config.sweep_n_system;
  if (splits.empty()) {
    for (int k = n; k >= 0; --k) {
      if (k <= max_system && n - k <= max_bath) splits.push_back(k);
    }
  } else {
    for (int k : splits) {
      if (k < 0 || k > max_system || n - k < 0 || n - k > max_bath) {
        throw ConfigError("splits entry " + std::to_string(k) + " is not a valid n_S");
      }
    }
  }

  InitialStateSweepResult result;
  std::vector<ReducedState> micro_states;
  std::vector<double> energies;

  CsvWriter table(out_dir / "table.csv", {"n_s", "e0_s", "e0_b", "e0_s_plus_e0_b", "e_total"});
  CsvWriter distances(out_dir / "distances.csv",
                      {"n_s", "d_timeavg_gibbs", "d_timeavg_micro", "d_gibbs_micro"});

  for (int n_system : splits) {
    const ProductPureInitial initial = product_pure_initial(
        ws.lattice, ws.bipartition, ws.sector, n_system, n - n_system, config.coupling_terms);
    const EvolvingState state = make_pure_state(initial.psi, ws.eig);

    {
      CsvWriter overlaps(out_dir / ("overlaps_ns" + std::to_string(n_system) + ".csv"),
                         {"energy", "weight"});
      const RealVector w = diagonal_ensemble_weights(state.overlaps);
      for (int a = 0; a < ws.eig.dim(); ++a) {
        overlaps.write_row(std::vector<double>{ws.eig.values(a), w(a)});
      }
    }

    QuenchCore core = run_quench_core(config, ws, state, out_dir, false);

    InitialStateSweepRow row;
    row.n_system = n_system;
    row.energy_system = initial.energy_system;
    row.energy_bath = initial.energy_bath;
    row.energy_sum = initial.energy_system + initial.energy_bath;
    row.energy_total = initial.energy_total;
    row.d_timeavg_gibbs = core.result.ensemble_distances.at("timeavg|gibbs");
    row.d_timeavg_micro = core.result.ensemble_distances.at("timeavg|micro");
    row.d_gibbs_micro = core.result.ensemble_distances.at("gibbs|micro");
    result.rows.push_back(row);

    table.write_row(std::vector<double>{static_cast<double>(n_system), row.energy_system,
                                        row.energy_bath, row.energy_sum, row.energy_total});
    distances.write_row(std::vector<double>{static_cast<double>(n_system), row.d_timeavg_gibbs,
                                            row.d_timeavg_micro, row.d_gibbs_micro});

    micro_states.push_back(
        reduce_eigen_mixture(ws.eig, microcanonical_weights(ws.eig, core.result.e0, ws.delta_e),
                             ws.trace_map));
    energies.push_back(core.result.e0);
  }

  {
    // Splits that land inside one energy window must see the same
    // microcanonical state, up to the configured threshold.
    CsvWriter csv(out_dir / "micro_pairwise.csv",
                  {"n_s_a", "n_s_b", "abs_de", "hs_distance_sq", "same_window"});
    for (std::size_t a = 0; a < splits.size(); ++a) {
      for (std::size_t b = a + 1; b < splits.size(); ++b) {
        const double de = std::abs(energies[a] - energies[b]);
        const double d = hs_distance_sq(micro_states[a].rho, micro_states[b].rho);
        const bool same_window = de < ws.delta_e;
        if (same_window && d > config.micro_pair_threshold) {
          result.micro_pairs_consistent = false;
        }
        result.micro_pairs.emplace_back(splits[a], splits[b], de, d);
        csv.write_row(std::vector<double>{static_cast<double>(splits[a]),
                                          static_cast<double>(splits[b]), de, d,
                                          same_window ? 1.0 : 0.0});
      }
    }
  }

  json results;
  json rows = json::array();
  for (const auto& row : result.rows) {
    rows.push_back({{"n_s", row.n_system},
                    {"e0_s", row.energy_system},
                    {"e0_b", row.energy_bath},
                    {"e_total", row.energy_total},
                    {"d_timeavg_gibbs", row.d_timeavg_gibbs},
                    {"d_timeavg_micro", row.d_timeavg_micro},
                    {"d_gibbs_micro", row.d_gibbs_micro}});
  }
  results["rows"] = std::move(rows);
  results["micro_pairs_consistent"] = result.micro_pairs_consistent;
  write_summary(out_dir, config, std::move(results), watch.seconds());
  return result;
}

LatticeSweepResult run_lattice_sweep(const ScenarioConfig& config,
                                     const std::filesystem::path& out_dir) {
  Stopwatch watch;
  std::filesystem::create_directories(out_dir);
  LatticeSweepResult result;

  CsvWriter csv(out_dir / "lattice_sweep.csv",
                {"lattice", "n_sites", "e0", "beta", "d_gibbs_micro", "d_gibbs_relaxed_mean"});

  for (const std::string& name : config.sweep_lattices) {
    ScenarioConfig sub = config;
    sub.scenario = Scenario::kQuench;
    sub.sweep_lattices.clear();
    std::string label;
    if (name.find('.') == std::string::npos) {
      sub.catalog = name;
      sub.lattice_file.clear();
      label = name;
    } else {
      sub.catalog.clear();
      sub.lattice_file = name;
      label = std::filesystem::path(name).stem().string();
    }
    const QuenchResult quench = run_quench(sub, out_dir / label);
    auto [lattice, bipartition] = resolve_lattice(sub);
    csv.write_row(std::vector<std::string>{
        label, std::to_string(lattice.n_sites), format_double(quench.e0),
        format_double(quench.beta), format_double(quench.ensemble_distances.at("gibbs|micro")),
        format_double(quench.d_gibbs_relaxed_mean)});
    result.lattices.push_back(label);
    result.quenches.push_back(quench);
  }

  json results;
  results["lattices"] = result.lattices;
  write_summary(out_dir, config, std::move(results), watch.seconds());
  return result;
}

MixedTemperatureResult run_mixed_temperature(const ScenarioConfig& config,
                                             const std::filesystem::path& out_dir) {
  Stopwatch watch;
  std::filesystem::create_directories(out_dir);
  const Workspace ws = make_workspace(config, out_dir);

  const int n = config.n_particles;
  int n_system = config.n_system;
  int n_bath = config.n_bath;
  if (n_system < 0 && n_bath < 0) {
    n_system = n / 2;
    n_bath = n - n_system;
  } else if (n_system >= 0 && n_bath < 0) {
    n_bath = n - n_system;
  } else if (n_system < 0) {
    n_system = n - n_bath;
  }
  if (n_system + n_bath != n) throw ConfigError("n_s + n_b must equal n_particles");

  const EvolvingState state =
      product_thermal_initial(ws.lattice, ws.bipartition, ws.sector, ws.eig, n_system, n_bath,
                              config.beta_system, config.beta_bath);

  MixedTemperatureResult result;
  result.energy_total = energy_of(state);

  std::vector<double> all_times = config.snapshot_times_early;
  all_times.insert(all_times.end(), config.snapshot_times_late.begin(),
                   config.snapshot_times_late.end());

  std::vector<ReducedState> early;
  std::vector<ReducedState> late;
  ReducedState last;
  {
    CsvWriter energy_csv(out_dir / "energy_trace.csv", {"t", "energy"});
    for (double t : all_times) {
      ReducedState reduced = reduced_at(state, t, ws.trace_map);
      const double energy = energy_at(state, t, ws.h_evolution);
      energy_csv.write_row(std::vector<double>{t, energy});
      result.max_energy_drift =
          std::max(result.max_energy_drift, std::abs(energy - result.energy_total));
      dump_matrix(reduced.rho.matrix, out_dir / ("rho_s_t" + time_label(t) + ".txt"));
      write_profile(out_dir / ("profile_t" + time_label(t) + ".csv"), reduced, ws.h_fock);
      const bool is_early =
          std::find(config.snapshot_times_early.begin(), config.snapshot_times_early.end(), t) !=
          config.snapshot_times_early.end();
      if (is_early) {
        early.push_back(reduced);
      } else {
        late.push_back(reduced);
      }
      last = std::move(reduced);
    }
  }

  auto max_pairwise = [](const std::vector<ReducedState>& states) {
    double metric = 0.0;
    for (std::size_t a = 0; a < states.size(); ++a) {
      for (std::size_t b = a + 1; b < states.size(); ++b) {
        metric = std::max(metric, hs_distance_sq(states[a].rho, states[b].rho));
      }
    }
    return metric;
  };
  result.early_change_metric = max_pairwise(early);
  result.late_change_metric = max_pairwise(late);

  result.beta_average =
      solve_beta(ws.eig, result.energy_total, config.beta_tol * ws.lattice.hopping_j);
  const DensityMatrix omega_avg = thermal_subsystem(ws.h_fock, result.beta_average);
  result.d_final_thermal = hs_distance_sq(last.rho, omega_avg);
  dump_matrix(omega_avg.matrix, out_dir / "rho_s_thermal_avg.txt");
  write_profile(out_dir / "profile_thermal_avg.csv", as_reduced(omega_avg, ws.trace_map.fock()),
                ws.h_fock);

  json results;
  results["beta_s"] = config.beta_system;
  results["beta_b"] = config.beta_bath;
  results["n_s"] = n_system;
  results["n_b"] = n_bath;
  results["energy_total"] = result.energy_total;
  results["max_energy_drift"] = result.max_energy_drift;
  results["early_change_metric"] = result.early_change_metric;
  results["late_change_metric"] = result.late_change_metric;
  results["beta_average"] = result.beta_average;
  results["d_final_thermal"] = result.d_final_thermal;
  write_summary(out_dir, config, std::move(results), watch.seconds());
  return result;
}

EntanglementResult run_entanglement(const ScenarioConfig& config,
                                    const std::filesystem::path& out_dir) {
  Stopwatch watch;
  std::filesystem::create_directories(out_dir);
  const Workspace ws = make_workspace(config, out_dir);

  std::vector<std::pair<int, int>> pairs = config.pairs;
  if (pairs.empty()) {
    // First system-internal edge, the first coupling edge, first bath edge.
    const auto system_edges = internal_edges(ws.lattice, ws.bipartition.system_sites);
    const auto bath_edges = internal_edges(ws.lattice, ws.bipartition.bath_sites);
    if (!system_edges.empty()) pairs.push_back(system_edges.front());
    if (!ws.bipartition.coupling_edges.empty()) pairs.push_back(ws.bipartition.coupling_edges.front());
    if (!bath_edges.empty()) pairs.push_back(bath_edges.front());
  }
  for (const auto& [i, j] : pairs) {
    if (i == j || i < 0 || j < 0 || i >= ws.lattice.n_sites || j >= ws.lattice.n_sites) {
      throw ConfigError("entanglement: invalid site pair (" + std::to_string(i) + "," +
                        std::to_string(j) + ")");
    }
  }

  const ProductPureInitial initial =
      product_pure_initial(ws.lattice, ws.bipartition, ws.sector, config.n_particles, 0,
                           config.coupling_terms);
  const EvolvingState state = make_pure_state(initial.psi, ws.eig);

  EntanglementResult result;
  result.pairs = pairs;
  result.concurrence_t0.assign(pairs.size(), 0.0);
  result.concurrence_max.assign(pairs.size(), 0.0);
  result.concurrence_late_max.assign(pairs.size(), 0.0);

  std::vector<std::string> header = {"t"};
  for (const auto& [i, j] : pairs) {
    header.push_back("c_" + std::to_string(i) + "_" + std::to_string(j));
  }
  header.push_back("entropy");

  double entropy_late_sum = 0.0;
  double entropy_late_sq = 0.0;
  int late_count = 0;

  CsvWriter csv(out_dir / "entanglement.csv", header);
  const std::vector<double> grid = time_grid(config);
  for (double t : grid) {
    const ComplexVector psi_t = evolve_pure(state, t);
    std::vector<double> row = {t};
    const bool late = t >= config.t_relax - 1e-9;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const DensityMatrix rho2 = two_site_rdm(psi_t, ws.sector, pairs[p].first, pairs[p].second);
      const double c = concurrence(rho2);
      row.push_back(c);
      if (t == grid.front()) result.concurrence_t0[p] = c;
      result.concurrence_max[p] = std::max(result.concurrence_max[p], c);
      if (late) result.concurrence_late_max[p] = std::max(result.concurrence_late_max[p], c);
    }
    const ReducedState reduced = partial_trace(psi_t, ws.trace_map);
    const double entropy = von_neumann_entropy(reduced.rho);
    row.push_back(entropy);
    csv.write_row(row);
    if (t == grid.front()) result.entropy_t0 = entropy;
    if (late) {
      entropy_late_sum += entropy;
      entropy_late_sq += entropy * entropy;
      ++late_count;
    }
  }
  if (late_count > 0) {
    result.entropy_late_mean = entropy_late_sum / late_count;
    const double variance =
        std::max(0.0, entropy_late_sq / late_count -
                          result.entropy_late_mean * result.entropy_late_mean);
    result.entropy_late_fluctuation =
        result.entropy_late_mean > 0.0 ? std::sqrt(variance) / result.entropy_late_mean : 0.0;
  }

  json results;
  json pair_list = json::array();
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    pair_list.push_back({{"pair", {pairs[p].first, pairs[p].second}},
                         {"c_t0", result.concurrence_t0[p]},
                         {"c_max", result.concurrence_max[p]},
                         {"c_late_max", result.concurrence_late_max[p]}});
  }
  results["pairs"] = std::move(pair_list);
  results["entropy_t0"] = result.entropy_t0;
  results["entropy_late_mean"] = result.entropy_late_mean;
  results["entropy_late_fluctuation"] = result.entropy_late_fluctuation;
  write_summary(out_dir, config, std::move(results), watch.seconds());
  return result;
}

}  // namespace hcb
