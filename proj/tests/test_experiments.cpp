#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hcb/errors.hpp"
#include "hcb/experiments.hpp"

using namespace hcb;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "hcb_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const std::string& name, const std::string& contents) {
  const fs::path dir = fs::temp_directory_path() / "hcb_tests";
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream out(path);
  out << contents;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

nlohmann::json summary_without_timing(const fs::path& dir) {
  auto doc = nlohmann::json::parse(slurp(dir / "summary.json"));
  doc.erase("wall_seconds");
  return doc;
}

// Small, fast quench setup on the 6-site ladder.
const char* kQuenchConfig = R"({
  "scenario": "quench",
  "catalog": "ladder_3",
  "n_particles": 2,
  "t_max": 30.0,
  "dt": 0.5,
  "t_relax": 10.0,
  "timeavg_windows": [5.0, 10.0, 20.0],
  "delta_e": 0.6
})";

}  // namespace

TEST_CASE("scenario loading validates the schema") {
  const fs::path config = write_config("bad_scenario.json", R"({
    "scenario": "quench", "catalog": "ladder_3", "n_particles": 2, "dt": -0.5
  })");
  CHECK_THROWS_AS(load_scenario(config, Scenario::kQuench), ConfigError);

  const fs::path mismatch = write_config("mismatch.json", kQuenchConfig);
  CHECK_THROWS_AS(load_scenario(mismatch, Scenario::kSpectrumStats), ConfigError);

  const fs::path both = write_config("both_geometries.json", R"({
    "scenario": "quench", "catalog": "ladder_3", "lattice": "x.json", "n_particles": 2
  })");
  CHECK_THROWS_AS(load_scenario(both, Scenario::kQuench), ConfigError);

  const fs::path missing = write_config("missing_lattice.json", R"({
    "scenario": "quench", "lattice": "no_such_file.json", "n_particles": 2
  })");
  CHECK_THROWS_AS(load_scenario(missing, Scenario::kQuench), ConfigError);
}

TEST_CASE("dump_operators writes the triplet files") {
  const fs::path config_path = write_config("dump_ops.json", R"({
    "scenario": "quench",
    "catalog": "ladder_3",
    "n_particles": 2,
    "t_max": 2.0,
    "dt": 1.0,
    "t_relax": 0.0,
    "timeavg_windows": [2.0],
    "delta_e": 0.6,
    "dump_operators": true
  })");
  const ScenarioConfig config = load_scenario(config_path, Scenario::kQuench);
  const fs::path out = scratch_dir("dump_ops");
  run_quench(config, out);
  CHECK(fs::exists(out / "h_evolution.txt"));
  CHECK(fs::exists(out / "h_subsystem.txt"));
}

TEST_CASE("spectrum scenario writes histogram, eigenvalues, and verdict") {
  const fs::path config_path = write_config("spectrum.json", R"({
    "scenario": "spectrum_stats",
    "catalog": "ladder_4",
    "n_particles": 4
  })");
  const ScenarioConfig config = load_scenario(config_path, Scenario::kSpectrumStats);
  const fs::path out = scratch_dir("spectrum");

  // dim C(8,4) = 70 is under the 100-level floor for the unfolding.
  CHECK_THROWS_AS(run_spectrum_stats(config, out), ValidationError);

  const fs::path bigger = write_config("spectrum12.json", R"({
    "scenario": "spectrum_stats",
    "catalog": "chain_12",
    "n_particles": 4
  })");
  const ScenarioConfig config12 = load_scenario(bigger, Scenario::kSpectrumStats);
  const SpectrumStatsResult result = run_spectrum_stats(config12, out);
  CHECK(fs::exists(out / "spacing_histogram.csv"));
  CHECK(fs::exists(out / "eigenvalues.csv"));
  CHECK(fs::exists(out / "summary.json"));
  CHECK(result.n_levels == 495);
  CHECK(result.ks_wigner >= 0.0);
  CHECK(result.ks_wigner <= 1.0);
  CHECK(result.ks_poisson >= 0.0);
  CHECK(result.ks_poisson <= 1.0);

  const auto doc = nlohmann::json::parse(slurp(out / "summary.json"));
  CHECK(doc.at("schema_version").get<int>() == kOutputSchemaVersion);
  CHECK(doc.at("results").contains("chaotic"));
  CHECK(doc.at("results").at("ks_wigner").get<double>() == result.ks_wigner);
}

TEST_CASE("quench scenario: t=0 purity, relaxation, files, and determinism") {
  const fs::path config_path = write_config("quench.json", kQuenchConfig);
  const ScenarioConfig config = load_scenario(config_path, Scenario::kQuench);

  const fs::path out_a = scratch_dir("quench_a");
  const QuenchResult result = run_quench(config, out_a);

  // Initially pure reduced state: zero entropy and all bosons in S.
  CHECK(result.entropy_t0 == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(result.d_gibbs_t0 > 0.0);
  CHECK(result.micro_window_count >= 1);

  for (const char* name :
       {"trajectory.csv", "timeavg_convergence.csv", "summary.json", "profile_micro.csv",
        "profile_cano.csv", "profile_gibbs.csv", "profile_thermal.csv", "profile_timeavg.csv",
        "profile_final.csv", "rho_s_micro.txt", "rho_s_final.txt"}) {
    CAPTURE(name);
    CHECK(fs::exists(out_a / name));
  }

  // The 4-ensemble pairwise block plus the chain comparisons are all present.
  for (const char* key : {"gibbs|micro", "gibbs|cano", "gibbs|thermal", "micro|cano",
                          "micro|thermal", "cano|thermal", "final|timeavg", "timeavg|gibbs"}) {
    CAPTURE(key);
    CHECK(result.ensemble_distances.count(key) == 1);
  }

  // Re-running the same config reproduces every output byte-for-byte except
  // the wall clock in the summary.
  const fs::path out_b = scratch_dir("quench_b");
  run_quench(config, out_b);
  for (const auto& entry : fs::directory_iterator(out_a)) {
    const auto name = entry.path().filename();
    CAPTURE(name.string());
    if (name == "summary.json") {
      CHECK(summary_without_timing(out_a) == summary_without_timing(out_b));
    } else {
      REQUIRE(slurp(entry.path()) == slurp(out_b / name));
    }
  }
}

TEST_CASE("initial-state sweep reproduces the table format and weak coupling") {
  const fs::path config_path = write_config("sweep.json", R"({
    "scenario": "initial_state_sweep",
    "catalog": "ladder_3",
    "n_particles": 2,
    "t_max": 20.0,
    "dt": 0.5,
    "t_relax": 8.0,
    "timeavg_windows": [12.0],
    "delta_e": 0.6
  })");
  const ScenarioConfig config = load_scenario(config_path, Scenario::kInitialStateSweep);
  const fs::path out = scratch_dir("sweep");
  const InitialStateSweepResult result = run_initial_state_sweep(config, out);

  REQUIRE(result.rows.size() == 3);  // n_S = 2, 1, 0
  CHECK(result.rows[0].n_system == 2);
  CHECK(result.rows[2].n_system == 0);
  for (const auto& row : result.rows) {
    CHECK(row.energy_total == doctest::Approx(row.energy_sum).epsilon(0.2));
    CHECK(fs::exists(out / ("overlaps_ns" + std::to_string(row.n_system) + ".csv")));
  }
  // All bosons in B: the bath factor carries the full energy.
  CHECK(result.rows[2].energy_system == doctest::Approx(0.0));

  CHECK(fs::exists(out / "table.csv"));
  CHECK(fs::exists(out / "micro_pairwise.csv"));
  const std::string header = slurp(out / "table.csv").substr(0, 36);
  CHECK(header == "n_s,e0_s,e0_b,e0_s_plus_e0_b,e_total");
  CHECK(result.micro_pairs.size() == 3);
}

TEST_CASE("splits with equal energy share the microcanonical ensemble") {
  // chain_8 cut in half is mirror symmetric, so the all-in-S and all-in-B
  // splits have exactly equal energies and land in the same window.
  const fs::path config_path = write_config("sweep_sym.json", R"({
    "scenario": "initial_state_sweep",
    "catalog": "chain_8",
    "n_particles": 2,
    "t_max": 20.0,
    "dt": 0.5,
    "t_relax": 8.0,
    "timeavg_windows": [12.0],
    "delta_e": 0.4,
    "splits": [2, 0]
  })");
  const ScenarioConfig config = load_scenario(config_path, Scenario::kInitialStateSweep);
  const InitialStateSweepResult result =
      run_initial_state_sweep(config, scratch_dir("sweep_sym"));
  REQUIRE(result.micro_pairs.size() == 1);
  const auto& [a, b, de, d] = result.micro_pairs[0];
  CHECK(de < 1e-10);
  CHECK(d < 1e-12);
  CHECK(result.micro_pairs_consistent);
}

TEST_CASE("lattice sweep writes one quench per entry") {
  const fs::path config_path = write_config("lattice_sweep.json", R"({
    "scenario": "lattice_sweep",
    "lattices": ["ladder_3", "chain_6"],
    "n_particles": 2,
    "t_max": 20.0,
    "dt": 0.5,
    "t_relax": 8.0,
    "timeavg_windows": [10.0],
    "delta_e": 0.6
  })");
  const ScenarioConfig config = load_scenario(config_path, Scenario::kLatticeSweep);
  const fs::path out = scratch_dir("lattice_sweep");
  const LatticeSweepResult result = run_lattice_sweep(config, out);
  REQUIRE(result.lattices.size() == 2);
  CHECK(fs::exists(out / "lattice_sweep.csv"));
  CHECK(fs::exists(out / "ladder_3" / "trajectory.csv"));
  CHECK(fs::exists(out / "chain_6" / "trajectory.csv"));
}

TEST_CASE("mixed-temperature scenario conserves energy and relaxes") {
  const fs::path config_path = write_config("mixed.json", R"({
    "scenario": "mixed_temperature",
    "catalog": "ladder_3",
    "n_particles": 3,
    "n_s": 1,
    "n_b": 2,
    "beta_s": 1.0,
    "beta_b": 2.0,
    "snapshot_times_early": [0.0, 1.0, 2.0, 3.0],
    "snapshot_times_late": [17.0, 18.0, 19.0, 20.0]
  })");
  const ScenarioConfig config = load_scenario(config_path, Scenario::kMixedTemperature);
  const fs::path out = scratch_dir("mixed");
  const MixedTemperatureResult result = run_mixed_temperature(config, out);

  CHECK(result.max_energy_drift <= 1e-10 * std::max(1.0, std::abs(result.energy_total)));
  CHECK(result.early_change_metric > 0.0);
  CHECK(std::isfinite(result.beta_average));
  CHECK(fs::exists(out / "rho_s_t0.txt"));
  CHECK(fs::exists(out / "rho_s_t20.txt"));
  CHECK(fs::exists(out / "energy_trace.csv"));
  CHECK(fs::exists(out / "profile_thermal_avg.csv"));
}

TEST_CASE("entanglement scenario: zero initial entropy, vacuum bath pairs") {
  const fs::path config_path = write_config("entanglement.json", R"({
    "scenario": "entanglement",
    "catalog": "ladder_3",
    "n_particles": 2,
    "t_max": 30.0,
    "dt": 0.5,
    "t_relax": 10.0,
    "pairs": [[0, 1], [2, 4], [4, 5]]
  })");
  const ScenarioConfig config = load_scenario(config_path, Scenario::kEntanglement);
  const fs::path out = scratch_dir("entanglement");
  const EntanglementResult result = run_entanglement(config, out);

  CHECK(result.entropy_t0 == doctest::Approx(0.0).epsilon(1e-9));
  REQUIRE(result.pairs.size() == 3);
  // Pair (4,5) lies inside the empty bath at t = 0.
  CHECK(result.concurrence_t0[2] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(fs::exists(out / "entanglement.csv"));

  const std::string header = slurp(out / "entanglement.csv");
  CHECK(header.substr(0, 28) == "t,c_0_1,c_2_4,c_4_5,entropy\n");

  const fs::path bad = write_config("entanglement_bad.json", R"({
    "scenario": "entanglement",
    "catalog": "ladder_3",
    "n_particles": 2,
    "pairs": [[0, 0]]
  })");
  const ScenarioConfig bad_config = load_scenario(bad, Scenario::kEntanglement);
  CHECK_THROWS_AS(run_entanglement(bad_config, scratch_dir("entanglement_bad")), ConfigError);
}
