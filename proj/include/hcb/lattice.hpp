#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "hcb/types.hpp"

namespace hcb {

// Unordered site pair, stored as (min, max).
using Edge = std::pair<int, int>;

// Geometry and model constants of the hopping Hamiltonian. J is the energy
// unit of everything downstream; U defaults to 0.1*J.
struct Lattice {
  int n_sites = 0;
  std::vector<Edge> edges;
  double hopping_j = 1.0;
  double interaction_u = 0.1;

  void validate() const;  // throws ValidationError on any broken invariant
};

// Split of the sites into system `S` and bath `B`. coupling_edges is always
// derived as the subset of lattice edges crossing the cut.
struct Bipartition {
  std::vector<int> system_sites;  // ascending
  std::vector<int> bath_sites;    // ascending complement
  std::vector<Edge> coupling_edges;
};

Bipartition make_bipartition(const Lattice& lattice, std::vector<int> system_sites);

// Edges internal to the given part (no endpoint outside `sites`).
std::vector<Edge> internal_edges(const Lattice& lattice, const std::vector<int>& sites);

// Restriction of the lattice to `sites`, reindexed 0..|sites|-1 in the given
// order. Only edges with both endpoints inside survive.
Lattice sublattice(const Lattice& lattice, const std::vector<int>& sites);

// JSON configuration file with keys n_sites, edges, J, U, system_sites.
std::pair<Lattice, Bipartition> load_lattice(const std::filesystem::path& config_path);
void save_lattice(const Lattice& lattice, const Bipartition& bipartition,
                  const std::filesystem::path& config_path);

// Built-in catalog: chain_<n>, ladder_<rungs>, irregular16, irregular21,
// irregular25. The irregular graphs are symmetry-free planar graphs with a
// single S-B coupling edge.
std::pair<Lattice, Bipartition> example_lattice(const std::string& name);

// True when removing the coupling edges leaves no path from S to B.
bool cut_disconnects(const Lattice& lattice, const Bipartition& bipartition);

}  // namespace hcb
