#pragma once

#include <vector>

#include "hcb/ensembles.hpp"
#include "hcb/hamiltonian.hpp"
#include "hcb/hilbert.hpp"
#include "hcb/types.hpp"

namespace hcb {

// Precomputed index bookkeeping for tracing a sector state down to a site
// subset: sector states sharing a traced-sites configuration form one group,
// and within a group only the kept-sites configuration varies.
class TraceMap {
 public:
  struct Group {
    std::vector<int> fock_index;    // kept-space index per member
    std::vector<int> sector_index;  // full-sector index per member
  };

  TraceMap(const BasisSector& sector, const std::vector<int>& kept_sites);
  TraceMap(const BasisSector& sector, const Bipartition& bipartition)
      : TraceMap(sector, bipartition.system_sites) {}

  const std::vector<Group>& groups() const { return groups_; }
  const SubsystemFockSpace& fock() const { return fock_; }
  const std::string& sector_tag() const { return sector_tag_; }
  int sector_dim() const { return sector_dim_; }

 private:
  std::vector<Group> groups_;
  SubsystemFockSpace fock_;
  std::string sector_tag_;
  int sector_dim_ = 0;
};

// Reduced density matrix on the subsystem Fock space plus the probability
// carried by each particle-number block.
struct ReducedState {
  DensityMatrix rho;
  RealVector block_weights;
};

ReducedState partial_trace(const ComplexVector& psi, const TraceMap& map);
ReducedState partial_trace(const DensityMatrix& rho, const TraceMap& map);

// tr_B of sum_alpha w_alpha |Psi_alpha><Psi_alpha| without forming the dense
// sector-dimension matrix.
ReducedState reduce_eigen_mixture(const SpectralDecomposition& eig, const RealVector& weights,
                                  const TraceMap& map);

RealVector block_weights_of(const DensityMatrix& rho, const SubsystemFockSpace& fock);

// Hilbert-Schmidt distance squared tr[(a-b)^dag (a-b)].
double hs_distance_sq(const DensityMatrix& a, const DensityMatrix& b);

// Half the singular-value sum of a-b.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// -sum lambda ln lambda over eigenvalues above 1e-14, in nats.
double von_neumann_entropy(const DensityMatrix& rho, double psd_tol = 1e-8);

// Two-site reduced state in the qubit basis |n_i n_j> = |00>,|01>,|10>,|11>.
DensityMatrix two_site_rdm(const ComplexVector& psi, const BasisSector& sector, int site_i,
                           int site_j);

// Wootters concurrence of a two-qubit density matrix.
double concurrence(const DensityMatrix& rho2);

// (energy, weight) pairs: eigenvalues of rho against the subsystem-energy
// expectation of the matching eigenvectors, sorted by energy. Degenerate
// eigenvalue clusters are rotated to diagonalize H_S inside the cluster.
std::vector<std::pair<double, double>> energy_resolved_profile(const ReducedState& reduced,
                                                               const SparseOperator& h_fock,
                                                               double weight_floor = 1e-12);

}  // namespace hcb
