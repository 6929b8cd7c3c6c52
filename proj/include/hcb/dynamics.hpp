#pragma once

#include <optional>

#include "hcb/ensembles.hpp"
#include "hcb/reduction.hpp"
#include "hcb/spectral.hpp"
#include "hcb/types.hpp"

namespace hcb {

// State evolving under a fixed spectral decomposition; times in units 1/J
// with hbar = 1. The referenced decomposition must outlive the state. Mixed
// states carry the eigenbasis matrix rho_eig = V^T rho(0) V and, when built
// from a product of thermal factors, also the low-rank form
// rho(0) = sum_k w_k |phi_k><phi_k| with mix_coefficients(:,k) = V^T phi_k.
struct EvolvingState {
  enum class Kind { kPure, kMixed };

  Kind kind = Kind::kPure;
  const SpectralDecomposition* eig = nullptr;

  OverlapVector overlaps;  // pure

  ComplexMatrix rho_eig;          // mixed
  RealVector mix_weights;         // mixed, optional low-rank factors
  RealMatrix mix_coefficients;    // dim x n_factors
  bool has_low_rank = false;
};

EvolvingState make_pure_state(const ComplexVector& psi0, const SpectralDecomposition& eig);
EvolvingState make_mixed_state(const ComplexMatrix& rho0_site, const SpectralDecomposition& eig);

// sum_alpha C_alpha e^{-i E_alpha t} |Psi_alpha>, in the site basis.
ComplexVector evolve_pure(const EvolvingState& state, double t);

// rho(t) = V (rho_eig .* e^{-i(E_a-E_b)t}) V^T, in the site basis.
DensityMatrix evolve_mixed(const EvolvingState& state, double t);

double energy_of(const EvolvingState& state);

// <H>(t) evaluated in the site basis (an honest conservation probe, unlike
// energy_of which is constant by construction in the eigenbasis).
double energy_at(const EvolvingState& state, double t, const SparseOperator& h);

// tr_B of the instantaneous state, without forming the site-basis matrix.
ReducedState reduced_at(const EvolvingState& state, double t, const TraceMap& map);

// Ground state of H^(S) in the (|S|, n_system) sector tensored with the
// ground state of H^(B) in the (|B|, n_bath) sector, embedded in the full
// fixed-N sector.
struct ProductPureInitial {
  ComplexVector psi;
  double energy_system = 0.0;     // E0 of the S factor
  double energy_bath = 0.0;       // E0 of the B factor
  double energy_total = 0.0;      // <psi|H|psi> with the full Hamiltonian
  double energy_interaction = 0.0;  // <psi|H^(I)|psi>
  bool degenerate_system_gs = false;
  bool degenerate_bath_gs = false;
};

ProductPureInitial product_pure_initial(const Lattice& lattice, const Bipartition& bipartition,
                                        const BasisSector& sector, int n_system, int n_bath,
                                        CouplingTerms coupling = CouplingTerms::kBoth);

// [e^{-beta_S H_S}/Z_S] (x) [e^{-beta_B H_B}/Z_B], each factor inside its
// fixed-particle-number sector, embedded in the full sector and expressed in
// the eigenbasis of `eig`.
EvolvingState product_thermal_initial(const Lattice& lattice, const Bipartition& bipartition,
                                      const BasisSector& sector, const SpectralDecomposition& eig,
                                      int n_system, int n_bath, double beta_system,
                                      double beta_bath);

// Uniform-grid Riemann average of tr_B rho(t) over [t0, t1], endpoints
// included, n_samples >= 2.
ReducedState time_average_reduced(const EvolvingState& state, const TraceMap& map, double t0,
                                  double t1, int n_samples);

}  // namespace hcb
