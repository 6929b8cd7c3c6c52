#pragma once

// Independent reference implementations used only by the test suites. None of
// them share index machinery or algorithms with the library: states are found
// by search, traces by literal loops, evolution by matrix exponentials, and
// eigenvalues by Sturm bisection.

#include <cstdint>
#include <random>
#include <vector>

#include "hcb/lattice.hpp"
#include "hcb/types.hpp"

namespace oracle {

// All masks with the given popcount, ascending.
std::vector<std::uint64_t> enumerate_states(int n_sites, int n_particles);

// Term-by-term application of the hopping+interaction Hamiltonian on the
// enumerated states, with map-based index lookup.
hcb::RealMatrix brute_force_hamiltonian(const hcb::Lattice& lattice, int n_particles,
                                        const std::vector<hcb::Edge>* edge_subset = nullptr);

// Literal triple loop over (s, s', b), matching the block-by-particle-number
// kept-space ordering.
hcb::ComplexMatrix brute_force_partial_trace(const hcb::ComplexVector& psi, int n_sites,
                                             int n_particles,
                                             const std::vector<int>& kept_sites);

// Scaling-and-squaring Taylor matrix exponential.
hcb::ComplexMatrix expm(const hcb::ComplexMatrix& a);

// Eigenvalues of a real symmetric matrix by Householder tridiagonalization
// plus Sturm-sequence bisection.
hcb::RealVector sturm_eigenvalues(const hcb::RealMatrix& sym, double tol = 1e-12);

// Composite Simpson on [a, b].
double simpson(double (*f)(double), double a, double b, int intervals = 200000);

hcb::ComplexVector random_state(int dim, std::mt19937& rng);
hcb::ComplexMatrix random_density(int dim, std::mt19937& rng);
hcb::ComplexMatrix random_unitary(int dim, std::mt19937& rng);
hcb::RealMatrix random_symmetric(int dim, std::mt19937& rng);

}  // namespace oracle
