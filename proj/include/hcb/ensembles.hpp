#pragma once

#include <string>

#include "hcb/spectral.hpp"
#include "hcb/types.hpp"

namespace hcb {

// Unit-trace Hermitian PSD operator on a declared basis.
struct DensityMatrix {
  ComplexMatrix matrix;
  std::string basis_tag;

  int dim() const { return static_cast<int>(matrix.rows()); }
  double trace_real() const { return matrix.trace().real(); }
  double purity() const { return matrix.squaredNorm(); }

  // Max violation of trace/Hermiticity/PSD; throws past `tol`.
  void validate(double tol = 1e-10) const;
};

// Overlaps C_alpha = <Psi_alpha|psi(0)> of a state with an eigenbasis.
struct OverlapVector {
  ComplexVector coefficients;
  double energy = 0.0;  // sum |C|^2 E
};

OverlapVector expand_initial(const ComplexVector& psi0, const SpectralDecomposition& eig);

// Eigenbasis weights of the diagonal-in-eigenbasis ensembles. Dense density
// matrices are V diag(w) V^T; reduced states can be formed from the weights
// directly (reduce_eigen_mixture in reduction.hpp) without the dim^2 object.
RealVector microcanonical_weights(const SpectralDecomposition& eig, double e0, double delta_e);
RealVector canonical_weights(const SpectralDecomposition& eig, double beta);
RealVector diagonal_ensemble_weights(const OverlapVector& overlaps);

DensityMatrix density_from_weights(const SpectralDecomposition& eig, const RealVector& weights,
                                   int dense_guard = kDefaultDenseGuard);

// Uniform mixture of the eigenstates with |e0 - E_alpha| < delta_e.
DensityMatrix microcanonical(const SpectralDecomposition& eig, double e0, double delta_e,
                             int dense_guard = kDefaultDenseGuard);

// Gibbs mixture exp(-beta E_alpha)/Z over the eigenstates.
DensityMatrix canonical(const SpectralDecomposition& eig, double beta,
                        int dense_guard = kDefaultDenseGuard);

// Mixture with the initial state's overlap magnitudes |C_alpha|^2; equals the
// infinite-time average for nondegenerate spectra.
DensityMatrix diagonal_ensemble(const SpectralDecomposition& eig, const OverlapVector& overlaps,
                                int dense_guard = kDefaultDenseGuard);

// Canonical energy <H>_beta, computed with max-shifted exponentials.
double canonical_energy(const SpectralDecomposition& eig, double beta);

struct SolveBetaOptions {
  double beta_cap_scale = 50.0;  // bisection bracket: +-cap_scale/spread
  int max_iterations = 400;
};

// Inverse temperature with tr(rho_cano H) = e_target, by bisection on the
// strictly decreasing map beta -> <H>_beta.
double solve_beta(const SpectralDecomposition& eig, double e_target, double tol,
                  const SolveBetaOptions& options = {});

// exp(-beta H_S)/Z over the full subsystem Fock space, assembled per
// particle-number block. No chemical potential: the literal form, so the
// sector-weight mismatch against reduced ensembles is kept, not corrected.
// `mu` shifts block energies by -mu*n_S when explicitly requested.
DensityMatrix thermal_subsystem(const SparseOperator& h_subsystem, double beta, double mu = 0.0);

}  // namespace hcb
