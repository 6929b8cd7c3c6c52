#include "hcb/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "hcb/errors.hpp"

namespace hcb {
namespace {

// Weights exp(arg_alpha - max arg)/Z; safe against overflow for any shift.
RealVector normalized_exponentials(const RealVector& args) {
  const double shift = args.maxCoeff();
  RealVector w = (args.array() - shift).exp();
  w /= w.sum();
  return w;
}

}  // namespace

void DensityMatrix::validate(double tol) const {
  if (matrix.rows() != matrix.cols()) throw ValidationError("DensityMatrix: not square");
  const double trace_err = std::abs(matrix.trace() - Complex{1.0, 0.0});
  if (trace_err > tol) {
    throw ValidationError("DensityMatrix: trace off by " + std::to_string(trace_err));
  }
  const double herm_err = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > tol) {
    throw ValidationError("DensityMatrix: asymmetry " + std::to_string(herm_err));
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -tol) {
    throw ValidationError("DensityMatrix: negative eigenvalue " + std::to_string(min_eig));
  }
}

OverlapVector expand_initial(const ComplexVector& psi0, const SpectralDecomposition& eig) {
  if (psi0.size() != eig.dim()) throw ValidationError("expand_initial: dimension mismatch");
  const double norm_err = std::abs(psi0.norm() - 1.0);
  if (norm_err > 1e-8) {
    throw ValidationError("expand_initial: |psi0| deviates from 1 by " + std::to_string(norm_err));
  }
  OverlapVector out;
  out.coefficients = real_complex_product(eig.vectors.transpose(), psi0);
  out.energy = out.coefficients.cwiseAbs2().dot(eig.values);
  return out;
}

RealVector microcanonical_weights(const SpectralDecomposition& eig, double e0, double delta_e) {
  if (!(delta_e > 0.0)) throw ValidationError("microcanonical: deltaE must be positive");
  RealVector w = RealVector::Zero(eig.dim());
  int count = 0;
  for (int a = 0; a < eig.dim(); ++a) {
    if (std::abs(e0 - eig.values(a)) < delta_e) {
      w(a) = 1.0;
      ++count;
    }
  }
  if (count == 0) {
    double best = eig.values(0);
    for (int a = 1; a < eig.dim(); ++a) {
      if (std::abs(e0 - eig.values(a)) < std::abs(e0 - best)) best = eig.values(a);
    }
    std::ostringstream msg;
    msg << "microcanonical: empty window around E0=" << e0 << " with deltaE=" << delta_e
        << "; nearest level is " << best << ", deltaE > " << std::abs(e0 - best)
        << " would include it";
    throw ValidationError(msg.str());
  }
  w /= static_cast<double>(count);
  return w;
}

RealVector canonical_weights(const SpectralDecomposition& eig, double beta) {
  if (!std::isfinite(beta)) throw ValidationError("canonical: beta must be finite");
  return normalized_exponentials(-beta * eig.values);
}

RealVector diagonal_ensemble_weights(const OverlapVector& overlaps) {
  RealVector w = overlaps.coefficients.cwiseAbs2();
  const double total = w.sum();
  if (std::abs(total - 1.0) > 1e-10) {
    throw ValidationError("diagonal_ensemble: overlaps are not normalized");
  }
  return w / total;
}

DensityMatrix density_from_weights(const SpectralDecomposition& eig, const RealVector& weights,
                                   int dense_guard) {
  if (weights.size() != eig.dim()) throw ValidationError("density_from_weights: size mismatch");
  if (eig.dim() > dense_guard) {
    throw GuardError("density_from_weights: dimension " + std::to_string(eig.dim()) +
                     " exceeds the dense guard " + std::to_string(dense_guard));
  }
  DensityMatrix out;
  RealMatrix dense = eig.vectors * weights.asDiagonal() * eig.vectors.transpose();
  out.matrix = dense.cast<Complex>();
  out.basis_tag = eig.basis_tag;
  return out;
}

DensityMatrix microcanonical(const SpectralDecomposition& eig, double e0, double delta_e,
                             int dense_guard) {
  return density_from_weights(eig, microcanonical_weights(eig, e0, delta_e), dense_guard);
}

DensityMatrix canonical(const SpectralDecomposition& eig, double beta, int dense_guard) {
  return density_from_weights(eig, canonical_weights(eig, beta), dense_guard);
}

DensityMatrix diagonal_ensemble(const SpectralDecomposition& eig, const OverlapVector& overlaps,
                                int dense_guard) {
  return density_from_weights(eig, diagonal_ensemble_weights(overlaps), dense_guard);
}

double canonical_energy(const SpectralDecomposition& eig, double beta) {
  return canonical_weights(eig, beta).dot(eig.values);
}

double solve_beta(const SpectralDecomposition& eig, double e_target, double tol,
                  const SolveBetaOptions& options) {
  if (!(tol > 0.0)) throw ValidationError("solve_beta: tolerance must be positive");
  const double e_min = eig.values(0);
  const double e_max = eig.values(eig.dim() - 1);
  if (e_target <= e_min || e_target >= e_max) {
    throw ValidationError("solve_beta: target energy " + std::to_string(e_target) +
                          " outside the reachable range (" + std::to_string(e_min) + ", " +
                          std::to_string(e_max) + ")");
  }
  const double spread = eig.spread();
  if (!(spread > 0.0)) throw ValidationError("solve_beta: degenerate spectrum");
  const double cap = options.beta_cap_scale / spread;

  // <H>_beta decreases strictly in beta, so plain bisection is safe.
  double lo = -cap;  // <H> high end
  double hi = cap;   // <H> low end
  if (e_target <= canonical_energy(eig, hi) || e_target >= canonical_energy(eig, lo)) {
    throw ValidationError("solve_beta: target unreachable within the beta cap " +
                          std::to_string(cap));
  }
  double beta = 0.0;
  for (int it = 0; it < options.max_iterations; ++it) {
    beta = 0.5 * (lo + hi);
    const double energy = canonical_energy(eig, beta);
    if (std::abs(energy - e_target) < tol) return beta;
    if (energy > e_target) {
      lo = beta;
    } else {
      hi = beta;
    }
  }
  throw NumericalError("solve_beta: tolerance " + std::to_string(tol) + " not reached in " +
                       std::to_string(options.max_iterations) + " bisection steps");
}

DensityMatrix thermal_subsystem(const SparseOperator& h_subsystem, double beta, double mu) {
  const int dim = h_subsystem.dim;
  // The subsystem Fock dimension is a power of two with block sizes C(n, k).
  int n_sites = 0;
  while ((1 << n_sites) < dim) ++n_sites;
  if ((1 << n_sites) != dim) {
    throw ValidationError("thermal_subsystem: operator is not on a full Fock space");
  }

  const RealMatrix dense = h_subsystem.to_dense();
  struct Block {
    int offset;
    int size;
    RealVector values;
    RealMatrix vectors;
    int n_particles;
  };
  std::vector<Block> blocks;
  int offset = 0;
  for (int k = 0; k <= n_sites; ++k) {
    const int size = static_cast<int>(binomial(n_sites, k));
    Block block{offset, size, {}, {}, k};
    const RealMatrix sub = dense.block(offset, offset, size, size);
    // Particle number is conserved, so anything off the blocks is a caller error.
    if (offset > 0 && dense.block(offset, 0, size, offset).cwiseAbs().maxCoeff() > 0.0) {
      throw ValidationError("thermal_subsystem: operator mixes particle-number blocks");
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(sub);
    block.values = solver.eigenvalues();
    block.vectors = solver.eigenvectors();
    blocks.push_back(std::move(block));
    offset += size;
  }

  RealVector args(dim);
  int at = 0;
  for (const Block& block : blocks) {
    for (int i = 0; i < block.size; ++i) {
      args(at++) = -beta * block.values(i) + beta * mu * block.n_particles;
    }
  }
  const RealVector weights = normalized_exponentials(args);

  RealMatrix rho = RealMatrix::Zero(dim, dim);
  at = 0;
  for (const Block& block : blocks) {
    const RealVector w = weights.segment(at, block.size);
    rho.block(block.offset, block.offset, block.size, block.size) =
        block.vectors * w.asDiagonal() * block.vectors.transpose();
    at += block.size;
  }

  DensityMatrix out;
  out.matrix = rho.cast<Complex>();
  out.basis_tag = h_subsystem.basis_tag;
  return out;
}

}  // namespace hcb
