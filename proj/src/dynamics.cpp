#include "hcb/dynamics.hpp"

#include <bit>
#include <cmath>
#include <iostream>

#include <Eigen/Dense>

#include "hcb/errors.hpp"

namespace hcb {
namespace {

ComplexVector phases(const RealVector& energies, double t) {
  ComplexVector out(energies.size());
  for (Eigen::Index a = 0; a < energies.size(); ++a) {
    out(a) = std::polar(1.0, -energies(a) * t);
  }
  return out;
}

struct SectorGroundState {
  RealVector vector;
  double energy = 0.0;
  bool degenerate = false;
};

// Ground state of the part's internal Hamiltonian in its (n_part_sites, n)
// sector. Degeneracy resolves to the eigensolver's first column.
SectorGroundState part_ground_state(const Lattice& lattice, const std::vector<int>& part_sites,
                                    int n_particles, const std::string& label) {
  const Lattice sub = sublattice(lattice, part_sites);
  const BasisSector sector(sub.n_sites, n_particles);
  const SparseOperator h = build_hamiltonian(sub, sector);
  const SpectralDecomposition eig = diagonalize(h);
  SectorGroundState out;
  out.vector = eig.vectors.col(0);
  out.energy = eig.values(0);
  if (eig.dim() > 1 && eig.values(1) - eig.values(0) < 1e-10 * std::max(1.0, std::abs(eig.values(0)))) {
    out.degenerate = true;
    std::cerr << "warning: degenerate " << label
              << " ground state; taking the lowest-index eigenvector\n";
  }
  return out;
}

// Gibbs mixture of the part's sector eigenstates: (weights, eigenvectors).
std::pair<RealVector, RealMatrix> part_thermal_factor(const Lattice& lattice,
                                                      const std::vector<int>& part_sites,
                                                      int n_particles, double beta) {
  const Lattice sub = sublattice(lattice, part_sites);
  const BasisSector sector(sub.n_sites, n_particles);
  if (sector.dim() == 0) throw ValidationError("product_thermal_initial: empty sector");
  const SparseOperator h = build_hamiltonian(sub, sector);
  const SpectralDecomposition eig = diagonalize(h);
  RealVector args = -beta * eig.values;
  args.array() -= args.maxCoeff();
  RealVector weights = args.array().exp();
  weights /= weights.sum();
  return {weights, eig.vectors};
}

// Sector indices of every product configuration (n_system in S, n_bath in B),
// with the local sector ranks they combine.
struct ProductEmbedding {
  std::vector<int> full_index;
  std::vector<int> system_rank;
  std::vector<int> bath_rank;
  BasisSector system_sector;
  BasisSector bath_sector;
};

ProductEmbedding product_embedding(const Bipartition& bipartition, const BasisSector& sector,
                                   int n_system, int n_bath) {
  if (n_system + n_bath != sector.n_particles()) {
    throw ValidationError("product embedding: n_S + n_B must equal the sector particle number");
  }
  if (n_system < 0 || n_system > static_cast<int>(bipartition.system_sites.size()) ||
      n_bath < 0 || n_bath > static_cast<int>(bipartition.bath_sites.size())) {
    throw ValidationError("product embedding: empty subsystem sector");
  }
  ProductEmbedding out{
      {}, {}, {},
      BasisSector(static_cast<int>(bipartition.system_sites.size()), n_system),
      BasisSector(static_cast<int>(bipartition.bath_sites.size()), n_bath)};
  for (int i = 0; i < sector.dim(); ++i) {
    const SplitMasks masks = split_state(sector.state(i), bipartition);
    if (std::popcount(masks.system) != n_system) continue;
    out.full_index.push_back(i);
    out.system_rank.push_back(out.system_sector.rank(masks.system));
    out.bath_rank.push_back(out.bath_sector.rank(masks.bath));
  }
  return out;
}

}  // namespace

EvolvingState make_pure_state(const ComplexVector& psi0, const SpectralDecomposition& eig) {
  EvolvingState state;
  state.kind = EvolvingState::Kind::kPure;
  state.eig = &eig;
  state.overlaps = expand_initial(psi0, eig);
  return state;
}

EvolvingState make_mixed_state(const ComplexMatrix& rho0_site, const SpectralDecomposition& eig) {
  if (rho0_site.rows() != eig.dim() || rho0_site.cols() != eig.dim()) {
    throw ValidationError("make_mixed_state: dimension mismatch");
  }
  if (std::abs(rho0_site.trace() - Complex{1.0, 0.0}) > 1e-8 ||
      (rho0_site - rho0_site.adjoint()).cwiseAbs().maxCoeff() > 1e-8) {
    throw ValidationError("make_mixed_state: input is not a unit-trace Hermitian matrix");
  }
  EvolvingState state;
  state.kind = EvolvingState::Kind::kMixed;
  state.eig = &eig;
  state.rho_eig =
      complex_real_product(real_complex_product(eig.vectors.transpose(), rho0_site), eig.vectors);
  return state;
}

ComplexVector evolve_pure(const EvolvingState& state, double t) {
  if (state.kind != EvolvingState::Kind::kPure) throw ValidationError("evolve_pure: mixed state");
  const ComplexVector rotated =
      state.overlaps.coefficients.cwiseProduct(phases(state.eig->values, t));
  return real_complex_product(state.eig->vectors, rotated);
}

DensityMatrix evolve_mixed(const EvolvingState& state, double t) {
  if (state.kind != EvolvingState::Kind::kMixed) throw ValidationError("evolve_mixed: pure state");
  const ComplexVector ph = phases(state.eig->values, t);
  const ComplexMatrix rotated = ph.asDiagonal() * state.rho_eig * ph.conjugate().asDiagonal();
  DensityMatrix out;
  out.matrix = complex_real_product(real_complex_product(state.eig->vectors, rotated),
                                    state.eig->vectors.transpose());
  out.basis_tag = state.eig->basis_tag;
  return out;
}

double energy_of(const EvolvingState& state) {
  if (state.kind == EvolvingState::Kind::kPure) {
    return state.overlaps.energy;
  }
  return (state.rho_eig.diagonal().real().array() * state.eig->values.array()).sum();
}

double energy_at(const EvolvingState& state, double t, const SparseOperator& h) {
  if (h.dim != state.eig->dim()) throw ValidationError("energy_at: operator dimension mismatch");
  if (state.kind == EvolvingState::Kind::kPure) {
    return h.expectation(evolve_pure(state, t));
  }
  if (state.has_low_rank) {
    const ComplexVector ph = phases(state.eig->values, t);
    ComplexMatrix rotated(state.mix_coefficients.rows(), state.mix_coefficients.cols());
    rotated.real() = ph.real().asDiagonal() * state.mix_coefficients;
    rotated.imag() = ph.imag().asDiagonal() * state.mix_coefficients;
    const ComplexMatrix batch = real_complex_product(state.eig->vectors, rotated);
    double energy = 0.0;
    for (Eigen::Index k = 0; k < batch.cols(); ++k) {
      energy += state.mix_weights(k) * h.expectation(batch.col(k));
    }
    return energy;
  }
  const DensityMatrix rho = evolve_mixed(state, t);
  return (real_complex_product(h.to_dense(), rho.matrix)).trace().real();
}

ReducedState reduced_at(const EvolvingState& state, double t, const TraceMap& map) {
  if (state.kind == EvolvingState::Kind::kPure) {
    return partial_trace(evolve_pure(state, t), map);
  }
  if (state.has_low_rank) {
    // rho(t) = sum_k w_k |phi_k(t)><phi_k(t)| with phi_k(t) evolved in batch.
    const ComplexVector ph = phases(state.eig->values, t);
    ComplexMatrix rotated(state.mix_coefficients.rows(), state.mix_coefficients.cols());
    rotated.real() = ph.real().asDiagonal() * state.mix_coefficients;
    rotated.imag() = ph.imag().asDiagonal() * state.mix_coefficients;
    const ComplexMatrix batch = real_complex_product(state.eig->vectors, rotated);
    const int fock_dim = map.fock().dim();
    ComplexMatrix rho = ComplexMatrix::Zero(fock_dim, fock_dim);
    ComplexMatrix rows;
    const RealVector sqrt_w = state.mix_weights.cwiseMax(0.0).cwiseSqrt();
    for (const TraceMap::Group& group : map.groups()) {
      const auto m = static_cast<Eigen::Index>(group.fock_index.size());
      rows.resize(m, batch.cols());
      for (Eigen::Index a = 0; a < m; ++a) {
        rows.row(a) = batch.row(group.sector_index[static_cast<std::size_t>(a)]).array() *
                      sqrt_w.transpose().array().cast<Complex>();
      }
      const ComplexMatrix contribution = rows * rows.adjoint();
      for (Eigen::Index a = 0; a < m; ++a) {
        for (Eigen::Index b = 0; b < m; ++b) {
          rho(group.fock_index[static_cast<std::size_t>(a)],
              group.fock_index[static_cast<std::size_t>(b)]) += contribution(a, b);
        }
      }
    }
    ReducedState out;
    out.rho.matrix = std::move(rho);
    out.rho.basis_tag = map.fock().tag();
    out.block_weights = block_weights_of(out.rho, map.fock());
    return out;
  }
  return partial_trace(evolve_mixed(state, t), map);
}

ProductPureInitial product_pure_initial(const Lattice& lattice, const Bipartition& bipartition,
                                        const BasisSector& sector, int n_system, int n_bath,
                                        CouplingTerms coupling) {
  const ProductEmbedding embedding = product_embedding(bipartition, sector, n_system, n_bath);
  const SectorGroundState system =
      part_ground_state(lattice, bipartition.system_sites, n_system, "system");
  const SectorGroundState bath = part_ground_state(lattice, bipartition.bath_sites, n_bath, "bath");

  ProductPureInitial out;
  out.psi = ComplexVector::Zero(sector.dim());
  for (std::size_t k = 0; k < embedding.full_index.size(); ++k) {
    out.psi(embedding.full_index[k]) =
        system.vector(embedding.system_rank[k]) * bath.vector(embedding.bath_rank[k]);
  }
  out.energy_system = system.energy;
  out.energy_bath = bath.energy;
  out.degenerate_system_gs = system.degenerate;
  out.degenerate_bath_gs = bath.degenerate;

  const SparseOperator h_full = build_hamiltonian(lattice, sector);
  out.energy_total = h_full.expectation(out.psi);
  const SparseOperator h_interaction =
      build_hamiltonian(lattice, sector, bipartition.coupling_edges, coupling);
  out.energy_interaction = h_interaction.expectation(out.psi);
  return out;
}

EvolvingState product_thermal_initial(const Lattice& lattice, const Bipartition& bipartition,
                                      const BasisSector& sector, const SpectralDecomposition& eig,
                                      int n_system, int n_bath, double beta_system,
                                      double beta_bath) {
  if (eig.dim() != sector.dim()) throw ValidationError("product_thermal_initial: eig mismatch");
  const ProductEmbedding embedding = product_embedding(bipartition, sector, n_system, n_bath);
  const auto [w_system, v_system] =
      part_thermal_factor(lattice, bipartition.system_sites, n_system, beta_system);
  const auto [w_bath, v_bath] = part_thermal_factor(lattice, bipartition.bath_sites, n_bath, beta_bath);

  const int n_s = static_cast<int>(w_system.size());
  const int n_b = static_cast<int>(w_bath.size());
  const int n_factors = n_s * n_b;

  // Embed every product eigenvector |phi_k x chi_l> into the full sector.
  RealMatrix factors = RealMatrix::Zero(sector.dim(), n_factors);
  RealVector weights(n_factors);
  for (int k = 0; k < n_s; ++k) {
    for (int l = 0; l < n_b; ++l) {
      weights(k * n_b + l) = w_system(k) * w_bath(l);
    }
  }
  for (std::size_t idx = 0; idx < embedding.full_index.size(); ++idx) {
    const int row = embedding.full_index[idx];
    for (int k = 0; k < n_s; ++k) {
      const double vs = v_system(embedding.system_rank[idx], k);
      if (vs == 0.0) continue;
      for (int l = 0; l < n_b; ++l) {
        factors(row, k * n_b + l) = vs * v_bath(embedding.bath_rank[idx], l);
      }
    }
  }

  EvolvingState state;
  state.kind = EvolvingState::Kind::kMixed;
  state.eig = &eig;
  state.mix_weights = weights;
  state.mix_coefficients = eig.vectors.transpose() * factors;
  state.has_low_rank = true;
  const RealMatrix rho_eig =
      state.mix_coefficients * weights.asDiagonal() * state.mix_coefficients.transpose();
  state.rho_eig = rho_eig.cast<Complex>();
  return state;
}

ReducedState time_average_reduced(const EvolvingState& state, const TraceMap& map, double t0,
                                  double t1, int n_samples) {
  if (!(t1 > t0) || t0 < 0.0) throw ValidationError("time_average_reduced: need t1 > t0 >= 0");
  if (n_samples < 2) throw ValidationError("time_average_reduced: need at least 2 samples");
  ComplexMatrix sum = ComplexMatrix::Zero(map.fock().dim(), map.fock().dim());
  for (int k = 0; k < n_samples; ++k) {
    const double t = t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(n_samples - 1);
    sum += reduced_at(state, t, map).rho.matrix;
  }
  ReducedState out;
  out.rho.matrix = sum / static_cast<double>(n_samples);
  out.rho.basis_tag = map.fock().tag();
  out.block_weights = block_weights_of(out.rho, map.fock());
  return out;
}

}  // namespace hcb
