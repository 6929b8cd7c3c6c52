#include "hcb/reduction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_map>

#include <Eigen/Dense>

#include "hcb/errors.hpp"

namespace hcb {

TraceMap::TraceMap(const BasisSector& sector, const std::vector<int>& kept_sites)
    : fock_(kept_sites), sector_tag_(sector.tag()), sector_dim_(sector.dim()) {
  std::vector<int> traced;
  {
    std::vector<bool> kept(static_cast<std::size_t>(sector.n_sites()), false);
    for (int s : kept_sites) {
      if (s < 0 || s >= sector.n_sites()) throw ValidationError("TraceMap: kept site out of range");
      kept[static_cast<std::size_t>(s)] = true;
    }
    for (int i = 0; i < sector.n_sites(); ++i) {
      if (!kept[static_cast<std::size_t>(i)]) traced.push_back(i);
    }
  }
  std::unordered_map<StateMask, int> group_of;
  group_of.reserve(static_cast<std::size_t>(sector.dim()));
  for (int i = 0; i < sector.dim(); ++i) {
    const StateMask state = sector.state(i);
    StateMask kept_mask = 0;
    for (std::size_t k = 0; k < kept_sites.size(); ++k) {
      kept_mask |= ((state >> kept_sites[k]) & 1) << k;
    }
    StateMask traced_mask = 0;
    for (std::size_t k = 0; k < traced.size(); ++k) {
      traced_mask |= ((state >> traced[k]) & 1) << k;
    }
    auto [it, inserted] = group_of.try_emplace(traced_mask, static_cast<int>(groups_.size()));
    if (inserted) groups_.emplace_back();
    Group& group = groups_[static_cast<std::size_t>(it->second)];
    group.fock_index.push_back(fock_.index_of(kept_mask));
    group.sector_index.push_back(i);
  }
}

ReducedState partial_trace(const ComplexVector& psi, const TraceMap& map) {
  if (psi.size() != map.sector_dim()) throw ValidationError("partial_trace: dimension mismatch");
  ComplexMatrix rho = ComplexMatrix::Zero(map.fock().dim(), map.fock().dim());
  for (const TraceMap::Group& group : map.groups()) {
    const std::size_t m = group.fock_index.size();
    for (std::size_t a = 0; a < m; ++a) {
      const Complex va = psi(group.sector_index[a]);
      for (std::size_t b = 0; b < m; ++b) {
        rho(group.fock_index[a], group.fock_index[b]) += va * std::conj(psi(group.sector_index[b]));
      }
    }
  }
  ReducedState out;
  out.rho.matrix = std::move(rho);
  out.rho.basis_tag = map.fock().tag();
  out.block_weights = block_weights_of(out.rho, map.fock());
  return out;
}

ReducedState partial_trace(const DensityMatrix& rho_full, const TraceMap& map) {
  if (rho_full.dim() != map.sector_dim()) throw ValidationError("partial_trace: dimension mismatch");
  if (rho_full.basis_tag != map.sector_tag()) {
    throw ValidationError("partial_trace: basis tag mismatch (" + rho_full.basis_tag + " vs " +
                          map.sector_tag() + ")");
  }
  ComplexMatrix rho = ComplexMatrix::Zero(map.fock().dim(), map.fock().dim());
  for (const TraceMap::Group& group : map.groups()) {
    const std::size_t m = group.fock_index.size();
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        rho(group.fock_index[a], group.fock_index[b]) +=
            rho_full.matrix(group.sector_index[a], group.sector_index[b]);
      }
    }
  }
  ReducedState out;
  out.rho.matrix = std::move(rho);
  out.rho.basis_tag = map.fock().tag();
  out.block_weights = block_weights_of(out.rho, map.fock());
  return out;
}

ReducedState reduce_eigen_mixture(const SpectralDecomposition& eig, const RealVector& weights,
                                  const TraceMap& map) {
  if (eig.dim() != map.sector_dim()) {
    throw ValidationError("reduce_eigen_mixture: dimension mismatch");
  }
  if (weights.size() != eig.dim()) {
    throw ValidationError("reduce_eigen_mixture: weight count mismatch");
  }
  const RealVector sqrt_w = weights.cwiseMax(0.0).cwiseSqrt();
  RealMatrix rho = RealMatrix::Zero(map.fock().dim(), map.fock().dim());
  RealMatrix rows;
  for (const TraceMap::Group& group : map.groups()) {
    const auto m = static_cast<Eigen::Index>(group.fock_index.size());
    rows.resize(m, eig.dim());
    for (Eigen::Index a = 0; a < m; ++a) {
      rows.row(a) = eig.vectors.row(group.sector_index[static_cast<std::size_t>(a)]).array() *
                    sqrt_w.transpose().array();
    }
    const RealMatrix contribution = rows * rows.transpose();
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b < m; ++b) {
        rho(group.fock_index[static_cast<std::size_t>(a)],
            group.fock_index[static_cast<std::size_t>(b)]) += contribution(a, b);
      }
    }
  }
  ReducedState out;
  out.rho.matrix = rho.cast<Complex>();
  out.rho.basis_tag = map.fock().tag();
  out.block_weights = block_weights_of(out.rho, map.fock());
  return out;
}

RealVector block_weights_of(const DensityMatrix& rho, const SubsystemFockSpace& fock) {
  RealVector weights = RealVector::Zero(fock.n_sites() + 1);
  for (int i = 0; i < fock.dim(); ++i) {
    weights(fock.block_of(i)) += rho.matrix(i, i).real();
  }
  return weights;
}

double hs_distance_sq(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw ValidationError("hs_distance_sq: dimension mismatch");
  return (a.matrix - b.matrix).squaredNorm();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw ValidationError("trace_distance: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix - b.matrix, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double von_neumann_entropy(const DensityMatrix& rho, double psd_tol) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix, Eigen::EigenvaluesOnly);
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double lambda = solver.eigenvalues()(i);
    if (lambda < -psd_tol) {
      throw ValidationError("von_neumann_entropy: eigenvalue " + std::to_string(lambda) +
                            " below -" + std::to_string(psd_tol));
    }
    if (lambda > 1e-14) entropy -= lambda * std::log(lambda);
  }
  return entropy;
}

DensityMatrix two_site_rdm(const ComplexVector& psi, const BasisSector& sector, int site_i,
                           int site_j) {
  if (site_i == site_j) throw ValidationError("two_site_rdm: sites must differ");
  if (site_i < 0 || site_i >= sector.n_sites() || site_j < 0 || site_j >= sector.n_sites()) {
    throw ValidationError("two_site_rdm: site out of range");
  }
  if (psi.size() != sector.dim()) throw ValidationError("two_site_rdm: dimension mismatch");

  // Bucket the amplitudes by the configuration of all other sites; the pair
  // occupation (n_i, n_j) indexes the qubit basis as 2*n_i + n_j.
  const StateMask pair_bits = (StateMask{1} << site_i) | (StateMask{1} << site_j);
  std::unordered_map<StateMask, std::array<Complex, 4>> buckets;
  buckets.reserve(static_cast<std::size_t>(sector.dim()));
  for (int k = 0; k < sector.dim(); ++k) {
    const StateMask state = sector.state(k);
    const int cell = 2 * static_cast<int>((state >> site_i) & 1) +
                     static_cast<int>((state >> site_j) & 1);
    auto [it, inserted] = buckets.try_emplace(state & ~pair_bits);
    if (inserted) it->second.fill(Complex{0.0, 0.0});
    it->second[static_cast<std::size_t>(cell)] = psi(k);
  }
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  for (const auto& [rest, amplitudes] : buckets) {
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        rho(a, b) += amplitudes[static_cast<std::size_t>(a)] *
                     std::conj(amplitudes[static_cast<std::size_t>(b)]);
      }
    }
  }
  DensityMatrix out;
  out.matrix = std::move(rho);
  out.basis_tag = "qubits(" + std::to_string(site_i) + "," + std::to_string(site_j) + ")";
  return out;
}

double concurrence(const DensityMatrix& rho2) {
  if (rho2.dim() != 4) throw ValidationError("concurrence: expected a 4x4 density matrix");
  const double herm_err = (rho2.matrix - rho2.matrix.adjoint()).cwiseAbs().maxCoeff();
  const double trace_err = std::abs(rho2.matrix.trace() - Complex{1.0, 0.0});
  if (herm_err > 1e-8 || trace_err > 1e-8) {
    throw ValidationError("concurrence: input is not a density matrix");
  }
  ComplexMatrix spin_flip = ComplexMatrix::Zero(4, 4);
  spin_flip(0, 3) = -1.0;
  spin_flip(1, 2) = 1.0;
  spin_flip(2, 1) = 1.0;
  spin_flip(3, 0) = -1.0;
  const ComplexMatrix r = rho2.matrix * spin_flip * rho2.matrix.conjugate() * spin_flip;
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(r, false);
  std::array<double, 4> lambdas{};
  for (int i = 0; i < 4; ++i) {
    lambdas[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, solver.eigenvalues()(i).real()));
  }
  std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
  return std::max(0.0, lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]);
}

std::vector<std::pair<double, double>> energy_resolved_profile(const ReducedState& reduced,
                                                               const SparseOperator& h_fock,
                                                               double weight_floor) {
  if (reduced.rho.dim() != h_fock.dim) {
    throw ValidationError("energy_resolved_profile: dimension mismatch");
  }
  if (reduced.rho.basis_tag != h_fock.basis_tag) {
    throw ValidationError("energy_resolved_profile: basis tag mismatch (" +
                          reduced.rho.basis_tag + " vs " + h_fock.basis_tag + ")");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(reduced.rho.matrix);
  const RealVector& w = solver.eigenvalues();
  const ComplexMatrix& v = solver.eigenvectors();
  const ComplexMatrix h_dense = h_fock.to_dense().cast<Complex>();

  // Rotate degenerate weight clusters so H_S is diagonal inside each cluster;
  // the emitted energies are then independent of eigenvector arbitrariness.
  std::vector<std::pair<double, double>> points;
  const double cluster_tol = 1e-12;
  int start = 0;
  while (start < reduced.rho.dim()) {
    int stop = start + 1;
    while (stop < reduced.rho.dim() && w(stop) - w(stop - 1) <= cluster_tol) ++stop;
    const int size = stop - start;
    if (size == 1) {
      const double weight = w(start);
      if (weight > weight_floor) {
        const ComplexVector vec = v.col(start);
        points.emplace_back((vec.adjoint() * h_dense * vec)(0).real(), weight);
      }
    } else {
      const ComplexMatrix basis = v.middleCols(start, size);
      const ComplexMatrix h_sub = basis.adjoint() * h_dense * basis;
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> inner(h_sub);
      for (int k = 0; k < size; ++k) {
        const double weight = w(start + k);
        if (weight > weight_floor) points.emplace_back(inner.eigenvalues()(k), weight);
      }
    }
    start = stop;
  }
  std::sort(points.begin(), points.end());
  return points;
}

}  // namespace hcb
