#include "hcb/hamiltonian.hpp"

#include <algorithm>
#include <map>

#include "hcb/errors.hpp"

namespace hcb {

RealMatrix SparseOperator::to_dense() const {
  RealMatrix dense = RealMatrix::Zero(dim, dim);
  for (const Entry& e : entries) {
    dense(e.row, e.col) += e.value;
    if (e.row != e.col) dense(e.col, e.row) += e.value;
  }
  return dense;
}

double SparseOperator::trace() const {
  double t = 0.0;
  for (const Entry& e : entries) {
    if (e.row == e.col) t += e.value;
  }
  return t;
}

double SparseOperator::max_abs() const {
  double m = 0.0;
  for (const Entry& e : entries) m = std::max(m, std::abs(e.value));
  return m;
}

RealVector SparseOperator::apply(const RealVector& x) const {
  if (x.size() != dim) throw ValidationError("SparseOperator::apply: size mismatch");
  RealVector y = RealVector::Zero(dim);
  for (const Entry& e : entries) {
    y(e.row) += e.value * x(e.col);
    if (e.row != e.col) y(e.col) += e.value * x(e.row);
  }
  return y;
}

ComplexVector SparseOperator::apply(const ComplexVector& x) const {
  if (x.size() != dim) throw ValidationError("SparseOperator::apply: size mismatch");
  ComplexVector y = ComplexVector::Zero(dim);
  for (const Entry& e : entries) {
    y(e.row) += e.value * x(e.col);
    if (e.row != e.col) y(e.col) += e.value * x(e.row);
  }
  return y;
}

double SparseOperator::expectation(const ComplexVector& x) const {
  return x.dot(apply(x)).real();
}

SparseOperator& SparseOperator::operator+=(const SparseOperator& other) {
  if (dim != other.dim || basis_tag != other.basis_tag) {
    throw ValidationError("SparseOperator::operator+=: operand mismatch");
  }
  std::map<std::pair<int, int>, double> merged;
  for (const Entry& e : entries) merged[{e.row, e.col}] += e.value;
  for (const Entry& e : other.entries) merged[{e.row, e.col}] += e.value;
  entries.clear();
  entries.reserve(merged.size());
  for (const auto& [key, value] : merged) entries.push_back({key.first, key.second, value});
  return *this;
}

CouplingTerms coupling_terms_from_string(const std::string& name) {
  if (name == "both") return CouplingTerms::kBoth;
  if (name == "hopping_only") return CouplingTerms::kHoppingOnly;
  if (name == "interaction_only") return CouplingTerms::kInteractionOnly;
  throw ConfigError("coupling_terms must be both|hopping_only|interaction_only, got '" + name +
                    "'");
}

std::string to_string(CouplingTerms terms) {
  switch (terms) {
    case CouplingTerms::kBoth: return "both";
    case CouplingTerms::kHoppingOnly: return "hopping_only";
    case CouplingTerms::kInteractionOnly: return "interaction_only";
  }
  return "both";
}

SparseOperator build_hamiltonian(const Lattice& lattice, const BasisSector& sector,
                                 const std::optional<std::vector<Edge>>& edge_subset,
                                 CouplingTerms terms) {
  if (sector.n_sites() != lattice.n_sites) {
    throw ValidationError("build_hamiltonian: sector is on " + std::to_string(sector.n_sites()) +
                          " sites but the lattice has " + std::to_string(lattice.n_sites));
  }
  const std::vector<Edge>& edges = edge_subset ? *edge_subset : lattice.edges;
  const bool with_hopping = terms != CouplingTerms::kInteractionOnly;
  const bool with_interaction = terms != CouplingTerms::kHoppingOnly;
  const double j = lattice.hopping_j;
  const double u = lattice.interaction_u;

  std::map<std::pair<int, int>, double> elements;
  const auto& states = sector.states();
  for (int row_state = 0; row_state < sector.dim(); ++row_state) {
    const StateMask s = states[static_cast<std::size_t>(row_state)];
    double diagonal = 0.0;
    for (const Edge& edge : edges) {
      const bool occ_a = (s >> edge.first) & 1;
      const bool occ_b = (s >> edge.second) & 1;
      if (occ_a && occ_b) {
        if (with_interaction) diagonal += u;
        continue;
      }
      // Hard core: hop only onto an empty endpoint. The moved image differs
      // in exactly the two edge bits.
      if (with_hopping && occ_a != occ_b) {
        const StateMask image =
            s ^ (StateMask{1} << edge.first) ^ (StateMask{1} << edge.second);
        const int col_state = sector.rank(image);
        if (col_state > row_state) elements[{row_state, col_state}] += -j;
      }
    }
    if (diagonal != 0.0) elements[{row_state, row_state}] += diagonal;
  }

  SparseOperator op;
  op.dim = sector.dim();
  op.basis_tag = sector.tag();
  op.entries.reserve(elements.size());
  for (const auto& [key, value] : elements) op.entries.push_back({key.first, key.second, value});
  return op;
}

SplitHamiltonian split_hamiltonian(const Lattice& lattice, const Bipartition& bipartition,
                                   const BasisSector& sector, CouplingTerms terms) {
  SplitHamiltonian out;
  out.system = build_hamiltonian(lattice, sector, internal_edges(lattice, bipartition.system_sites));
  out.bath = build_hamiltonian(lattice, sector, internal_edges(lattice, bipartition.bath_sites));
  out.interaction = build_hamiltonian(lattice, sector, bipartition.coupling_edges, terms);
  return out;
}

SparseOperator subsystem_hamiltonian(const Lattice& lattice, const Bipartition& bipartition,
                                     const SubsystemFockSpace& fock) {
  if (fock.sites() != bipartition.system_sites) {
    throw ValidationError("subsystem_hamiltonian: Fock space sites differ from system_sites");
  }
  const Lattice sub = sublattice(lattice, bipartition.system_sites);
  const double j = sub.hopping_j;
  const double u = sub.interaction_u;

  std::map<std::pair<int, int>, double> elements;
  for (int row = 0; row < fock.dim(); ++row) {
    const StateMask s = fock.mask_of(row);
    double diagonal = 0.0;
    for (const Edge& edge : sub.edges) {
      const bool occ_a = (s >> edge.first) & 1;
      const bool occ_b = (s >> edge.second) & 1;
      if (occ_a && occ_b) {
        diagonal += u;
      } else if (occ_a != occ_b) {
        const StateMask image =
            s ^ (StateMask{1} << edge.first) ^ (StateMask{1} << edge.second);
        const int col = fock.index_of(image);
        if (col > row) elements[{row, col}] += -j;
      }
    }
    if (diagonal != 0.0) elements[{row, row}] += diagonal;
  }

  SparseOperator op;
  op.dim = fock.dim();
  op.basis_tag = fock.tag();
  op.entries.reserve(elements.size());
  for (const auto& [key, value] : elements) op.entries.push_back({key.first, key.second, value});
  return op;
}

}  // namespace hcb
