#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hcb/hilbert.hpp"
#include "hcb/lattice.hpp"
#include "hcb/types.hpp"

namespace hcb {

// Real symmetric operator stored as upper-triangle triplets (row <= col).
struct SparseOperator {
  struct Entry {
    int row;
    int col;
    double value;
  };

  int dim = 0;
  std::vector<Entry> entries;  // sorted by (row, col), row <= col, no duplicates
  std::string basis_tag;

  RealMatrix to_dense() const;
  double trace() const;
  double max_abs() const;

  // y = H x with the implied lower triangle filled in.
  RealVector apply(const RealVector& x) const;
  ComplexVector apply(const ComplexVector& x) const;

  double expectation(const ComplexVector& x) const;  // Re <x|H|x>

  SparseOperator& operator+=(const SparseOperator& other);
};

// Which terms of a coupling edge participate in H^(I).
enum class CouplingTerms { kBoth, kHoppingOnly, kInteractionOnly };

CouplingTerms coupling_terms_from_string(const std::string& name);
std::string to_string(CouplingTerms terms);

// Hopping -J between edge endpoints (target empty, hard-core) plus +U on the
// diagonal per doubly occupied edge. edge_subset defaults to all edges.
SparseOperator build_hamiltonian(const Lattice& lattice, const BasisSector& sector,
                                 const std::optional<std::vector<Edge>>& edge_subset = std::nullopt,
                                 CouplingTerms terms = CouplingTerms::kBoth);

struct SplitHamiltonian {
  SparseOperator system;       // edges internal to S, embedded in the full sector
  SparseOperator bath;         // edges internal to B, embedded
  SparseOperator interaction;  // coupling edges (term content per flag)
};

// With CouplingTerms::kBoth the three parts sum entrywise to the full
// Hamiltonian; restricted flags drop the omitted coupling-edge terms.
SplitHamiltonian split_hamiltonian(const Lattice& lattice, const Bipartition& bipartition,
                                   const BasisSector& sector,
                                   CouplingTerms terms = CouplingTerms::kBoth);

// H^(S) on the full 2^|S| Fock space; block-diagonal in the particle number.
SparseOperator subsystem_hamiltonian(const Lattice& lattice, const Bipartition& bipartition,
                                     const SubsystemFockSpace& fock);

}  // namespace hcb
