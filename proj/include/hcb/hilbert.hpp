#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hcb/errors.hpp"
#include "hcb/lattice.hpp"
#include "hcb/types.hpp"

namespace hcb {

// Pascal triangle up to 64; binomial(n, k) in O(1) after first use.
std::uint64_t binomial(int n, int k);

// Fixed-particle-number occupation basis. States are bitmasks with popcount
// n_particles, enumerated in ascending integer order.
class BasisSector {
 public:
  BasisSector() = default;
  BasisSector(int n_sites, int n_particles, std::uint64_t max_dim = 10'000'000);

  int n_sites() const { return n_sites_; }
  int n_particles() const { return n_particles_; }
  int dim() const { return static_cast<int>(states_.size()); }
  const std::vector<StateMask>& states() const { return states_; }
  StateMask state(int index) const { return states_[static_cast<std::size_t>(index)]; }

  // Combinatorial ranking, O(n_sites); throws if the mask is not in the sector.
  int rank(StateMask state) const;

  const std::string& tag() const { return tag_; }

 private:
  int n_sites_ = 0;
  int n_particles_ = 0;
  std::vector<StateMask> states_;
  std::string tag_;
};

inline BasisSector enumerate_basis(int n_sites, int n_particles) {
  return BasisSector(n_sites, n_particles);
}

// Full 2^|sites| Fock space of a site subset, ordered by particle-number
// block first and ascending bitmask within each block. Bit k of a local mask
// is the occupation of sites[k].
class SubsystemFockSpace {
 public:
  SubsystemFockSpace() = default;
  explicit SubsystemFockSpace(std::vector<int> sites);

  int n_sites() const { return static_cast<int>(sites_.size()); }
  int dim() const { return 1 << n_sites(); }
  const std::vector<int>& sites() const { return sites_; }
  const std::vector<int>& sector_offsets() const { return offsets_; }

  int index_of(StateMask local_mask) const;   // block offset + in-block rank
  StateMask mask_of(int index) const { return masks_[static_cast<std::size_t>(index)]; }
  int block_of(int index) const;              // n_S of the block holding index

  const std::string& tag() const { return tag_; }

 private:
  std::vector<int> sites_;
  std::vector<int> offsets_;        // offsets_[n] = start of the n-particle block
  std::vector<StateMask> masks_;    // index -> local mask
  std::string tag_;
};

// Occupations of a full-lattice mask read out in system/bath site order.
struct SplitMasks {
  StateMask system = 0;  // bit k = occupation of system_sites[k]
  StateMask bath = 0;    // bit k = occupation of bath_sites[k]
};

SplitMasks split_state(StateMask state, const Bipartition& bipartition);

// Inverse of split_state.
StateMask combine_state(SplitMasks masks, const Bipartition& bipartition);

}  // namespace hcb
