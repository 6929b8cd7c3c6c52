#include "hcb/hilbert.hpp"

#include <array>
#include <bit>
#include <sstream>

namespace hcb {
namespace {

constexpr int kTableSize = kMaxSites + 2;

const std::array<std::array<std::uint64_t, kTableSize>, kTableSize>& pascal_table() {
  static const auto table = [] {
    std::array<std::array<std::uint64_t, kTableSize>, kTableSize> t{};
    for (int n = 0; n < kTableSize; ++n) {
      t[n][0] = 1;
      for (int k = 1; k <= n; ++k) {
        t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0);
      }
    }
    return t;
  }();
  return table;
}

// Smallest mask with n bits set.
StateMask first_state(int n) { return n == 0 ? 0 : (StateMask{1} << n) - 1; }

// Next mask with the same popcount (Gosper's hack); caller stops at overflow.
StateMask next_state(StateMask v) {
  StateMask c = v & (~v + 1);
  StateMask r = v + c;
  return (((r ^ v) >> 2) / c) | r;
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n || n < 0) return 0;
  if (n >= kTableSize) throw ValidationError("binomial: n exceeds table size");
  return pascal_table()[n][k];
}

BasisSector::BasisSector(int n_sites, int n_particles, std::uint64_t max_dim)
    : n_sites_(n_sites), n_particles_(n_particles) {
  if (n_sites < 0 || n_sites > kMaxSites) {
    throw ValidationError("BasisSector: n_sites must be in [0, 63], got " +
                          std::to_string(n_sites));
  }
  if (n_particles < 0 || n_particles > n_sites) {
    throw ValidationError("BasisSector: n_particles " + std::to_string(n_particles) +
                          " out of range for " + std::to_string(n_sites) + " sites");
  }
  const std::uint64_t dim = binomial(n_sites, n_particles);
  if (dim > max_dim) {
    throw GuardError("BasisSector: dimension " + std::to_string(dim) +
                     " exceeds the configured cap " + std::to_string(max_dim));
  }
  states_.reserve(dim);
  if (n_particles == 0) {
    states_.push_back(0);
  } else {
    StateMask limit = StateMask{1} << n_sites;
    for (StateMask s = first_state(n_particles); s < limit; s = next_state(s)) {
      states_.push_back(s);
    }
  }
  std::ostringstream tag;
  tag << "sector(" << n_sites << "," << n_particles << ")";
  tag_ = tag.str();
}

int BasisSector::rank(StateMask state) const {
  if (std::popcount(state) != n_particles_ || (state >> n_sites_) != 0) {
    throw ValidationError(tag_ + ": state not in sector");
  }
  // Count the sector states that precede `state`: for each set bit at
  // position p holding the r-th particle, the states placing that particle
  // below p (with the remaining particles anywhere below it) come first.
  std::uint64_t index = 0;
  int seen = 0;
  for (int p = 0; p < n_sites_; ++p) {
    if ((state >> p) & 1) {
      ++seen;
      index += binomial(p, seen);
    }
  }
  return static_cast<int>(index);
}

SubsystemFockSpace::SubsystemFockSpace(std::vector<int> sites) : sites_(std::move(sites)) {
  const int n = static_cast<int>(sites_.size());
  if (n <= 0 || n > 20) {
    throw ValidationError("SubsystemFockSpace: site count must be in [1, 20]");
  }
  offsets_.resize(n + 2, 0);
  for (int k = 0; k <= n; ++k) {
    offsets_[k + 1] = offsets_[k] + static_cast<int>(binomial(n, k));
  }
  masks_.resize(static_cast<std::size_t>(1) << n);
  std::vector<int> next = offsets_;
  for (StateMask m = 0; m < masks_.size(); ++m) {
    masks_[static_cast<std::size_t>(next[std::popcount(m)]++)] = m;
  }
  std::ostringstream tag;
  tag << "fock(";
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    tag << (i ? "," : "") << sites_[i];
  }
  tag << ")";
  tag_ = tag.str();
}

int SubsystemFockSpace::index_of(StateMask local_mask) const {
  const int n = n_sites();
  if ((local_mask >> n) != 0) throw ValidationError(tag_ + ": mask has bits past the subsystem");
  const int block = std::popcount(local_mask);
  std::uint64_t in_block = 0;
  int seen = 0;
  for (int p = 0; p < n; ++p) {
    if ((local_mask >> p) & 1) {
      ++seen;
      in_block += binomial(p, seen);
    }
  }
  return offsets_[block] + static_cast<int>(in_block);
}

int SubsystemFockSpace::block_of(int index) const {
  return std::popcount(masks_[static_cast<std::size_t>(index)]);
}

SplitMasks split_state(StateMask state, const Bipartition& bipartition) {
  SplitMasks out;
  for (std::size_t k = 0; k < bipartition.system_sites.size(); ++k) {
    out.system |= ((state >> bipartition.system_sites[k]) & 1) << k;
  }
  for (std::size_t k = 0; k < bipartition.bath_sites.size(); ++k) {
    out.bath |= ((state >> bipartition.bath_sites[k]) & 1) << k;
  }
  return out;
}

StateMask combine_state(SplitMasks masks, const Bipartition& bipartition) {
  StateMask state = 0;
  for (std::size_t k = 0; k < bipartition.system_sites.size(); ++k) {
    state |= ((masks.system >> k) & 1) << bipartition.system_sites[k];
  }
  for (std::size_t k = 0; k < bipartition.bath_sites.size(); ++k) {
    state |= ((masks.bath >> k) & 1) << bipartition.bath_sites[k];
  }
  return state;
}

}  // namespace hcb
