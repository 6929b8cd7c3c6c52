#include <doctest.h>

#include <algorithm>
#include <bit>
#include <random>

#include "hcb/errors.hpp"
#include "hcb/hilbert.hpp"
#include "oracles.hpp"

using namespace hcb;

TEST_CASE("small sectors enumerate exhaustively in ascending order") {
  const BasisSector two(2, 1);
  CHECK(two.dim() == 2);
  CHECK(two.states() == std::vector<StateMask>{0b01, 0b10});

  const BasisSector four(4, 2);
  CHECK(four.dim() == 6);
  CHECK(four.states() ==
        std::vector<StateMask>{0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100});
}

TEST_CASE("sector dimensions match the binomial oracle") {
  // Independent binomial via the multiplicative formula.
  auto choose = [](int n, int k) {
    unsigned long long value = 1;
    for (int i = 0; i < k; ++i) value = value * static_cast<unsigned>(n - i) / (i + 1u);
    return value;
  };
  CHECK(BasisSector(21, 5).dim() == 20349);
  CHECK(BasisSector(25, 5).dim() == 53130);
  CHECK(choose(21, 5) == 20349u);
  CHECK(choose(25, 5) == 53130u);
  for (int n = 0; n <= 14; ++n) {
    for (int k = 0; k <= n; ++k) {
      CHECK(binomial(n, k) == choose(n, k));
    }
  }
}

TEST_CASE("rank endpoints and bounds") {
  const BasisSector sector(4, 2);
  CHECK(sector.rank(0b0011) == 0);
  CHECK(sector.rank(0b1100) == 5);
  CHECK_THROWS_AS(sector.rank(0b0111), ValidationError);
  CHECK_THROWS_AS(BasisSector(2, 3), ValidationError);
  CHECK_THROWS_AS(BasisSector(64, 1), ValidationError);
}

TEST_CASE("rank agrees with binary search over the enumerated list") {
  const BasisSector sector(12, 4);
  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> pick(0, sector.dim() - 1);
  for (int trial = 0; trial < 200; ++trial) {
    const StateMask state = sector.state(pick(rng));
    const auto it = std::lower_bound(sector.states().begin(), sector.states().end(), state);
    CHECK(sector.rank(state) == static_cast<int>(it - sector.states().begin()));
  }
  for (int k = 0; k < sector.dim(); ++k) {
    REQUIRE(sector.rank(sector.state(k)) == k);
  }
}

TEST_CASE("subsystem Fock space blocks and offsets") {
  const SubsystemFockSpace fock({0, 1, 2});
  CHECK(fock.dim() == 8);
  CHECK(fock.sector_offsets()[0] == 0);
  CHECK(fock.sector_offsets()[1] == 1);
  CHECK(fock.sector_offsets()[2] == 4);
  CHECK(fock.sector_offsets()[3] == 7);
  // Block order: 000 | 001 010 100 | 011 101 110 | 111.
  CHECK(fock.mask_of(0) == 0b000);
  CHECK(fock.mask_of(1) == 0b001);
  CHECK(fock.mask_of(3) == 0b100);
  CHECK(fock.mask_of(4) == 0b011);
  CHECK(fock.mask_of(7) == 0b111);
  for (int i = 0; i < fock.dim(); ++i) {
    CHECK(fock.index_of(fock.mask_of(i)) == i);
  }
  int total = 0;
  for (int k = 0; k <= 3; ++k) total += static_cast<int>(binomial(3, k));
  CHECK(total == fock.dim());
}

TEST_CASE("split_state basics") {
  Lattice lattice;
  lattice.n_sites = 2;
  lattice.edges = {{0, 1}};
  const Bipartition bipartition = make_bipartition(lattice, {0});

  CHECK(split_state(0b00, bipartition).system == 0);
  CHECK(split_state(0b00, bipartition).bath == 0);
  const SplitMasks split = split_state(0b01, bipartition);
  CHECK(split.system == 1);
  CHECK(split.bath == 0);
}

TEST_CASE("split/combine is a bijection on a 6-site sector") {
  Lattice lattice;
  lattice.n_sites = 6;
  lattice.edges = {{0, 1}};
  const Bipartition bipartition = make_bipartition(lattice, {1, 3, 4});

  const BasisSector sector(6, 3);
  for (int i = 0; i < sector.dim(); ++i) {
    const StateMask state = sector.state(i);
    const SplitMasks masks = split_state(state, bipartition);
    CHECK(std::popcount(masks.system) + std::popcount(masks.bath) == 3);
    CHECK(combine_state(masks, bipartition) == state);
  }
}

TEST_CASE("all states of every small sector round-trip through split") {
  Lattice lattice;
  lattice.n_sites = 12;
  lattice.edges = {{0, 1}};
  const Bipartition bipartition = make_bipartition(lattice, {0, 2, 5, 7, 11});
  for (int n = 0; n <= 12; n += 3) {
    const BasisSector sector(12, n);
    for (int i = 0; i < sector.dim(); ++i) {
      const SplitMasks masks = split_state(sector.state(i), bipartition);
      REQUIRE(combine_state(masks, bipartition) == sector.state(i));
    }
  }
}

TEST_CASE("sector enumeration matches the filter oracle") {
  for (int n : {5, 8}) {
    for (int k = 0; k <= n; ++k) {
      const BasisSector sector(n, k);
      const auto expected = oracle::enumerate_states(n, k);
      REQUIRE(sector.states().size() == expected.size());
      for (std::size_t i = 0; i < expected.size(); ++i) {
        REQUIRE(sector.state(static_cast<int>(i)) == expected[i]);
      }
    }
  }
}
