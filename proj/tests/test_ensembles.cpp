#include <doctest.h>

#include <cmath>
#include <random>

#include "hcb/ensembles.hpp"
#include "hcb/errors.hpp"
#include "hcb/hamiltonian.hpp"
#include "hcb/lattice.hpp"
#include "oracles.hpp"

using namespace hcb;

namespace {

SpectralDecomposition eig_of_dense(const RealMatrix& m, const std::string& tag) {
  SparseOperator op;
  op.dim = static_cast<int>(m.rows());
  op.basis_tag = tag;
  for (int r = 0; r < op.dim; ++r) {
    for (int c = r; c < op.dim; ++c) {
      if (m(r, c) != 0.0) op.entries.push_back({r, c, m(r, c)});
    }
  }
  return diagonalize(op);
}

SpectralDecomposition two_level() {
  RealMatrix m(2, 2);
  m << -1, 0, 0, 1;
  return eig_of_dense(m, "two-level");
}

}  // namespace

TEST_CASE("expanding an eigenvector gives a unit coefficient vector") {
  std::mt19937 rng(11);
  const RealMatrix m = oracle::random_symmetric(12, rng);
  const SpectralDecomposition eig = eig_of_dense(m, "t");
  const ComplexVector psi = eig.vectors.col(3).cast<Complex>();
  const OverlapVector overlaps = expand_initial(psi, eig);
  CHECK(std::abs(overlaps.coefficients(3)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(overlaps.coefficients.cwiseAbs2().sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(overlaps.energy == doctest::Approx(eig.values(3)).epsilon(1e-12));
}

TEST_CASE("equal superposition of two eigenstates splits the weight") {
  std::mt19937 rng(12);
  const RealMatrix m = oracle::random_symmetric(8, rng);
  const SpectralDecomposition eig = eig_of_dense(m, "t");
  const ComplexVector psi =
      ((eig.vectors.col(0) + eig.vectors.col(1)) / std::sqrt(2.0)).cast<Complex>();
  const OverlapVector overlaps = expand_initial(psi, eig);
  CHECK(std::norm(overlaps.coefficients(0)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::norm(overlaps.coefficients(1)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("random state reconstructs from its overlaps") {
  std::mt19937 rng(13);
  const RealMatrix m = oracle::random_symmetric(50, rng);
  const SpectralDecomposition eig = eig_of_dense(m, "t");
  const ComplexVector psi = oracle::random_state(50, rng);
  const OverlapVector overlaps = expand_initial(psi, eig);
  const ComplexVector rebuilt = real_complex_product(eig.vectors, overlaps.coefficients);
  CHECK((rebuilt - psi).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("expand rejects unnormalized input") {
  const SpectralDecomposition eig = two_level();
  ComplexVector psi(2);
  psi << 1.0, 1.0;
  CHECK_THROWS_AS(expand_initial(psi, eig), ValidationError);
}

TEST_CASE("microcanonical windows: single level and all levels") {
  std::mt19937 rng(14);
  const RealMatrix m = oracle::random_symmetric(10, rng);
  const SpectralDecomposition eig = eig_of_dense(m, "t");

  const DensityMatrix pure = microcanonical(eig, eig.values(4), 1e-9);
  const ComplexMatrix projector =
      eig.vectors.col(4).cast<Complex>() * eig.vectors.col(4).transpose().cast<Complex>();
  CHECK((pure.matrix - projector).cwiseAbs().maxCoeff() < 1e-12);

  const double huge = 10.0 * (eig.values(9) - eig.values(0)) + 1.0;
  const DensityMatrix mixed = microcanonical(eig, 0.5 * (eig.values(0) + eig.values(9)), huge);
  CHECK((mixed.matrix - ComplexMatrix::Identity(10, 10) / 10.0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("empty microcanonical window reports the nearest level") {
  const SpectralDecomposition eig = two_level();
  try {
    microcanonical(eig, 10.0, 0.1);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    CHECK(what.find("nearest level") != std::string::npos);
    CHECK(what.find("1") != std::string::npos);
  }
}

TEST_CASE("canonical at beta = 0 is maximally mixed; large beta projects the ground state") {
  std::mt19937 rng(15);
  const RealMatrix m = oracle::random_symmetric(9, rng);
  const SpectralDecomposition eig = eig_of_dense(m, "t");

  const DensityMatrix mixed = canonical(eig, 0.0);
  CHECK((mixed.matrix - ComplexMatrix::Identity(9, 9) / 9.0).cwiseAbs().maxCoeff() < 1e-12);

  const double beta = 1e3 / eig.spread();
  const DensityMatrix cold = canonical(eig, beta);
  const ComplexMatrix ground =
      eig.vectors.col(0).cast<Complex>() * eig.vectors.col(0).transpose().cast<Complex>();
  CHECK((cold.matrix - ground).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("two-level canonical weights follow the closed form") {
  const SpectralDecomposition eig = two_level();
  const RealVector w = canonical_weights(eig, 1.0);
  const double z = std::exp(1.0) + std::exp(-1.0);
  CHECK(w(0) == doctest::Approx(std::exp(1.0) / z).epsilon(1e-12));
  CHECK(w(1) == doctest::Approx(std::exp(-1.0) / z).epsilon(1e-12));
}

TEST_CASE("solve_beta: symmetric spectrum and the tanh closed form") {
  const SpectralDecomposition eig = two_level();
  CHECK(std::abs(solve_beta(eig, 0.0, 1e-10)) < 1e-8);
  const double beta = solve_beta(eig, -std::tanh(1.0), 1e-12);
  CHECK(beta == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(solve_beta(eig, -1.5, 1e-8), ValidationError);
  CHECK_THROWS_AS(solve_beta(eig, -1.0, 1e-8), ValidationError);
}

TEST_CASE("solve_beta round-trips through the canonical energy") {
  std::mt19937 rng(16);
  for (int trial = 0; trial < 5; ++trial) {
    const RealMatrix m = oracle::random_symmetric(30, rng);
    const SpectralDecomposition eig = eig_of_dense(m, "t");
    std::uniform_real_distribution<double> pick(0.05, 0.95);
    const double e_mean = eig.values.mean();
    const double target = eig.values(0) + pick(rng) * (e_mean - eig.values(0));
    const double beta = solve_beta(eig, target, 1e-9);
    CHECK(canonical_energy(eig, beta) == doctest::Approx(target).epsilon(1e-8));
    CHECK(beta > 0.0);
  }
}

TEST_CASE("canonical energy decreases monotonically in beta") {
  std::mt19937 rng(17);
  const RealMatrix m = oracle::random_symmetric(25, rng);
  const SpectralDecomposition eig = eig_of_dense(m, "t");
  double previous = canonical_energy(eig, -3.0);
  for (double beta = -2.5; beta <= 3.0; beta += 0.5) {
    const double current = canonical_energy(eig, beta);
    CHECK(current < previous);
    previous = current;
  }
}

TEST_CASE("diagonal ensemble basics and the long-time average oracle") {
  std::mt19937 rng(18);
  const RealMatrix m = oracle::random_symmetric(30, rng);
  const SpectralDecomposition eig = eig_of_dense(m, "t");

  OverlapVector unit;
  unit.coefficients = ComplexVector::Zero(30);
  unit.coefficients(7) = 1.0;
  const DensityMatrix projector = diagonal_ensemble(eig, unit);
  const ComplexMatrix expected =
      eig.vectors.col(7).cast<Complex>() * eig.vectors.col(7).transpose().cast<Complex>();
  CHECK((projector.matrix - expected).cwiseAbs().maxCoeff() < 1e-12);

  OverlapVector pair;
  pair.coefficients = ComplexVector::Zero(30);
  pair.coefficients(2) = 1.0 / std::sqrt(2.0);
  pair.coefficients(5) = 1.0 / std::sqrt(2.0);
  const DensityMatrix two = diagonal_ensemble(eig, pair);
  CHECK(two.matrix.trace().real() == doctest::Approx(1.0).epsilon(1e-12));

  // Time-average oracle: rho(t) averaged over 1e4 uniform samples in [0, 1e4].
  const ComplexVector psi = oracle::random_state(30, rng);
  const OverlapVector overlaps = expand_initial(psi, eig);
  ComplexMatrix averaged = ComplexMatrix::Zero(30, 30);
  const int samples = 10000;
  for (int k = 0; k < samples; ++k) {
    const double t = 1e4 * static_cast<double>(k) / samples;
    ComplexVector c(30);
    for (int a = 0; a < 30; ++a) {
      c(a) = overlaps.coefficients(a) * std::polar(1.0, -eig.values(a) * t);
    }
    const ComplexVector psi_t = real_complex_product(eig.vectors, c);
    averaged += psi_t * psi_t.adjoint();
  }
  averaged /= static_cast<double>(samples);
  const DensityMatrix diag = diagonal_ensemble(eig, overlaps);
  CHECK((averaged - diag.matrix).squaredNorm() < 1e-3);
}

TEST_CASE("thermal subsystem limits and the two-site closed form") {
  // Single site: H_S = 0 on dim 2.
  Lattice pair_lattice;
  pair_lattice.n_sites = 2;
  pair_lattice.edges = {{0, 1}};
  const Bipartition single = make_bipartition(pair_lattice, {0});
  const SparseOperator h_single =
      subsystem_hamiltonian(pair_lattice, single, SubsystemFockSpace(single.system_sites));
  const DensityMatrix flat = thermal_subsystem(h_single, 5.0);
  CHECK(flat.matrix(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(flat.matrix(1, 1).real() == doctest::Approx(0.5).epsilon(1e-12));

  // Two sites with one edge, beta = 1, J = 1, U = 0.1.
  Lattice triple;
  triple.n_sites = 3;
  triple.edges = {{0, 1}, {1, 2}};
  triple.hopping_j = 1.0;
  triple.interaction_u = 0.1;
  const Bipartition cut = make_bipartition(triple, {0, 1});
  const SparseOperator h_pair =
      subsystem_hamiltonian(triple, cut, SubsystemFockSpace(cut.system_sites));
  const DensityMatrix gibbs = thermal_subsystem(h_pair, 1.0);
  const double z = 1.0 + std::exp(1.0) + std::exp(-1.0) + std::exp(-0.1);
  CHECK(gibbs.matrix(0, 0).real() == doctest::Approx(1.0 / z).epsilon(1e-12));
  CHECK(gibbs.matrix(3, 3).real() == doctest::Approx(std::exp(-0.1) / z).epsilon(1e-12));
  // The one-particle block carries weight (e^{+1} + e^{-1})/z split between
  // the two bonding/antibonding states.
  const double block1 = (gibbs.matrix(1, 1) + gibbs.matrix(2, 2)).real();
  CHECK(block1 == doctest::Approx((std::exp(1.0) + std::exp(-1.0)) / z).epsilon(1e-12));

  // beta = 0 is maximally mixed on the full Fock space.
  const DensityMatrix hot = thermal_subsystem(h_pair, 0.0);
  CHECK((hot.matrix - ComplexMatrix::Identity(4, 4) * 0.25).cwiseAbs().maxCoeff() < 1e-12);

  // Grand-canonical option: mu shifts every n-particle block by e^{beta mu n}.
  const double mu = 0.3;
  const DensityMatrix grand = thermal_subsystem(h_pair, 1.0, mu);
  const double zg = 1.0 + (std::exp(1.0) + std::exp(-1.0)) * std::exp(mu) +
                    std::exp(-0.1) * std::exp(2.0 * mu);
  CHECK(grand.matrix(0, 0).real() == doctest::Approx(1.0 / zg).epsilon(1e-12));
  CHECK(grand.matrix(3, 3).real() ==
        doctest::Approx(std::exp(-0.1 + 2.0 * mu) / zg).epsilon(1e-12));
}

TEST_CASE("ensemble constructors produce valid density matrices that commute with H") {
  std::mt19937 rng(19);
  const RealMatrix m = oracle::random_symmetric(20, rng);
  const SpectralDecomposition eig = eig_of_dense(m, "t");
  const ComplexVector psi = oracle::random_state(20, rng);
  const OverlapVector overlaps = expand_initial(psi, eig);

  const DensityMatrix micro = microcanonical(eig, eig.values(10), 0.5);
  const DensityMatrix cano = canonical(eig, 0.7);
  const DensityMatrix gibbs = diagonal_ensemble(eig, overlaps);
  for (const DensityMatrix* rho : {&micro, &cano, &gibbs}) {
    rho->validate(1e-10);
  }
  const ComplexMatrix hc = m.cast<Complex>();
  const double h_scale = m.cwiseAbs().maxCoeff();
  CHECK((micro.matrix * hc - hc * micro.matrix).cwiseAbs().maxCoeff() <= 1e-8 * h_scale);
  CHECK((gibbs.matrix * hc - hc * gibbs.matrix).cwiseAbs().maxCoeff() <= 1e-8 * h_scale);
}
