#pragma once

#include <string>
#include <vector>

#include "hcb/hamiltonian.hpp"
#include "hcb/types.hpp"

namespace hcb {

// Full eigensystem of a real symmetric operator. values ascending, vectors
// orthonormal columns aligned with values.
struct SpectralDecomposition {
  RealVector values;
  RealMatrix vectors;
  std::string basis_tag;

  int dim() const { return static_cast<int>(values.size()); }
  double spread() const { return values(dim() - 1) - values(0); }
};

SpectralDecomposition diagonalize(const SparseOperator& op, int dense_guard = kDefaultDenseGuard);

// Unfolded nearest-neighbor spacing statistics of a spectrum.
struct SpacingStatistics {
  RealVector spacings;      // unfolded, mean ~= 1
  RealVector bin_edges;     // histogram over [0, s_max]
  RealVector densities;     // normalized to unit area over the binned range
  double ks_wigner = 0.0;   // Kolmogorov-Smirnov distance to the Wigner surmise
  double ks_poisson = 0.0;  // and to the Poisson (exponential) law
  int levels_used = 0;      // levels kept after edge truncation
};

// Cumulative staircase fitted by a least-squares polynomial after trimming
// edge_trim of the levels at each spectral edge; spacings are differences of
// the fitted (unfolded) levels.
SpacingStatistics unfold_and_spacings(const RealVector& values, int poly_degree = 7,
                                      double edge_trim = 0.02, int n_bins = 40);

double wigner_pdf(double s);
double poisson_pdf(double s);
double wigner_cdf(double s);
double poisson_cdf(double s);

}  // namespace hcb
