#include "hcb/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "hcb/errors.hpp"

namespace hcb {
namespace {

// Least-squares polynomial fit of (x, y) with x pre-mapped to [-1, 1].
RealVector fit_polynomial(const RealVector& x, const RealVector& y, int degree) {
  RealMatrix vandermonde(x.size(), degree + 1);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double power = 1.0;
    for (int d = 0; d <= degree; ++d) {
      vandermonde(i, d) = power;
      power *= x(i);
    }
  }
  Eigen::ColPivHouseholderQR<RealMatrix> qr(vandermonde);
  if (qr.rank() < degree + 1) {
    throw NumericalError("unfold_and_spacings: degenerate staircase fit");
  }
  return qr.solve(y);
}

double eval_polynomial(const RealVector& coeffs, double x) {
  double value = 0.0;
  for (Eigen::Index d = coeffs.size() - 1; d >= 0; --d) value = value * x + coeffs(d);
  return value;
}

double ks_distance(const RealVector& sorted_samples, double (*cdf)(double)) {
  const auto n = static_cast<double>(sorted_samples.size());
  double d = 0.0;
  for (Eigen::Index i = 0; i < sorted_samples.size(); ++i) {
    const double f = cdf(sorted_samples(i));
    d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / n - f));
    d = std::max(d, std::abs(static_cast<double>(i) / n - f));
  }
  return d;
}

}  // namespace

SpectralDecomposition diagonalize(const SparseOperator& op, int dense_guard) {
  if (op.dim > dense_guard) {
    throw GuardError("diagonalize: dimension " + std::to_string(op.dim) +
                     " exceeds the dense guard " + std::to_string(dense_guard));
  }
  if (op.dim == 0) throw ValidationError("diagonalize: empty operator");
  for (const auto& e : op.entries) {
    if (e.row > e.col) throw ValidationError("diagonalize: lower-triangle entry in operator");
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(op.to_dense());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("diagonalize: eigensolver failed to converge");
  }
  SpectralDecomposition out;
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  out.basis_tag = op.basis_tag;
  return out;
}

SpacingStatistics unfold_and_spacings(const RealVector& values, int poly_degree, double edge_trim,
                                      int n_bins) {
  if (values.size() < 100) {
    throw ValidationError("unfold_and_spacings: need at least 100 levels, got " +
                          std::to_string(values.size()));
  }
  if (poly_degree < 3) throw ValidationError("unfold_and_spacings: poly_degree must be >= 3");
  if (edge_trim < 0.0 || edge_trim >= 0.5) {
    throw ValidationError("unfold_and_spacings: edge_trim must be in [0, 0.5)");
  }

  RealVector sorted = values;
  std::sort(sorted.data(), sorted.data() + sorted.size());

  const auto n = sorted.size();
  const auto cut = static_cast<Eigen::Index>(edge_trim * static_cast<double>(n));
  const Eigen::Index kept = n - 2 * cut;
  if (kept < poly_degree + 2) throw ValidationError("unfold_and_spacings: too few kept levels");

  const double e_low = sorted(cut);
  const double e_high = sorted(n - cut - 1);
  if (!(e_high > e_low)) {
    throw NumericalError("unfold_and_spacings: spectrum has no spread after trimming");
  }

  // Staircase points (E_k, k + 1/2) on the normalized energy axis.
  RealVector x(kept);
  RealVector y(kept);
  for (Eigen::Index i = 0; i < kept; ++i) {
    x(i) = 2.0 * (sorted(cut + i) - e_low) / (e_high - e_low) - 1.0;
    y(i) = static_cast<double>(i) + 0.5;
  }
  const RealVector coeffs = fit_polynomial(x, y, poly_degree);

  SpacingStatistics stats;
  stats.levels_used = static_cast<int>(kept);
  stats.spacings.resize(kept - 1);
  double previous = eval_polynomial(coeffs, x(0));
  for (Eigen::Index i = 1; i < kept; ++i) {
    const double current = eval_polynomial(coeffs, x(i));
    stats.spacings(i - 1) = current - previous;
    previous = current;
  }

  RealVector sorted_spacings = stats.spacings;
  std::sort(sorted_spacings.data(), sorted_spacings.data() + sorted_spacings.size());
  stats.ks_wigner = ks_distance(sorted_spacings, &wigner_cdf);
  stats.ks_poisson = ks_distance(sorted_spacings, &poisson_cdf);

  if (n_bins < 1) throw ValidationError("unfold_and_spacings: n_bins must be positive");
  const double s_max = std::max(1.0, sorted_spacings(sorted_spacings.size() - 1));
  stats.bin_edges.resize(n_bins + 1);
  stats.densities = RealVector::Zero(n_bins);
  const double width = s_max / n_bins;
  for (int b = 0; b <= n_bins; ++b) stats.bin_edges(b) = b * width;
  for (Eigen::Index i = 0; i < stats.spacings.size(); ++i) {
    const double s = stats.spacings(i);
    if (s < 0.0) continue;
    const int b = std::min(n_bins - 1, static_cast<int>(s / width));
    stats.densities(b) += 1.0;
  }
  stats.densities /= static_cast<double>(stats.spacings.size()) * width;
  return stats;
}

double wigner_pdf(double s) {
  if (s < 0.0) throw ValidationError("wigner_pdf: negative spacing");
  return 0.5 * M_PI * s * std::exp(-0.25 * M_PI * s * s);
}

double poisson_pdf(double s) {
  if (s < 0.0) throw ValidationError("poisson_pdf: negative spacing");
  return std::exp(-s);
}

double wigner_cdf(double s) { return s <= 0.0 ? 0.0 : 1.0 - std::exp(-0.25 * M_PI * s * s); }

double poisson_cdf(double s) { return s <= 0.0 ? 0.0 : 1.0 - std::exp(-s); }

}  // namespace hcb
