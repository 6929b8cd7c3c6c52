#pragma once

#include <complex>
#include <cstdint>
#include <Eigen/Dense>

namespace hcb {

using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

// Occupation bitmask, one bit per site. Site cap of 63 keeps this in a word.
using StateMask = std::uint64_t;

inline constexpr int kMaxSites = 63;

// Real-matrix times complex operand, via the real/imag split (Eigen has no
// implicit mixed-scalar products).
template <typename RealExpr, typename ComplexExpr>
auto real_complex_product(const RealExpr& m, const ComplexExpr& v) {
  Eigen::Matrix<Complex, Eigen::Dynamic, ComplexExpr::ColsAtCompileTime> out(m.rows(), v.cols());
  out.real() = m * v.real();
  out.imag() = m * v.imag();
  return out;
}

template <typename ComplexExpr, typename RealExpr>
ComplexMatrix complex_real_product(const ComplexExpr& v, const RealExpr& m) {
  ComplexMatrix out(v.rows(), m.cols());
  out.real() = v.real() * m;
  out.imag() = v.imag() * m;
  return out;
}

// Operations that expand to dense dim x dim storage refuse larger problems
// unless the caller raises the cap explicitly.
inline constexpr int kDefaultDenseGuard = 25000;

}  // namespace hcb
