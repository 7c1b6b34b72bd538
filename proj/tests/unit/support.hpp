#pragma once

// Independent reference computations for the unit tests. Everything here uses
// Eigen's own solvers, never the LAPACK-backed kernels under test.

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <vector>

#include "uhlfid/states.hpp"

namespace uhlfid::test {

inline ComplexMatrix diag(std::initializer_list<Complex> d) {
  ComplexVector v(static_cast<Index>(d.size()));
  Index i = 0;
  for (const auto& x : d) v(i++) = x;
  return v.asDiagonal();
}

inline ComplexMatrix pauli_x() {
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

inline ComplexMatrix random_hermitian(Index n, StateSeed seed) {
  GaussianSource src(seed);
  const ComplexMatrix g = ginibre(n, n, src);
  return g + g.adjoint();
}

/// Eigenvalues below this fraction of the largest are taken as exact zeros,
/// so rank-deficient inputs do not pick up √(rounding) ≈ 1e-8 terms.
inline constexpr double kOracleNullRatio = 1e-13;

inline RealVector clamped_sqrt(const RealVector& w) {
  const double cut = kOracleNullRatio * std::max(w.cwiseAbs().maxCoeff(), 1e-300);
  return w.unaryExpr([cut](double x) { return x <= cut ? 0.0 : std::sqrt(x); });
}

inline ComplexMatrix eigen_sqrt_psd(const ComplexMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (a + a.adjoint()));
  const RealVector w = clamped_sqrt(es.eigenvalues());
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

/// (Tr √(√ρ σ √ρ))² with Eigen's Hermitian solver.
inline double oracle_fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  const ComplexMatrix s = eigen_sqrt_psd(rho);
  const ComplexMatrix m = s * sigma * s;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (m + m.adjoint()));
  const double t = clamped_sqrt(es.eigenvalues()).sum();
  return t * t;
}

/// Qubit closed form: Tr(ρσ) + 2√(det ρ · det σ).
inline double qubit_fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  const double overlap = (rho * sigma).trace().real();
  const double dr = rho.determinant().real();
  const double ds = sigma.determinant().real();
  return overlap + 2.0 * std::sqrt(std::max(dr * ds, 0.0));
}

inline std::vector<double> sorted_real(const ComplexVector& v) {
  std::vector<double> out(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v(i).real();
  std::sort(out.begin(), out.end());
  return out;
}

inline double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return a.size() == b.size() ? d : INFINITY;
}

}  // namespace uhlfid::test
