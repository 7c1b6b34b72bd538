#pragma once

// Dense complex-matrix kernels. Decompositions are delegated to LAPACK; the
// functions below define the contracts the rest of the library relies on.

#include <complex>

#include <Eigen/Dense>

#include "uhlfid/errors.hpp"

namespace uhlfid {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Absolute tolerance used when callers do not supply one.
inline constexpr double kDefaultTol = 1e-10;

struct HermEigResult {
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // columns, orthonormal
};

/// Largest entry magnitude, ‖A‖_max.
double max_abs(const ComplexMatrix& a);

/// ‖A − A†‖_max.
double hermiticity_defect(const ComplexMatrix& a);

/// Throws DimensionError unless `a` is square and non-empty, DomainError on NaN/Inf.
void require_square_finite(const ComplexMatrix& a, const char* what);

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
Complex trace(const ComplexMatrix& a);

/// Eigendecomposition of a Hermitian matrix. Only the lower triangle is read
/// after the Hermiticity check `‖A − A†‖_max ≤ tol·max(1, ‖A‖_max)` passes.
HermEigResult herm_eig(const ComplexMatrix& a, double tol = kDefaultTol);

/// Eigenvalues of a general square matrix via Hessenberg reduction and the
/// Schur QR iteration (no Schur vectors are accumulated). The returned
/// vector is ordered by descending real part, ties broken by descending
/// imaginary part.
ComplexVector general_eigenvalues(const ComplexMatrix& a);

/// Sorts in place into the ordering used by general_eigenvalues.
void sort_spectrum(ComplexVector& eigenvalues);

/// Principal square root of a Hermitian PSD matrix. Eigenvalues in
/// [−tol·s, 0) with s = max(1, ‖A‖_max) are clamped to zero.
ComplexMatrix psd_sqrt(const ComplexMatrix& a, double tol = kDefaultTol);

/// A^x for Hermitian PSD A and x in [0, 1]; A^0 is the identity.
ComplexMatrix psd_power(const ComplexMatrix& a, double x, double tol = kDefaultTol);

/// Principal square root of a matrix whose spectrum is (numerically) real and
/// non-negative, from the complex Schur form and the upper-triangular
/// square-root recurrence.
ComplexMatrix schur_sqrt(const ComplexMatrix& a, double tol = kDefaultTol);

/// Singular values in descending order.
RealVector singular_values(const ComplexMatrix& a);

/// Drazin (here also Moore–Penrose) pseudo-inverse of a Hermitian PSD matrix.
/// Eigenvalues at or below tol·λ_max·n are treated as zero.
ComplexMatrix drazin_pinv_psd(const ComplexMatrix& a, double tol = kDefaultTol);

namespace detail {

/// Result of applying a scalar function to the spectrum of a PSD matrix.
/// Eigenvalues with modulus at or below kRoundingFloorFactor·ε·‖A‖ are
/// treated as exact zeros before any square root is taken. Rounding noise on
/// a zero eigenvalue is O(ε·‖A‖), and its square root would otherwise enter
/// a trace at O(√ε).
inline constexpr double kRoundingFloorFactor = 256.0;

double rounding_floor(double scale);

struct PsdFunctionResult {
  ComplexMatrix value;
  double clamped_mass = 0.0;  // Σ |λ_i| over the negative eigenvalues set to zero
};

PsdFunctionResult psd_sqrt_with_mass(const ComplexMatrix& a, double tol);

/// Upper-triangular Schur factor and accumulated unitary, A = Q·T·Q†.
struct SchurForm {
  ComplexMatrix t;
  ComplexMatrix q;
};

/// With trailing_radius ≥ 0, eigenvalues of modulus ≤ trailing_radius are
/// ordered last on the diagonal of T.
SchurForm complex_schur(const ComplexMatrix& a, double trailing_radius = -1.0);

struct SchurSqrtResult {
  ComplexMatrix root;
  double clamped_mass = 0.0;  // Σ |Re λ| over eigenvalues mapped to zero
};

SchurSqrtResult schur_sqrt_with_mass(const ComplexMatrix& a, double tol);

}  // namespace detail

}  // namespace uhlfid
