#include "uhlfid/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

// LAPACKE's complex types are layout-compatible with std::complex.
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace uhlfid {

namespace {

lapack_complex_double* lapack_ptr(ComplexMatrix& a) { return a.data(); }
lapack_complex_double* lapack_ptr(ComplexVector& v) { return v.data(); }

lapack_int to_lapack(Index n) { return static_cast<lapack_int>(n); }

double scale_of(const ComplexMatrix& a) { return std::max(1.0, max_abs(a)); }

std::string format_value(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void require_hermitian(const ComplexMatrix& a, double tol, const char* what) {
  const double defect = hermiticity_defect(a);
  const double bound = tol * scale_of(a);
  if (!(defect <= bound)) {
    throw HermiticityError(std::string(what) + ": ‖A − A†‖_max = " + format_value(defect) +
                           " exceeds " + format_value(bound));
  }
}

// Hermitian eigensolve without the precondition check.
HermEigResult herm_eig_unchecked(const ComplexMatrix& a) {
  const Index n = a.rows();
  ComplexMatrix work = a;
  HermEigResult out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_zheevr(
      LAPACK_COL_MAJOR, 'V', 'A', 'L', to_lapack(n), lapack_ptr(work), to_lapack(n), 0.0, 0.0, 0,
      0, 0.0, &found, out.eigenvalues.data(), lapack_ptr(out.eigenvectors), to_lapack(n),
      support.data());
  if (info != 0 || found != n) {
    throw ConvergenceError("Hermitian eigensolver failed (zheevr info = " + std::to_string(info) +
                           ")");
  }
  return out;
}

// zgees takes a plain function pointer; the radius is passed alongside.
thread_local double schur_select_radius = 0.0;

lapack_logical outside_select_radius(const lapack_complex_double* lambda) {
  return std::abs(*lambda) > schur_select_radius ? 1 : 0;
}

// V·diag(f)·V†, symmetrized so the result is Hermitian to the last bit.
ComplexMatrix spectral_synthesis(const ComplexMatrix& vectors, const RealVector& f) {
  const ComplexMatrix scaled = vectors * f.asDiagonal();
  ComplexMatrix out = scaled * vectors.adjoint();
  const ComplexMatrix adj = out.adjoint();
  out = (out + adj) * 0.5;
  return out;
}

// Eigendecomposition of a PSD matrix with the negativity contract applied:
// λ ≥ −tol·s passes and negative values are reported as clamped mass.
struct ClampedSpectrum {
  HermEigResult eig;
  RealVector clamped;
  double clamped_mass = 0.0;
};

ClampedSpectrum clamped_psd_spectrum(const ComplexMatrix& a, double tol, const char* what) {
  require_square_finite(a, what);
  require_hermitian(a, tol, what);
  ClampedSpectrum out{herm_eig_unchecked(a), {}, 0.0};
  const double floor = -tol * scale_of(a);
  const double min_eig = out.eig.eigenvalues.minCoeff();
  if (min_eig < floor) {
    throw NegativityError(std::string(what) + ": minimum eigenvalue " + format_value(min_eig) +
                          " is below −" + format_value(-floor));
  }
  const RealVector& l = out.eig.eigenvalues;
  const double zero_floor =
      detail::rounding_floor(std::max(std::abs(l(0)), std::abs(l(l.size() - 1))));
  out.clamped = l;
  for (Index i = 0; i < out.clamped.size(); ++i) {
    if (out.clamped(i) < 0.0) out.clamped_mass += -out.clamped(i);
    if (out.clamped(i) <= zero_floor) out.clamped(i) = 0.0;
  }
  return out;
}

}  // namespace

double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

void require_square_finite(const ComplexMatrix& a, const char* what) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  if (!a.allFinite()) {
    throw DomainError(std::string(what) + ": matrix has non-finite entries");
  }
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.cols() != b.rows()) {
    throw DimensionError("matmul: dimensions " + std::to_string(a.rows()) + " and " +
                         std::to_string(b.rows()) + " differ");
  }
  ComplexMatrix out(a.rows(), b.cols());
  out.noalias() = a * b;
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Index ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
  ComplexMatrix out(ra * rb, ca * cb);
  for (Index i = 0; i < ra; ++i) {
    for (Index j = 0; j < ca; ++j) {
      out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    }
  }
  return out;
}

Complex trace(const ComplexMatrix& a) { return a.diagonal().sum(); }

HermEigResult herm_eig(const ComplexMatrix& a, double tol) {
  require_square_finite(a, "herm_eig");
  require_hermitian(a, tol, "herm_eig");
  return herm_eig_unchecked(a);
}

void sort_spectrum(ComplexVector& eigenvalues) {
  std::sort(eigenvalues.data(), eigenvalues.data() + eigenvalues.size(),
            [](const Complex& x, const Complex& y) {
              if (x.real() != y.real()) return x.real() > y.real();
              return x.imag() > y.imag();
            });
}

ComplexVector general_eigenvalues(const ComplexMatrix& a) {
  require_square_finite(a, "general_eigenvalues");
  const Index n = a.rows();
  ComplexMatrix work = a;
  ComplexVector w(n);
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', to_lapack(n), lapack_ptr(work),
                                        to_lapack(n), lapack_ptr(w), nullptr, 1, nullptr, 1);
  if (info != 0) {
    throw ConvergenceError("general eigensolver failed (zgeev info = " + std::to_string(info) +
                           ")");
  }
  sort_spectrum(w);
  return w;
}

namespace detail {

double rounding_floor(double scale) {
  return kRoundingFloorFactor * std::numeric_limits<double>::epsilon() * scale;
}

PsdFunctionResult psd_sqrt_with_mass(const ComplexMatrix& a, double tol) {
  ClampedSpectrum s = clamped_psd_spectrum(a, tol, "psd_sqrt");
  return {spectral_synthesis(s.eig.eigenvectors, s.clamped.cwiseSqrt()), s.clamped_mass};
}

SchurForm complex_schur(const ComplexMatrix& a, double trailing_radius) {
  require_square_finite(a, "complex_schur");
  const Index n = a.rows();
  SchurForm out{a, ComplexMatrix(n, n)};
  ComplexVector w(n);
  lapack_int selected = 0;
  const bool reorder = trailing_radius >= 0.0;
  schur_select_radius = trailing_radius;
  const lapack_int info = LAPACKE_zgees(
      LAPACK_COL_MAJOR, 'V', reorder ? 'S' : 'N', reorder ? &outside_select_radius : nullptr,
      to_lapack(n), lapack_ptr(out.t), to_lapack(n), &selected, lapack_ptr(w),
      lapack_ptr(out.q), to_lapack(n));
  if (info != 0) {
    throw ConvergenceError("Schur decomposition failed (zgees info = " + std::to_string(info) +
                           ")");
  }
  out.t.triangularView<Eigen::StrictlyLower>().setZero();
  return out;
}

}  // namespace detail

ComplexMatrix psd_sqrt(const ComplexMatrix& a, double tol) {
  return detail::psd_sqrt_with_mass(a, tol).value;
}

ComplexMatrix psd_power(const ComplexMatrix& a, double x, double tol) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("psd_power: exponent " + format_value(x) + " is outside [0, 1]");
  }
  ClampedSpectrum s = clamped_psd_spectrum(a, tol, "psd_power");
  if (x == 0.0) {
    return ComplexMatrix::Identity(a.rows(), a.cols());
  }
  const RealVector f = s.clamped.unaryExpr([x](double l) { return l == 0.0 ? 0.0 : std::pow(l, x); });
  return spectral_synthesis(s.eig.eigenvectors, f);
}

namespace detail {

SchurSqrtResult schur_sqrt_with_mass(const ComplexMatrix& a, double tol) {
  require_square_finite(a, "schur_sqrt");
  const double scale = scale_of(a);
  const double bound = tol * scale;
  const Index n = a.rows();
  // Eigenvalues within rounding of zero are moved to a trailing block and
  // treated as exact zeros.
  const double zero_floor = rounding_floor(a.norm());
  SchurForm schur = complex_schur(a, zero_floor);
  const ComplexMatrix& t = schur.t;

  ComplexMatrix r = ComplexMatrix::Zero(n, n);
  double clamped_mass = 0.0;
  for (Index i = 0; i < n; ++i) {
    const Complex lambda = t(i, i);
    if (lambda.real() < -bound || std::abs(lambda.imag()) > bound) {
      std::ostringstream os;
      os << "schur_sqrt: eigenvalue " << lambda << " leaves the admissible region (tolerance "
         << bound << ")";
      throw SpectrumError(os.str());
    }
    if (lambda.real() < 0.0) clamped_mass += -lambda.real();
    if (lambda.real() < 0.0 || std::abs(lambda) <= zero_floor) {
      r(i, i) = 0.0;
    } else {
      r(i, i) = std::sqrt(lambda);
    }
  }

  // Column-wise recurrence: R_ij (R_ii + R_jj) = T_ij − Σ_{i<k<j} R_ik R_kj.
  const double pivot_floor = std::numeric_limits<double>::epsilon() * std::sqrt(scale);
  for (Index j = 1; j < n; ++j) {
    for (Index i = j - 1; i >= 0; --i) {
      Complex num = t(i, j);
      for (Index k = i + 1; k < j; ++k) num -= r(i, k) * r(k, j);
      const Complex pivot = r(i, i) + r(j, j);
      if (std::abs(pivot) <= pivot_floor) {
        if (std::abs(num) > bound) {
          std::ostringstream os;
          os << "schur_sqrt: singular pivot at (" << i << ", " << j << ") with residual "
             << std::abs(num) << "; no principal square root";
          throw SpectrumError(os.str());
        }
        r(i, j) = 0.0;
      } else {
        r(i, j) = num / pivot;
      }
    }
  }
  return {schur.q * r * schur.q.adjoint(), clamped_mass};
}

}  // namespace detail

ComplexMatrix schur_sqrt(const ComplexMatrix& a, double tol) {
  return detail::schur_sqrt_with_mass(a, tol).root;
}

RealVector singular_values(const ComplexMatrix& a) {
  require_square_finite(a, "singular_values");
  const Index n = a.rows();
  ComplexMatrix work = a;
  RealVector s(n);
  lapack_complex_double dummy{};
  const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', to_lapack(n), to_lapack(n),
                                         lapack_ptr(work), to_lapack(n), s.data(), &dummy, 1,
                                         &dummy, 1);
  if (info != 0) {
    throw ConvergenceError("singular value decomposition failed (zgesdd info = " +
                           std::to_string(info) + ")");
  }
  return s;
}

ComplexMatrix drazin_pinv_psd(const ComplexMatrix& a, double tol) {
  ClampedSpectrum s = clamped_psd_spectrum(a, tol, "drazin_pinv_psd");
  const double rank_tol = tol * s.clamped.maxCoeff() * static_cast<double>(a.rows());
  const RealVector f = s.clamped.unaryExpr([rank_tol](double l) { return l > rank_tol ? 1.0 / l : 0.0; });
  return spectral_synthesis(s.eig.eigenvectors, f);
}

}  // namespace uhlfid
