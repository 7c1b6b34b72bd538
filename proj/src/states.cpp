#include "uhlfid/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace uhlfid {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

StateSeed StateSeed::child(std::uint64_t tag) const {
  return {master_seed, mix64(stream_id ^ mix64(tag))};
}

GaussianSource::GaussianSource(StateSeed seed)
    : engine_(mix64(seed.master_seed ^ mix64(seed.stream_id + kGolden))) {}

double GaussianSource::uniform() {
  // (k + 1)·2^-53 with k uniform in [0, 2^53): never zero.
  return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double GaussianSource::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double radius = std::sqrt(-2.0 * std::log(uniform()));
  const double angle = 2.0 * std::numbers::pi * uniform();
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Complex GaussianSource::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

ComplexMatrix ginibre(Index rows, Index cols, GaussianSource& source) {
  ComplexMatrix g(rows, cols);
  // Row-major fill so the draw order matches the documented entry order.
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) g(i, j) = source.complex_normal();
  }
  return g;
}

DensityMatrix validate(const ComplexMatrix& a, double tol) {
  require_square_finite(a, "validate");
  const Index n = a.rows();
  const double defect = hermiticity_defect(a);
  if (!(defect <= tol)) {
    throw HermiticityError("‖ρ − ρ†‖_max = " + fmt(defect) + " exceeds tolerance " + fmt(tol));
  }
  const Complex tr = trace(a);
  const double trace_defect = std::abs(tr - Complex(1.0));
  if (!(trace_defect <= tol * static_cast<double>(n))) {
    throw TraceError("trace " + fmt(tr.real()) + (tr.imag() != 0.0 ? " + " + fmt(tr.imag()) + "i" : "") +
                     " differs from 1 by " + fmt(trace_defect));
  }
  const HermEigResult eig = herm_eig(a, tol);
  const double min_eig = eig.eigenvalues.minCoeff();
  if (min_eig < -tol) {
    throw NegativityError("minimum eigenvalue " + fmt(min_eig) + " is below −" + fmt(tol));
  }
  const double rank_threshold = tol * static_cast<double>(n);
  const Index rank = std::max<Index>(1, (eig.eigenvalues.array() > rank_threshold).count());
  return DensityMatrix(a, rank, tol);
}

DensityMatrix pure_state(const ComplexVector& v) {
  const double norm = v.norm();
  if (v.size() == 0 || !(norm > 0.0) || !std::isfinite(norm)) {
    throw ZeroVectorError("pure_state requires a non-zero finite vector");
  }
  const ComplexVector psi = v / norm;
  ComplexMatrix rho = psi * psi.adjoint();
  return validate(rho);
}

DensityMatrix maximally_mixed(Index n) {
  if (n < 1) throw DomainError("maximally_mixed: dimension must be positive");
  ComplexMatrix rho = ComplexMatrix::Identity(n, n) / static_cast<double>(n);
  return validate(rho);
}

DensityMatrix random_density(Index n, Index rank, StateSeed seed) {
  if (n < 1 || rank < 1 || rank > n) {
    throw DomainError("random_density: rank " + std::to_string(rank) + " outside [1, " +
                      std::to_string(n) + "]");
  }
  GaussianSource source(seed);
  const ComplexMatrix g = ginibre(n, rank, source);
  ComplexMatrix rho = g * g.adjoint();
  const ComplexMatrix adj = rho.adjoint();
  rho = (rho + adj) * 0.5;
  rho /= trace(rho).real();
  return validate(rho);
}

ComplexMatrix random_unitary(Index n, StateSeed seed) {
  if (n < 1) throw DomainError("random_unitary: dimension must be positive");
  GaussianSource source(seed);
  const ComplexMatrix g = ginibre(n, n, source);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

DensityMatrix conjugate(const ComplexMatrix& u, const DensityMatrix& rho) {
  require_square_finite(u, "conjugate");
  if (u.rows() != rho.dim()) {
    throw DimensionError("conjugate: unitary has dimension " + std::to_string(u.rows()) +
                         ", state has " + std::to_string(rho.dim()));
  }
  const Index n = u.rows();
  const double defect = max_abs(u.adjoint() * u - ComplexMatrix::Identity(n, n));
  if (!(defect <= 1e-8)) {
    throw UnitarityError("‖U†U − I‖_max = " + fmt(defect) + " exceeds 1e-8");
  }
  ComplexMatrix out = u * rho.mat() * u.adjoint();
  const ComplexMatrix adj = out.adjoint();
  out = (out + adj) * 0.5;
  return validate(out, rho.validation_tol());
}

DensityMatrix tensor(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  return validate(kron(rho1.mat(), rho2.mat()),
                  std::max(rho1.validation_tol(), rho2.validation_tol()));
}

}  // namespace uhlfid
