#include "uhlfid/fidelity.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace uhlfid {

namespace {

// Band in which a raw fidelity is accepted before clipping to [0, 1].
constexpr double kRangeSlack = 1e-9;
// Largest |Im| tolerated on the trace of the Schur square root.
constexpr double kMaxImagTrace = 1e-8;
// Per-dimension bound on |Im λ| and total bound on clamped negativity for ρσ.
constexpr double kMaxImagPerDim = 1e-8;
constexpr double kMaxClampedMass = 1e-8;

using Clock = std::chrono::steady_clock;

void require_same_dim(const DensityMatrix& rho, const DensityMatrix& sigma, const char* what) {
  if (rho.dim() != sigma.dim()) {
    throw DimensionError(std::string(what) + ": ρ has dimension " + std::to_string(rho.dim()) +
                         ", σ has " + std::to_string(sigma.dim()));
  }
}

double joint_tol(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return std::max(rho.validation_tol(), sigma.validation_tol());
}

// Applies the range invariant and clips the reported value.
void finish(FidelityResult& r, Clock::time_point start) {
  r.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (!(r.raw_value >= -kRangeSlack && r.raw_value <= 1.0 + kRangeSlack)) {
    std::ostringstream os;
    os.precision(17);
    os << method_name(r.method) << ": raw fidelity " << r.raw_value << " is outside [0, 1]";
    throw SpectrumError(os.str());
  }
  r.value = std::clamp(r.raw_value, 0.0, 1.0);
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) {
  const ComplexMatrix adj = a.adjoint();
  return (a + adj) * 0.5;
}

}  // namespace

std::string_view method_name(FidelityMethod method) {
  switch (method) {
    case FidelityMethod::TraceNorm: return "trace-norm";
    case FidelityMethod::Classic: return "classic";
    case FidelityMethod::ProductSqrt: return "product-sqrt";
    case FidelityMethod::ProductEig: return "product-eig";
    case FidelityMethod::Auto: return "auto";
  }
  return "unknown";
}

std::optional<FidelityMethod> parse_method(std::string_view name) {
  for (FidelityMethod m : {FidelityMethod::TraceNorm, FidelityMethod::Classic,
                           FidelityMethod::ProductSqrt, FidelityMethod::ProductEig,
                           FidelityMethod::Auto}) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

FidelityResult fidelity_trace_norm(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma, "fidelity_trace_norm");
  const auto start = Clock::now();
  const double tol = joint_tol(rho, sigma);
  const auto sqrt_rho = detail::psd_sqrt_with_mass(rho.mat(), tol);
  const auto sqrt_sigma = detail::psd_sqrt_with_mass(sigma.mat(), tol);
  const double norm = singular_values(sqrt_rho.value * sqrt_sigma.value).sum();

  FidelityResult r;
  r.method = FidelityMethod::TraceNorm;
  r.raw_value = norm * norm;
  r.clamped_mass = sqrt_rho.clamped_mass + sqrt_sigma.clamped_mass;
  finish(r, start);
  return r;
}

FidelityResult fidelity_classic(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma, "fidelity_classic");
  const auto start = Clock::now();
  const double tol = joint_tol(rho, sigma);
  const auto sqrt_rho = detail::psd_sqrt_with_mass(rho.mat(), tol);
  const ComplexMatrix m = hermitian_part(sqrt_rho.value * sigma.mat() * sqrt_rho.value);
  const auto sqrt_m = detail::psd_sqrt_with_mass(m, tol);
  const double tr = trace(sqrt_m.value).real();

  FidelityResult r;
  r.method = FidelityMethod::Classic;
  r.raw_value = tr * tr;
  r.clamped_mass = sqrt_rho.clamped_mass + sqrt_m.clamped_mass;
  finish(r, start);
  return r;
}

FidelityResult fidelity_product_sqrt(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma, "fidelity_product_sqrt");
  const auto start = Clock::now();
  const auto root = detail::schur_sqrt_with_mass(rho.mat() * sigma.mat(), joint_tol(rho, sigma));
  const Complex tr = trace(root.root);

  FidelityResult r;
  r.method = FidelityMethod::ProductSqrt;
  r.raw_value = tr.real() * tr.real();
  r.max_imag_residual = std::abs(tr.imag());
  r.clamped_mass = root.clamped_mass;
  if (r.max_imag_residual > kMaxImagTrace) {
    std::ostringstream os;
    os << "product-sqrt: |Im Tr √(ρσ)| = " << r.max_imag_residual << " exceeds " << kMaxImagTrace;
    throw SpectrumError(os.str());
  }
  finish(r, start);
  return r;
}

FidelityResult fidelity_from_product_spectrum(const ComplexVector& eigenvalues,
                                              double matrix_norm) {
  const auto start = Clock::now();
  const double n = static_cast<double>(eigenvalues.size());
  FidelityResult r;
  r.method = FidelityMethod::ProductEig;
  const double zero_floor = detail::rounding_floor(matrix_norm);
  double root_sum = 0.0;
  for (const Complex& lambda : eigenvalues) {
    r.max_imag_residual = std::max(r.max_imag_residual, std::abs(lambda.imag()));
    if (lambda.real() < 0.0) r.clamped_mass += -lambda.real();
    if (lambda.real() > 0.0 && std::abs(lambda) > zero_floor) root_sum += std::sqrt(lambda.real());
  }
  if (r.max_imag_residual > kMaxImagPerDim * n) {
    std::ostringstream os;
    os << "product-eig: max |Im λ| = " << r.max_imag_residual << " exceeds "
       << kMaxImagPerDim * n;
    throw SpectrumError(os.str());
  }
  if (r.clamped_mass > kMaxClampedMass) {
    std::ostringstream os;
    os << "product-eig: clamped negative mass " << r.clamped_mass << " exceeds "
       << kMaxClampedMass;
    throw SpectrumError(os.str());
  }
  r.raw_value = root_sum * root_sum;
  finish(r, start);
  return r;
}

FidelityResult fidelity_product_eig(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma, "fidelity_product_eig");
  const auto start = Clock::now();
  const ComplexMatrix product = rho.mat() * sigma.mat();
  FidelityResult r = fidelity_from_product_spectrum(general_eigenvalues(product), product.norm());
  r.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

FidelityResult fidelity(const DensityMatrix& rho, const DensityMatrix& sigma,
                        FidelityMethod method) {
  switch (method) {
    case FidelityMethod::TraceNorm: return fidelity_trace_norm(rho, sigma);
    case FidelityMethod::Classic: return fidelity_classic(rho, sigma);
    case FidelityMethod::ProductSqrt: return fidelity_product_sqrt(rho, sigma);
    case FidelityMethod::ProductEig:
    case FidelityMethod::Auto: return fidelity_product_eig(rho, sigma);
  }
  throw DomainError("fidelity: unknown method");
}

SpectrumReport sandwich_spectrum(const DensityMatrix& rho, const DensityMatrix& sigma, double x) {
  require_same_dim(rho, sigma, "sandwich_spectrum");
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream os;
    os << "sandwich_spectrum: x = " << x << " is outside [0, 1]";
    throw DomainError(os.str());
  }
  const double tol = joint_tol(rho, sigma);
  SpectrumReport report;
  report.x = x;
  if (x == 0.5) {
    const ComplexMatrix root = psd_sqrt(rho.mat(), tol);
    const ComplexMatrix m = hermitian_part(root * sigma.mat() * root);
    report.eigenvalues = herm_eig(m, tol).eigenvalues.cast<Complex>();
    sort_spectrum(report.eigenvalues);
  } else {
    const ComplexMatrix left = psd_power(rho.mat(), x, tol);
    const ComplexMatrix right = psd_power(rho.mat(), 1.0 - x, tol);
    report.eigenvalues = general_eigenvalues(left * sigma.mat() * right);
  }
  for (const Complex& lambda : report.eigenvalues) {
    report.max_imag = std::max(report.max_imag, std::abs(lambda.imag()));
    report.negativity = std::max(report.negativity, -lambda.real());
  }
  return report;
}

MiszczakTerms miszczak_decomposition(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma, "miszczak_decomposition");
  const ComplexMatrix product = rho.mat() * sigma.mat();
  const ComplexVector eigenvalues = general_eigenvalues(product);
  // Same acceptance rules as the eigenvalue route.
  (void)fidelity_from_product_spectrum(eigenvalues, product.norm());

  MiszczakTerms terms;
  terms.overlap = trace(product).real();
  double prefix = 0.0;
  double cross = 0.0;
  const double zero_floor = detail::rounding_floor(product.norm());
  for (const Complex& lambda : eigenvalues) {
    const bool zero = lambda.real() <= 0.0 || std::abs(lambda) <= zero_floor;
    const double root = zero ? 0.0 : std::sqrt(lambda.real());
    cross += root * prefix;
    prefix += root;
  }
  terms.correction = 2.0 * cross;
  return terms;
}

}  // namespace uhlfid
