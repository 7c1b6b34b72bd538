#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "uhlfid/states.hpp"

namespace uhlfid {

/// Route used to evaluate the Uhlmann–Jozsa fidelity.
///
///  - TraceNorm:   (Σ singular values of √ρ·√σ)²
///  - Classic:     (Tr √(√ρ·σ·√ρ))²
///  - ProductSqrt: (Re Tr √(ρσ))², principal root via the Schur form
///  - ProductEig:  (Σ_j √λ_j)² over the eigenvalues λ_j of ρσ
///  - Auto:        ProductEig
enum class FidelityMethod { TraceNorm, Classic, ProductSqrt, ProductEig, Auto };

/// The four concrete methods, in a fixed order.
inline constexpr FidelityMethod kConcreteMethods[] = {
    FidelityMethod::TraceNorm, FidelityMethod::Classic, FidelityMethod::ProductSqrt,
    FidelityMethod::ProductEig};

/// Kebab-case name used on the command line and in reports ("product-eig").
std::string_view method_name(FidelityMethod method);
std::optional<FidelityMethod> parse_method(std::string_view name);

struct FidelityResult {
  double value = 0.0;      // clipped to [0, 1]
  double raw_value = 0.0;  // before clipping
  FidelityMethod method = FidelityMethod::ProductEig;
  double max_imag_residual = 0.0;
  double clamped_mass = 0.0;
  double elapsed_seconds = 0.0;
};

/// Spectrum of ρ^x·σ·ρ^(1−x), ordered like general_eigenvalues.
struct SpectrumReport {
  double x = 0.5;
  ComplexVector eigenvalues;
  double max_imag = 0.0;    // max |Im λ|
  double negativity = 0.0;  // max(0, −min Re λ)
};

struct MiszczakTerms {
  double overlap = 0.0;     // Re Tr(ρσ)
  double correction = 0.0;  // 2 Σ_{j<k} √(λ_j λ_k)
};

FidelityResult fidelity_trace_norm(const DensityMatrix& rho, const DensityMatrix& sigma);
FidelityResult fidelity_classic(const DensityMatrix& rho, const DensityMatrix& sigma);
FidelityResult fidelity_product_sqrt(const DensityMatrix& rho, const DensityMatrix& sigma);
FidelityResult fidelity_product_eig(const DensityMatrix& rho, const DensityMatrix& sigma);

FidelityResult fidelity(const DensityMatrix& rho, const DensityMatrix& sigma,
                        FidelityMethod method = FidelityMethod::Auto);

SpectrumReport sandwich_spectrum(const DensityMatrix& rho, const DensityMatrix& sigma, double x);

MiszczakTerms miszczak_decomposition(const DensityMatrix& rho, const DensityMatrix& sigma);

/// (Σ_j √max(Re λ_j, 0))² together with the diagnostics of the eigenvalue path.
/// `matrix_norm` is ‖ρσ‖_F, which sets the rounding floor below which an
/// eigenvalue counts as zero.
FidelityResult fidelity_from_product_spectrum(const ComplexVector& eigenvalues,
                                              double matrix_norm);

}  // namespace uhlfid
