#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "uhlfid/fidelity.hpp"

namespace uhlfid {

/// Residuals of M = √ρ·σ·√ρ and N = ρσ expressed in the eigenbasis of a
/// rank-deficient ρ, eigenvalues descending so the null block is trailing.
struct BlockStructureReport {
  Index p = 0;                  // positive-definite block dimension
  Index q = 0;                  // null block dimension
  double max_lower_left = 0.0;  // largest |Ñ_ij|, i ≥ p, j < p
  double m_offdiag = 0.0;       // largest |M̃_ij| outside the leading p×p block
  double spec_distance = 0.0;   // spectral_distance(spec M, spec N)
};

/// Throws RankError when ρ is numerically full rank.
BlockStructureReport check_block_structure(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Distance between two spectra that are real up to rounding: real parts
/// below 1e-10 are set to zero, both lists are sorted descending and the
/// largest componentwise difference is returned.
double spectral_distance(const ComplexVector& a, const ComplexVector& b);

/// (Σ_i √(p_i q_i))² for probability vectors. DomainError unless both are
/// non-negative, of equal length and sum to 1 within 1e-12.
double commuting_oracle(std::span<const double> p, std::span<const double> q);

enum class TolProfile { Default, Strict };

std::string_view profile_name(TolProfile profile);

/// Pass thresholds for each property of the suite.
struct SuiteTolerances {
  double equivalence = 1e-8;
  double rank_deficient = 1e-7;
  double range_slack = 1e-9;
  double self_fidelity = 1e-10;
  double symmetry = 1e-9;
  double unitary_invariance = 1e-9;
  double multiplicativity = 1e-8;
  double miszczak_identity = 1e-9;
  double correction_floor = 1e-10;
  double overlap_bound = 1e-10;
  double pure_state = 1e-10;
  double sandwich = 1e-8;
  double block_offdiag = 1e-9;
  double block_lower_left = 1e-9;
  double block_spectrum = 1e-8;
  double commuting = 1e-12;
};

/// Default thresholds match the acceptance bounds; Strict divides each by 10.
SuiteTolerances tolerances_for(TolProfile profile);

struct PropertyResult {
  std::string name;
  bool passed = true;
  double worst_residual = 0.0;
  double threshold = 0.0;
  std::uint64_t trials = 0;
  std::string first_failure;  // empty when passed
};

struct SuiteReport {
  std::uint64_t master_seed = 0;
  std::uint64_t trials = 0;
  std::vector<Index> dims;
  TolProfile profile = TolProfile::Default;
  std::vector<PropertyResult> properties;

  bool all_passed() const;
};

/// Replaces the fidelity evaluation used by the suite; lets tests inject a faulty method.
using FidelityEvaluator =
    std::function<FidelityResult(const DensityMatrix&, const DensityMatrix&, FidelityMethod)>;

/// Runs every fidelity and block-structure property for each trial and
/// dimension. Trial t draws its states from StateSeed{master_seed, t} and
/// children of it, so the report is a pure function of the arguments.
/// Failures are recorded in the report, never thrown.
SuiteReport run_property_suite(std::uint64_t trials, std::span<const Index> dims,
                               std::uint64_t master_seed,
                               TolProfile profile = TolProfile::Default,
                               const FidelityEvaluator& evaluator = {});

}  // namespace uhlfid
