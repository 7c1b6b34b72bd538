#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "uhlfid/matcore.hpp"

namespace uhlfid {

/// Identifies one deterministic random stream. Equal seeds give equal states.
struct StateSeed {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  /// Child stream for a sub-task of this stream (e.g. the k-th state of a trial).
  StateSeed child(std::uint64_t tag) const;

  friend bool operator==(const StateSeed&, const StateSeed&) = default;
};

/// One SplitMix64 output for state x: x advanced by the golden gamma, then finalized.
std::uint64_t mix64(std::uint64_t x);

/// Deterministic source of standard normal and uniform variates.
///
/// The engine is std::mt19937_64 seeded with
/// mix64(master_seed ^ mix64(stream_id + 0x9e3779b97f4a7c15)). Uniforms on
/// (0, 1] take the top 53 bits; normals use the Box–Muller transform, so the
/// stream of values is identical on every conforming platform.
class GaussianSource {
 public:
  explicit GaussianSource(StateSeed seed);

  double uniform();  // (0, 1]
  double normal();
  /// Standard complex Gaussian, E|z|² = 1.
  Complex complex_normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// n×m matrix of independent standard complex Gaussian entries.
ComplexMatrix ginibre(Index rows, Index cols, GaussianSource& source);

/// A validated density matrix: Hermitian, PSD and unit trace within its tolerance.
class DensityMatrix {
 public:
  const ComplexMatrix& mat() const noexcept { return mat_; }
  Index dim() const noexcept { return mat_.rows(); }
  /// Number of eigenvalues above validation_tol·dim.
  Index rank_estimate() const noexcept { return rank_estimate_; }
  double validation_tol() const noexcept { return validation_tol_; }

  friend DensityMatrix validate(const ComplexMatrix& a, double tol);

 private:
  DensityMatrix(ComplexMatrix mat, Index rank, double tol)
      : mat_(std::move(mat)), rank_estimate_(rank), validation_tol_(tol) {}

  ComplexMatrix mat_;
  Index rank_estimate_;
  double validation_tol_;
};

/// Checks the three density-matrix invariants. Errors name the violated
/// invariant and its magnitude.
DensityMatrix validate(const ComplexMatrix& a, double tol = kDefaultTol);

/// |v⟩⟨v| / ⟨v|v⟩.
DensityMatrix pure_state(const ComplexVector& v);

/// I/n.
DensityMatrix maximally_mixed(Index n);

/// G·G† / Tr(G·G†) with G an n×rank Ginibre matrix drawn from `seed`.
DensityMatrix random_density(Index n, Index rank, StateSeed seed);

/// Haar-distributed unitary: Q from the QR factorization of a Ginibre matrix,
/// with columns rephased so that diag(R) is positive.
ComplexMatrix random_unitary(Index n, StateSeed seed);

/// U·ρ·U†. Throws UnitarityError unless ‖U†U − I‖_max ≤ 1e-8.
DensityMatrix conjugate(const ComplexMatrix& u, const DensityMatrix& rho);

/// ρ1 ⊗ ρ2.
DensityMatrix tensor(const DensityMatrix& rho1, const DensityMatrix& rho2);

}  // namespace uhlfid
