#include "uhlfid/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace uhlfid {

namespace {

// Real parts below this are the null block's zeros.
constexpr double kSpectrumZero = 1e-10;

std::string describe(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Accumulates the residuals of one property across trials.
class Tally {
 public:
  Tally(std::string name, double threshold) {
    result_.name = std::move(name);
    result_.threshold = threshold;
  }

  void record(double residual, const std::string& context) {
    ++result_.trials;
    if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
    result_.worst_residual = std::max(result_.worst_residual, residual);
    if (!(residual <= result_.threshold)) {
      note_failure(context + ": residual " + describe(residual) + " exceeds " +
                   describe(result_.threshold));
    }
  }

  template <class Body>
  void attempt(const std::string& context, Body&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      ++result_.trials;
      result_.worst_residual = std::numeric_limits<double>::infinity();
      note_failure(context + ": " + e.what());
    }
  }

  PropertyResult take() { return std::move(result_); }

 private:
  void note_failure(const std::string& why) {
    if (result_.passed) result_.first_failure = why;
    result_.passed = false;
  }

  PropertyResult result_;
};

std::vector<double> random_probabilities(Index n, GaussianSource& source, bool sparse) {
  std::vector<double> p(static_cast<std::size_t>(n));
  for (auto& v : p) v = -std::log(source.uniform());
  if (sparse && n > 1) {
    // Knock out roughly half of the support, keeping at least one entry.
    for (std::size_t i = 1; i < p.size(); ++i) {
      if (source.uniform() < 0.5) p[i] = 0.0;
    }
  }
  double total = 0.0;
  for (double v : p) total += v;
  for (auto& v : p) v /= total;
  return p;
}

DensityMatrix diagonal_state(const std::vector<double>& p) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Index>(p.size()), static_cast<Index>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) m(static_cast<Index>(i), static_cast<Index>(i)) = p[i];
  return validate(m);
}

Index half_rank(Index n) { return (n + 1) / 2; }

// Stream tags, one per property; combined with the dimension and a slot.
enum class Tag : std::uint64_t {
  Equivalence = 1,
  RankDeficient,
  Range,
  Symmetry,
  Unitary,
  Multiplicative,
  Miszczak,
  Pure,
  Sandwich,
  Block,
  Commuting,
};

StateSeed stream(StateSeed trial, Tag tag, Index n, std::uint64_t slot) {
  return trial.child((static_cast<std::uint64_t>(tag) << 40) ^
                     (static_cast<std::uint64_t>(n) << 8) ^ slot);
}

class Suite {
 public:
  Suite(const SuiteTolerances& tol, FidelityEvaluator evaluator)
      : tol_(tol),
        evaluate_(std::move(evaluator)),
        equivalence_("cross_method_equivalence", tol.equivalence),
        rank_deficient_("rank_deficient_equivalence", tol.rank_deficient),
        range_("range", tol.range_slack),
        self_("self_fidelity", tol.self_fidelity),
        symmetry_("symmetry", tol.symmetry),
        unitary_("unitary_invariance", tol.unitary_invariance),
        multiplicative_("multiplicativity", tol.multiplicativity),
        miszczak_("miszczak_identity", tol.miszczak_identity),
        correction_("miszczak_correction_nonnegative", tol.correction_floor),
        overlap_("overlap_bound", tol.overlap_bound),
        pure_("pure_state_reduction", tol.pure_state),
        pure_correction_("pure_state_correction", tol.pure_state),
        sandwich_("sandwich_invariance", tol.sandwich),
        block_offdiag_("block_m_offdiag", tol.block_offdiag),
        block_lower_left_("block_n_lower_left", tol.block_lower_left),
        block_spectrum_("block_spectrum", tol.block_spectrum),
        commuting_("commuting_oracle", tol.commuting) {}

  void run_trial(StateSeed trial, std::uint64_t index, std::span<const Index> dims) {
    for (Index n : dims) {
      const std::string ctx = "trial " + std::to_string(index) + ", n=" + std::to_string(n);
      equivalence(trial, n, ctx);
      rank_deficient(trial, n, ctx);
      range_and_self(trial, n, ctx);
      symmetry(trial, n, ctx);
      unitary(trial, n, ctx);
      miszczak(trial, n, ctx);
      pure(trial, n, ctx);
      sandwich(trial, n, ctx);
      block(trial, n, ctx);
      commuting(trial, n, ctx);
    }
    multiplicative(trial, "trial " + std::to_string(index) + ", 2x2 (x) 3x3");
  }

  std::vector<PropertyResult> results() {
    std::vector<PropertyResult> out;
    for (Tally* t : {&equivalence_, &rank_deficient_, &range_, &self_, &symmetry_, &unitary_,
                     &multiplicative_, &miszczak_, &correction_, &overlap_, &pure_,
                     &pure_correction_, &sandwich_, &block_offdiag_, &block_lower_left_,
                     &block_spectrum_, &commuting_}) {
      out.push_back(t->take());
    }
    return out;
  }

 private:
  using Values = std::array<double, 4>;

  Values all_methods(const DensityMatrix& rho, const DensityMatrix& sigma, bool raw = false) {
    Values v{};
    for (std::size_t i = 0; i < 4; ++i) {
      const FidelityResult r = evaluate_(rho, sigma, kConcreteMethods[i]);
      v[i] = raw ? r.raw_value : r.value;
    }
    return v;
  }

  static double spread(const Values& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
  }

  void equivalence(StateSeed trial, Index n, const std::string& ctx) {
    equivalence_.attempt(ctx, [&] {
      const auto rho = random_density(n, n, stream(trial, Tag::Equivalence, n, 0));
      const auto sigma = random_density(n, n, stream(trial, Tag::Equivalence, n, 1));
      equivalence_.record(spread(all_methods(rho, sigma)), ctx);
    });
  }

  void rank_deficient(StateSeed trial, Index n, const std::string& ctx) {
    if (n < 2) return;
    rank_deficient_.attempt(ctx + " (rank(ρ) = ⌈n/2⌉)", [&] {
      const auto rho = random_density(n, half_rank(n), stream(trial, Tag::RankDeficient, n, 0));
      const auto sigma = random_density(n, n, stream(trial, Tag::RankDeficient, n, 1));
      rank_deficient_.record(spread(all_methods(rho, sigma)), ctx + " (rank(ρ) = ⌈n/2⌉)");
    });
    rank_deficient_.attempt(ctx + " (both deficient)", [&] {
      const auto rho = random_density(n, half_rank(n), stream(trial, Tag::RankDeficient, n, 2));
      const auto sigma = random_density(n, half_rank(n), stream(trial, Tag::RankDeficient, n, 3));
      rank_deficient_.record(spread(all_methods(rho, sigma)), ctx + " (both deficient)");
    });
  }

  void range_and_self(StateSeed trial, Index n, const std::string& ctx) {
    range_.attempt(ctx, [&] {
      const auto rho = random_density(n, n, stream(trial, Tag::Range, n, 0));
      const auto sigma = random_density(n, half_rank(n), stream(trial, Tag::Range, n, 1));
      for (double v : all_methods(rho, sigma, true)) {
        range_.record(std::max({0.0, -v, v - 1.0}), ctx);
      }
      self_.attempt(ctx, [&] {
        for (double v : all_methods(rho, rho)) self_.record(std::abs(v - 1.0), ctx);
      });
    });
  }

  void symmetry(StateSeed trial, Index n, const std::string& ctx) {
    symmetry_.attempt(ctx, [&] {
      const auto rho = random_density(n, n, stream(trial, Tag::Symmetry, n, 0));
      const auto sigma = random_density(n, n, stream(trial, Tag::Symmetry, n, 1));
      const Values forward = all_methods(rho, sigma);
      const Values backward = all_methods(sigma, rho);
      for (std::size_t i = 0; i < 4; ++i) symmetry_.record(std::abs(forward[i] - backward[i]), ctx);
    });
  }

  void unitary(StateSeed trial, Index n, const std::string& ctx) {
    unitary_.attempt(ctx, [&] {
      const auto rho = random_density(n, n, stream(trial, Tag::Unitary, n, 0));
      const auto sigma = random_density(n, n, stream(trial, Tag::Unitary, n, 1));
      const ComplexMatrix u = random_unitary(n, stream(trial, Tag::Unitary, n, 2));
      const Values before = all_methods(rho, sigma);
      const Values after = all_methods(conjugate(u, rho), conjugate(u, sigma));
      for (std::size_t i = 0; i < 4; ++i) unitary_.record(std::abs(before[i] - after[i]), ctx);
    });
  }

  void multiplicative(StateSeed trial, const std::string& ctx) {
    multiplicative_.attempt(ctx, [&] {
      const auto rho1 = random_density(2, 2, stream(trial, Tag::Multiplicative, 2, 0));
      const auto sigma1 = random_density(2, 2, stream(trial, Tag::Multiplicative, 2, 1));
      const auto rho2 = random_density(3, 3, stream(trial, Tag::Multiplicative, 3, 0));
      const auto sigma2 = random_density(3, 3, stream(trial, Tag::Multiplicative, 3, 1));
      const Values joint = all_methods(tensor(rho1, rho2), tensor(sigma1, sigma2));
      const Values first = all_methods(rho1, sigma1);
      const Values second = all_methods(rho2, sigma2);
      for (std::size_t i = 0; i < 4; ++i) {
        multiplicative_.record(std::abs(joint[i] - first[i] * second[i]), ctx);
      }
    });
  }

  void miszczak(StateSeed trial, Index n, const std::string& ctx) {
    miszczak_.attempt(ctx, [&] {
      const auto rho = random_density(n, n, stream(trial, Tag::Miszczak, n, 0));
      const auto sigma = random_density(n, half_rank(n), stream(trial, Tag::Miszczak, n, 1));
      const MiszczakTerms terms = miszczak_decomposition(rho, sigma);
      const double f = evaluate_(rho, sigma, FidelityMethod::ProductEig).raw_value;
      miszczak_.record(std::abs(terms.overlap + terms.correction - f), ctx);
      correction_.record(std::max(0.0, -terms.correction), ctx);
      overlap_.record(std::max(0.0, terms.overlap - f), ctx);
    });
  }

  void pure(StateSeed trial, Index n, const std::string& ctx) {
    pure_.attempt(ctx, [&] {
      const auto rho = random_density(n, 1, stream(trial, Tag::Pure, n, 0));
      const auto sigma = random_density(n, n, stream(trial, Tag::Pure, n, 1));
      const double overlap = trace(rho.mat() * sigma.mat()).real();
      for (double v : all_methods(rho, sigma, true)) pure_.record(std::abs(v - overlap), ctx);
      pure_correction_.attempt(ctx, [&] {
        pure_correction_.record(std::abs(miszczak_decomposition(rho, sigma).correction), ctx);
      });
    });
  }

  void sandwich(StateSeed trial, Index n, const std::string& ctx) {
    sandwich_.attempt(ctx, [&] {
      const auto rho = random_density(n, n, stream(trial, Tag::Sandwich, n, 0));
      const auto sigma = random_density(n, n, stream(trial, Tag::Sandwich, n, 1));
      const ComplexVector reference = sandwich_spectrum(rho, sigma, 0.5).eigenvalues;
      for (double x : {0.0, 0.3, 1.0}) {
        sandwich_.record(spectral_distance(sandwich_spectrum(rho, sigma, x).eigenvalues, reference),
                         ctx + ", x=" + describe(x));
      }
    });
  }

  void block(StateSeed trial, Index n, const std::string& ctx) {
    if (n < 2) return;
    block_spectrum_.attempt(ctx, [&] {
      GaussianSource pick(stream(trial, Tag::Block, n, 0));
      const Index rank = 1 + static_cast<Index>(pick.uniform() * static_cast<double>(n - 1)) % (n - 1);
      const auto rho = random_density(n, rank, stream(trial, Tag::Block, n, 1));
      const auto sigma = random_density(n, n, stream(trial, Tag::Block, n, 2));
      const BlockStructureReport r = check_block_structure(rho, sigma);
      const std::string where = ctx + ", rank " + std::to_string(rank);
      block_offdiag_.record(r.m_offdiag, where);
      block_lower_left_.record(r.max_lower_left, where);
      block_spectrum_.record(r.spec_distance, where);
    });
  }

  void commuting(StateSeed trial, Index n, const std::string& ctx) {
    const Index m = std::min<Index>(n, 16);
    commuting_.attempt(ctx, [&] {
      GaussianSource source(stream(trial, Tag::Commuting, m, 0));
      const auto p = random_probabilities(m, source, false);
      const auto q = random_probabilities(m, source, true);
      const double oracle = commuting_oracle(p, q);
      for (double v : all_methods(diagonal_state(p), diagonal_state(q), true)) {
        commuting_.record(std::abs(v - oracle), ctx);
      }
    });
  }

  SuiteTolerances tol_;
  FidelityEvaluator evaluate_;
  Tally equivalence_, rank_deficient_, range_, self_, symmetry_, unitary_, multiplicative_,
      miszczak_, correction_, overlap_, pure_, pure_correction_, sandwich_, block_offdiag_,
      block_lower_left_, block_spectrum_, commuting_;
};

}  // namespace

BlockStructureReport check_block_structure(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw DimensionError("check_block_structure: ρ and σ dimensions differ");
  }
  const Index n = rho.dim();
  const Index p = rho.rank_estimate();
  if (p >= n) {
    throw RankError("check_block_structure: ρ is numerically full rank (rank estimate " +
                    std::to_string(p) + " of " + std::to_string(n) + ")");
  }
  const double tol = std::max(rho.validation_tol(), sigma.validation_tol());
  const HermEigResult eig = herm_eig(rho.mat(), tol);
  // Descending order puts the null block last.
  const ComplexMatrix basis = eig.eigenvectors.rowwise().reverse();
  const RealVector values = eig.eigenvalues.reverse();

  // √ρ assembled from the positive-definite block only.
  const ComplexMatrix range = basis.leftCols(p);
  const RealVector roots = values.head(p).cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix sqrt_rho = range * roots.asDiagonal() * range.adjoint();

  ComplexMatrix m = sqrt_rho * sigma.mat() * sqrt_rho;
  m = (m + m.adjoint().eval()) * 0.5;
  const ComplexMatrix product = rho.mat() * sigma.mat();
  const ComplexMatrix m_rotated = basis.adjoint() * m * basis;
  const ComplexMatrix n_rotated = basis.adjoint() * product * basis;

  BlockStructureReport report;
  report.p = p;
  report.q = n - p;
  report.max_lower_left = n_rotated.bottomLeftCorner(n - p, p).cwiseAbs().maxCoeff();
  report.m_offdiag = std::max({m_rotated.topRightCorner(p, n - p).cwiseAbs().maxCoeff(),
                               m_rotated.bottomLeftCorner(n - p, p).cwiseAbs().maxCoeff(),
                               m_rotated.bottomRightCorner(n - p, n - p).cwiseAbs().maxCoeff()});
  report.spec_distance = spectral_distance(herm_eig(m, tol).eigenvalues.cast<Complex>(),
                                           general_eigenvalues(product));
  return report;
}

double spectral_distance(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) {
    throw DimensionError("spectral_distance: spectra have different lengths");
  }
  auto prepare = [](const ComplexVector& v) {
    std::vector<double> re(static_cast<std::size_t>(v.size()));
    for (Index i = 0; i < v.size(); ++i) {
      const double x = v(i).real();
      re[static_cast<std::size_t>(i)] = x < kSpectrumZero ? 0.0 : x;
    }
    std::sort(re.begin(), re.end(), std::greater<>());
    return re;
  };
  const auto ra = prepare(a);
  const auto rb = prepare(b);
  double worst = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) worst = std::max(worst, std::abs(ra[i] - rb[i]));
  return worst;
}

double commuting_oracle(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size() || p.empty()) {
    throw DomainError("commuting_oracle: probability vectors must be non-empty and equally long");
  }
  auto check = [](std::span<const double> v, const char* name) {
    double total = 0.0;
    for (double x : v) {
      if (!(x >= 0.0) || !std::isfinite(x)) {
        throw DomainError(std::string("commuting_oracle: ") + name + " has a negative or non-finite entry");
      }
      total += x;
    }
    if (!(std::abs(total - 1.0) <= 1e-12)) {
      throw DomainError(std::string("commuting_oracle: ") + name + " sums to " + describe(total));
    }
  };
  check(p, "p");
  check(q, "q");
  double bhattacharyya = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) bhattacharyya += std::sqrt(p[i] * q[i]);
  return bhattacharyya * bhattacharyya;
}

std::string_view profile_name(TolProfile profile) {
  return profile == TolProfile::Strict ? "strict" : "default";
}

SuiteTolerances tolerances_for(TolProfile profile) {
  SuiteTolerances t;
  if (profile == TolProfile::Strict) {
    for (double* v : {&t.equivalence, &t.rank_deficient, &t.range_slack, &t.self_fidelity,
                      &t.symmetry, &t.unitary_invariance, &t.multiplicativity,
                      &t.miszczak_identity, &t.correction_floor, &t.overlap_bound, &t.pure_state,
                      &t.sandwich, &t.block_offdiag, &t.block_lower_left, &t.block_spectrum,
                      &t.commuting}) {
      *v *= 0.1;
    }
  }
  return t;
}

bool SuiteReport::all_passed() const {
  return std::all_of(properties.begin(), properties.end(),
                     [](const PropertyResult& p) { return p.passed; });
}

SuiteReport run_property_suite(std::uint64_t trials, std::span<const Index> dims,
                               std::uint64_t master_seed, TolProfile profile,
                               const FidelityEvaluator& evaluator) {
  if (trials < 1) throw DomainError("run_property_suite: trials must be at least 1");
  for (Index n : dims) {
    if (n < 1) throw DomainError("run_property_suite: dimensions must be positive");
  }
  FidelityEvaluator evaluate = evaluator;
  if (!evaluate) {
    evaluate = [](const DensityMatrix& r, const DensityMatrix& s, FidelityMethod m) {
      return fidelity(r, s, m);
    };
  }
  Suite suite(tolerances_for(profile), std::move(evaluate));
  for (std::uint64_t t = 0; t < trials; ++t) {
    suite.run_trial(StateSeed{master_seed, t}, t, dims);
  }
  SuiteReport report;
  report.master_seed = master_seed;
  report.trials = trials;
  report.dims.assign(dims.begin(), dims.end());
  report.profile = profile;
  report.properties = suite.results();
  return report;
}

}  // namespace uhlfid
