#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "uhlfid/fidelity.hpp"

namespace uhlfid {

struct TimingStats {
  double median_seconds = 0.0;
  double min_seconds = 0.0;
  double mean_seconds = 0.0;
  double stddev_seconds = 0.0;  // sample standard deviation
  int reps = 0;
  double fidelity_value = 0.0;  // value of the first timed evaluation
};

/// Times `method` on one full-rank random pair of dimension n drawn from
/// `seed`. State generation and `warmup` evaluations are untimed. Every timed
/// evaluation must reproduce the first value within 1e-12 (ReproducibilityError
/// otherwise); non-positive durations raise ClockError.
TimingStats time_method(FidelityMethod method, Index n, int reps, int warmup, StateSeed seed);

struct BenchConfig {
  std::vector<Index> dims{64, 128, 256, 512};
  int reps = 10;
  int warmup_reps = 1;
  std::uint64_t master_seed = 1;
  std::vector<FidelityMethod> methods{FidelityMethod::Classic, FidelityMethod::ProductEig};
  int threads = 1;
};

/// DomainError unless dims are ascending and ≥ 2, reps ≥ 3, warmup ≥ 1, methods non-empty.
void check_config(const BenchConfig& config);

struct BenchEntry {
  Index dim = 0;
  FidelityMethod method = FidelityMethod::Classic;
  TimingStats stats;
};

struct DimSpeedup {
  Index dim = 0;
  double speedup = 0.0;  // median(Classic) / median(ProductEig)
};

struct ScalingFit {
  FidelityMethod method = FidelityMethod::Classic;
  double exponent = 0.0;  // least-squares slope of log median vs log dim
  std::size_t points = 0;
};

struct BenchReport {
  BenchConfig config;
  std::vector<BenchEntry> entries;   // one per (dim, method), dims outer
  std::vector<DimSpeedup> speedups;  // only when both Classic and ProductEig ran
  std::vector<ScalingFit> scaling;   // only methods with ≥ 2 dims ≥ 64
  int threads = 1;
  bool multithreaded = false;
};

/// Dimensions below this are excluded from the scaling fit.
inline constexpr Index kScalingMinDim = 64;

/// Least-squares slope of log(y) against log(x). Needs two or more distinct x.
std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Runs time_method over every (dim, method) of the config. The pair for
/// dimension n is drawn from StateSeed{master_seed, n}, so every method sees
/// the same states.
BenchReport speedup_report(const BenchConfig& config);

}  // namespace uhlfid
