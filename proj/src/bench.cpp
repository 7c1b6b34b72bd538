#include "uhlfid/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "uhlfid/threads.hpp"

namespace uhlfid {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kValueDrift = 1e-12;

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

bool has_method(const BenchConfig& c, FidelityMethod m) {
  return std::find(c.methods.begin(), c.methods.end(), m) != c.methods.end();
}

}  // namespace

TimingStats time_method(FidelityMethod method, Index n, int reps, int warmup, StateSeed seed) {
  if (reps < 3) throw DomainError("time_method: reps must be at least 3");
  if (warmup < 0) throw DomainError("time_method: warmup must be non-negative");
  if (n < 1) throw DomainError("time_method: dimension must be positive");

  const DensityMatrix rho = random_density(n, n, seed.child(0));
  const DensityMatrix sigma = random_density(n, n, seed.child(1));

  for (int i = 0; i < warmup; ++i) (void)fidelity(rho, sigma, method);

  std::vector<double> seconds;
  seconds.reserve(static_cast<std::size_t>(reps));
  TimingStats stats;
  for (int i = 0; i < reps; ++i) {
    const auto start = Clock::now();
    const FidelityResult r = fidelity(rho, sigma, method);
    const auto stop = Clock::now();
    const double elapsed = std::chrono::duration<double>(stop - start).count();
    if (!(elapsed > 0.0)) {
      throw ClockError("monotonic clock reported a non-positive duration");
    }
    if (i == 0) {
      stats.fidelity_value = r.value;
    } else if (std::abs(r.value - stats.fidelity_value) > kValueDrift) {
      std::ostringstream os;
      os.precision(17);
      os << method_name(method) << " at n=" << n << ": rep " << i << " gave " << r.value
         << ", first rep gave " << stats.fidelity_value;
      throw ReproducibilityError(os.str());
    }
    seconds.push_back(elapsed);
  }

  const double count = static_cast<double>(reps);
  stats.reps = reps;
  stats.min_seconds = *std::min_element(seconds.begin(), seconds.end());
  stats.mean_seconds = std::accumulate(seconds.begin(), seconds.end(), 0.0) / count;
  double ss = 0.0;
  for (double s : seconds) ss += (s - stats.mean_seconds) * (s - stats.mean_seconds);
  stats.stddev_seconds = std::sqrt(ss / (count - 1.0));
  stats.median_seconds = median_of(std::move(seconds));
  return stats;
}

void check_config(const BenchConfig& config) {
  if (config.dims.empty()) throw DomainError("bench: at least one dimension is required");
  for (std::size_t i = 0; i < config.dims.size(); ++i) {
    if (config.dims[i] < 2) throw DomainError("bench: dimensions must be at least 2");
    if (i > 0 && config.dims[i] <= config.dims[i - 1]) {
      throw DomainError("bench: dimensions must be strictly ascending");
    }
  }
  if (config.reps < 3) throw DomainError("bench: reps must be at least 3");
  if (config.warmup_reps < 1) throw DomainError("bench: warmup must be at least 1");
  if (config.methods.empty()) throw DomainError("bench: at least one method is required");
  if (config.threads < 1) throw DomainError("bench: threads must be at least 1");
}

std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  const double count = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= count;
  my /= count;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

BenchReport speedup_report(const BenchConfig& config) {
  check_config(config);
  BenchReport report;
  report.config = config;
  report.threads = config.threads;
  report.multithreaded = config.threads > 1;
  const int previous = backend_threads();
  set_backend_threads(config.threads);

  try {
    for (Index n : config.dims) {
      const StateSeed seed{config.master_seed, static_cast<std::uint64_t>(n)};
      for (FidelityMethod m : config.methods) {
        report.entries.push_back({n, m, time_method(m, n, config.reps, config.warmup_reps, seed)});
      }
    }
  } catch (...) {
    set_backend_threads(previous);
    throw;
  }
  set_backend_threads(previous);

  auto median_for = [&](Index n, FidelityMethod m) {
    for (const auto& e : report.entries) {
      if (e.dim == n && e.method == m) return e.stats.median_seconds;
    }
    return 0.0;
  };

  if (has_method(config, FidelityMethod::Classic) && has_method(config, FidelityMethod::ProductEig)) {
    for (Index n : config.dims) {
      report.speedups.push_back(
          {n, median_for(n, FidelityMethod::Classic) / median_for(n, FidelityMethod::ProductEig)});
    }
  }

  for (FidelityMethod m : config.methods) {
    std::vector<double> x, y;
    for (Index n : config.dims) {
      if (n < kScalingMinDim) continue;
      x.push_back(static_cast<double>(n));
      y.push_back(median_for(n, m));
    }
    if (const auto slope = loglog_slope(x, y)) {
      report.scaling.push_back({m, *slope, x.size()});
    }
  }
  return report;
}

}  // namespace uhlfid
