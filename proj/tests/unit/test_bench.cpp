#include "doctest.h"

#include <cmath>

#include "uhlfid/bench.hpp"

using namespace uhlfid;

TEST_CASE("time_method smoke") {
  for (FidelityMethod m : kConcreteMethods) {
    const TimingStats s = time_method(m, 2, 3, 1, StateSeed{1, 2});
    CHECK(s.reps == 3);
    CHECK(s.min_seconds > 0.0);
    CHECK(s.min_seconds <= s.median_seconds);
    CHECK(s.mean_seconds > 0.0);
    CHECK(s.stddev_seconds >= 0.0);
  }
}

TEST_CASE("time_method values are reproducible") {
  const TimingStats a = time_method(FidelityMethod::Classic, 16, 3, 1, StateSeed{4, 16});
  const TimingStats b = time_method(FidelityMethod::Classic, 16, 3, 1, StateSeed{4, 16});
  CHECK(a.fidelity_value == b.fidelity_value);
  const TimingStats c = time_method(FidelityMethod::ProductEig, 16, 3, 1, StateSeed{4, 16});
  CHECK(std::abs(a.fidelity_value - c.fidelity_value) <= 1e-8);
}

TEST_CASE("time_method argument checks") {
  CHECK_THROWS_AS(time_method(FidelityMethod::Classic, 4, 2, 1, StateSeed{}), DomainError);
  CHECK_THROWS_AS(time_method(FidelityMethod::Classic, 4, 3, -1, StateSeed{}), DomainError);
  CHECK_THROWS_AS(time_method(FidelityMethod::Classic, 0, 3, 1, StateSeed{}), DomainError);
}

TEST_CASE("product-eig beats classic at n=256") {
  const StateSeed seed{1, 256};
  const TimingStats classic = time_method(FidelityMethod::Classic, 256, 5, 1, seed);
  const TimingStats product = time_method(FidelityMethod::ProductEig, 256, 5, 1, seed);
  MESSAGE("n=256 classic " << classic.median_seconds << " s, product-eig " << product.median_seconds << " s");
  CHECK(product.median_seconds < classic.median_seconds);
}

TEST_CASE("check_config") {
  BenchConfig c;
  CHECK_NOTHROW(check_config(c));
  c.dims = {};
  CHECK_THROWS_AS(check_config(c), DomainError);
  c.dims = {64, 32};
  CHECK_THROWS_AS(check_config(c), DomainError);
  c = BenchConfig{};
  c.reps = 2;
  CHECK_THROWS_AS(check_config(c), DomainError);
  c = BenchConfig{};
  c.warmup_reps = 0;
  CHECK_THROWS_AS(check_config(c), DomainError);
  c = BenchConfig{};
  c.methods.clear();
  CHECK_THROWS_AS(check_config(c), DomainError);
}

TEST_CASE("loglog_slope") {
  CHECK(*loglog_slope({1, 2, 4, 8}, {1, 8, 64, 512}) == doctest::Approx(3.0));
  CHECK(*loglog_slope({10, 100}, {5, 50}) == doctest::Approx(1.0));
  CHECK_FALSE(loglog_slope({10}, {1}).has_value());
  CHECK_FALSE(loglog_slope({10, 10}, {1, 2}).has_value());
}

TEST_CASE("speedup_report layout") {
  BenchConfig c;
  c.dims = {8, 16};
  c.reps = 3;
  const BenchReport r = speedup_report(c);
  REQUIRE(r.entries.size() == 4);
  CHECK(r.entries[0].dim == 8);
  CHECK(r.entries[0].method == FidelityMethod::Classic);
  CHECK(r.entries[1].method == FidelityMethod::ProductEig);
  CHECK(r.entries[2].dim == 16);
  REQUIRE(r.speedups.size() == 2);
  CHECK(r.speedups[1].speedup ==
        doctest::Approx(r.entries[2].stats.median_seconds / r.entries[3].stats.median_seconds));
  // Both dims are below 64, so no scaling fit.
  CHECK(r.scaling.empty());
  CHECK_FALSE(r.multithreaded);
}

TEST_CASE("single-dim config has no scaling fit") {
  BenchConfig c;
  c.dims = {64};
  c.reps = 3;
  c.methods = {FidelityMethod::TraceNorm};
  const BenchReport r = speedup_report(c);
  CHECK(r.entries.size() == 1);
  CHECK(r.scaling.empty());
  CHECK(r.speedups.empty());
}

TEST_CASE("scaling fit over dims >= 64") {
  BenchConfig c;
  c.dims = {32, 64, 128};
  c.reps = 3;
  c.methods = {FidelityMethod::ProductEig};
  const BenchReport r = speedup_report(c);
  REQUIRE(r.scaling.size() == 1);
  CHECK(r.scaling[0].points == 2);
}
