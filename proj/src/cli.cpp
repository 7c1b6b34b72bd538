#include "uhlfid/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>

#include "CLI11.hpp"

#include "uhlfid/bench.hpp"
#include "uhlfid/io.hpp"
#include "uhlfid/threads.hpp"
#include "uhlfid/version.hpp"

namespace uhlfid {

namespace {

constexpr const char* kThreadsEnv = "UHLFID_THREADS";

// Misuse detected after CLI11 has accepted the arguments.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Prefixes the message of an uhlfid::Error with the input it came from.
struct InputError : std::runtime_error {
  InputError(const std::string& what, ErrorCategory c) : std::runtime_error(what), category(c) {}
  ErrorCategory category;
};

struct ComputeOptions {
  std::string rho_path;
  std::string sigma_path;
  std::string method = "auto";
  double tol = kDefaultTol;
  bool all_methods = false;
  std::string report_path;
};

struct VerifyOptions {
  std::vector<Index> dims{2, 3, 4, 8, 16, 32, 64};
  std::uint64_t trials = 50;
  std::uint64_t seed = 1;
  std::string profile = "default";
  std::string report_path;
  bool inject_fault = false;
};

struct BenchOptions {
  std::vector<Index> dims{64, 128, 256, 512};
  int reps = 10;
  int warmup = 1;
  std::uint64_t seed = 1;
  std::vector<std::string> methods{"classic", "product-eig"};
  std::string csv_path;
  std::string report_path;
  std::optional<int> threads;
};

std::string join(const std::vector<Index>& dims) {
  std::string s;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(dims[i]);
  }
  return s;
}

std::string join(const std::vector<FidelityMethod>& methods) {
  std::string s;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    if (i) s += ',';
    s += method_name(methods[i]);
  }
  return s;
}

std::string printf_double(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

FidelityMethod method_or_usage(const std::string& name) {
  const auto m = parse_method(name);
  if (!m) throw UsageError("unknown method '" + name + "'");
  return *m;
}

int parse_thread_count(const std::string& text, const std::string& source) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 1) {
    throw UsageError(source + " must be a positive integer, got '" + text + "'");
  }
  return value;
}

std::optional<int> env_threads() {
  const char* raw = std::getenv(kThreadsEnv);
  if (!raw || !*raw) return std::nullopt;
  return parse_thread_count(raw, kThreadsEnv);
}

void write_report(const std::string& path, const Json& report) {
  if (!path.empty()) write_text_file(path, dump_report(report));
}

struct LoadedState {
  std::string path;
  std::string digest;
  DensityMatrix state;
};

LoadedState load_state(const std::string& label, const std::string& path, double tol) {
  try {
    const std::string text = read_text_file(path);
    return {path, digest(text), validate(parse_matrix(text), tol)};
  } catch (const Error& e) {
    throw InputError(label + " (" + path + "): " + e.what(), e.category());
  }
}

int cmd_compute(const ComputeOptions& o, std::ostream& out) {
  const FidelityMethod requested = method_or_usage(o.method);
  if (!(o.tol > 0.0) || !std::isfinite(o.tol)) throw UsageError("--tol must be a positive number");

  const LoadedState rho = load_state("rho", o.rho_path, o.tol);
  const LoadedState sigma = load_state("sigma", o.sigma_path, o.tol);

  std::vector<FidelityResult> results;
  if (o.all_methods) {
    for (FidelityMethod m : kConcreteMethods) results.push_back(fidelity(rho.state, sigma.state, m));
  } else {
    results.push_back(fidelity(rho.state, sigma.state, requested));
  }

  double disagreement = 0.0;
  for (const auto& a : results) {
    for (const auto& b : results) disagreement = std::max(disagreement, std::abs(a.raw_value - b.raw_value));
  }

  out << "rho    " << rho.digest << "  dim " << rho.state.dim() << "  rank " << rho.state.rank_estimate() << '\n';
  out << "sigma  " << sigma.digest << "  dim " << sigma.state.dim() << "  rank " << sigma.state.rank_estimate() << '\n';
  out << pad("method", 14) << pad("fidelity", 26) << pad("raw", 26) << pad("max_imag", 12) << "clamped_mass\n";
  for (const auto& r : results) {
    out << pad(std::string(method_name(r.method)), 14) << pad(format_double(r.value), 26)
        << pad(format_double(r.raw_value), 26) << pad(printf_double("%.3e", r.max_imag_residual), 12)
        << printf_double("%.3e", r.clamped_mass) << '\n';
  }
  if (o.all_methods) out << "max_disagreement " << format_double(disagreement) << '\n';

  if (!o.report_path.empty()) {
    std::string command = "uhlfid compute --rho " + o.rho_path + " --sigma " + o.sigma_path;
    command += o.all_methods ? " --all-methods" : " --method " + std::string(method_name(requested));
    command += " --tol " + format_double(o.tol);
    Json report = report_header(command);
    report["parameters"] = {{"method", o.all_methods ? "all" : std::string(method_name(requested))},
                            {"tol", o.tol},
                            {"all_methods", o.all_methods}};
    report["inputs"] = {
        {"rho", {{"path", rho.path}, {"digest", rho.digest}, {"dim", rho.state.dim()}}},
        {"sigma", {{"path", sigma.path}, {"digest", sigma.digest}, {"dim", sigma.state.dim()}}}};
    report["seeds"] = Json::object();
    Json items = Json::array();
    for (const auto& r : results) items.push_back(fidelity_json(r));
    report["results"] = std::move(items);
    if (o.all_methods) report["max_disagreement"] = disagreement;
    write_report(o.report_path, report);
  }
  return kExitOk;
}

FidelityEvaluator faulty_evaluator() {
  // Shifts the product-eigenvalue route so the equivalence checks must fail.
  return [](const DensityMatrix& rho, const DensityMatrix& sigma, FidelityMethod m) {
    FidelityResult r = fidelity(rho, sigma, m);
    if (r.method == FidelityMethod::ProductEig) {
      r.raw_value += 1e-3;
      r.value += 1e-3;
    }
    return r;
  };
}

int cmd_verify(const VerifyOptions& o, const CliHooks& hooks, std::ostream& out) {
  TolProfile profile;
  if (o.profile == "default") {
    profile = TolProfile::Default;
  } else if (o.profile == "strict") {
    profile = TolProfile::Strict;
  } else {
    throw UsageError("unknown tolerance profile '" + o.profile + "'");
  }
  if (o.dims.empty()) throw UsageError("--dims needs at least one dimension");
  for (Index n : o.dims) {
    if (n < 1) throw UsageError("--dims entries must be positive");
  }
  if (o.trials < 1) throw UsageError("--trials must be at least 1");

  FidelityEvaluator evaluator = hooks.evaluator;
  if (o.inject_fault) evaluator = faulty_evaluator();
  const SuiteReport suite = run_property_suite(o.trials, o.dims, o.seed, profile, evaluator);

  out << "seed " << o.seed << "  trials " << o.trials << "  dims " << join(o.dims) << "  profile "
      << profile_name(profile) << '\n';
  for (const auto& p : suite.properties) {
    out << (p.passed ? "PASS " : "FAIL ") << pad(p.name, 34) << " worst " << printf_double("%.3e", p.worst_residual)
        << "  threshold " << printf_double("%.1e", p.threshold) << "  checks " << p.trials << '\n';
    if (!p.passed) out << "     first failure: " << p.first_failure << '\n';
  }
  const bool ok = suite.all_passed();
  out << (ok ? "all properties passed" : "property failures present") << '\n';

  if (!o.report_path.empty()) {
    std::string command = "uhlfid verify --dims " + join(o.dims) + " --trials " + std::to_string(o.trials) +
                          " --seed " + std::to_string(o.seed) + " --tol-profile " +
                          std::string(profile_name(profile));
    Json report = report_header(command);
    report["parameters"] = {{"dims", o.dims},
                            {"trials", o.trials},
                            {"seed", o.seed},
                            {"tol_profile", profile_name(profile)},
                            {"fault_injected", o.inject_fault || static_cast<bool>(hooks.evaluator)}};
    const Json body = suite_json(suite);
    for (const auto& [key, value] : body.items()) report[key] = value;
    write_report(o.report_path, report);
  }
  return ok ? kExitOk : kExitPropertyFailure;
}

int cmd_bench(const BenchOptions& o, std::ostream& out) {
  BenchConfig config;
  config.dims = o.dims;
  config.reps = o.reps;
  config.warmup_reps = o.warmup;
  config.master_seed = o.seed;
  config.methods.clear();
  for (const auto& name : o.methods) {
    const FidelityMethod m = method_or_usage(name);
    if (m == FidelityMethod::Auto) throw UsageError("bench needs concrete methods, not 'auto'");
    if (std::find(config.methods.begin(), config.methods.end(), m) == config.methods.end()) {
      config.methods.push_back(m);
    }
  }
  if (o.threads) {
    config.threads = *o.threads;
  } else if (const auto env = env_threads()) {
    config.threads = *env;
  }

  const BenchReport report = speedup_report(config);

  out << "seed " << config.master_seed << "  reps " << config.reps << "  warmup " << config.warmup_reps
      << "  threads " << report.threads << (report.multithreaded ? "  (multi-threaded)" : "  (single-threaded)")
      << '\n';
  out << pad("dim", 6) << pad("method", 14) << pad("median_s", 12) << pad("min_s", 12) << pad("mean_s", 12)
      << pad("stddev_s", 12) << pad("reps", 6) << "speedup\n";
  for (const auto& e : report.entries) {
    std::string speedup = "-";
    if (e.method == FidelityMethod::ProductEig) {
      for (const auto& s : report.speedups) {
        if (s.dim == e.dim) speedup = printf_double("%.3f", s.speedup);
      }
    }
    out << pad(std::to_string(e.dim), 6) << pad(std::string(method_name(e.method)), 14)
        << pad(printf_double("%.6f", e.stats.median_seconds), 12) << pad(printf_double("%.6f", e.stats.min_seconds), 12)
        << pad(printf_double("%.6f", e.stats.mean_seconds), 12) << pad(printf_double("%.6f", e.stats.stddev_seconds), 12)
        << pad(std::to_string(e.stats.reps), 6) << speedup << '\n';
  }
  for (const auto& s : report.speedups) {
    out << "speedup classic/product-eig at n=" << s.dim << ": " << format_double(s.speedup) << '\n';
  }
  for (const auto& f : report.scaling) {
    out << "scaling exponent " << method_name(f.method) << ": " << printf_double("%.3f", f.exponent) << " over "
        << f.points << " dims\n";
  }

  if (!o.csv_path.empty()) write_text_file(o.csv_path, bench_csv(report));
  if (!o.report_path.empty()) {
    std::string command = "uhlfid bench --dims " + join(config.dims) + " --reps " + std::to_string(config.reps) +
                          " --warmup " + std::to_string(config.warmup_reps) + " --seed " +
                          std::to_string(config.master_seed) + " --methods " + join(config.methods) +
                          " --threads " + std::to_string(config.threads);
    Json r = report_header(command);
    const Json body = bench_json(report);
    for (const auto& [key, value] : body.items()) r[key] = value;
    write_report(o.report_path, r);
  }
  return kExitOk;
}

int report_error(std::ostream& err, const std::string& what, ErrorCategory category) {
  err << "uhlfid: error: " << what << '\n';
  return category == ErrorCategory::Validation ? kExitValidation : kExitNumerical;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const CliHooks& hooks) {
  CLI::App app{"Uhlmann-Jozsa fidelity of density matrices", "uhlfid"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  ComputeOptions compute;
  auto* c = app.add_subcommand("compute", "Fidelity of two stored density matrices");
  c->add_option("--rho", compute.rho_path, "Matrix file of the first state")->required();
  c->add_option("--sigma", compute.sigma_path, "Matrix file of the second state")->required();
  c->add_option("--method", compute.method, "trace-norm|classic|product-sqrt|product-eig|auto")
      ->capture_default_str();
  c->add_option("--tol", compute.tol, "Validation tolerance")->capture_default_str();
  c->add_flag("--all-methods", compute.all_methods, "Evaluate every method and their disagreement");
  c->add_option("--report", compute.report_path, "Write a JSON report here");

  VerifyOptions verify;
  auto* v = app.add_subcommand("verify", "Run the randomized property suite");
  v->add_option("--dims", verify.dims, "Comma-separated dimensions")->delimiter(',')->capture_default_str();
  v->add_option("--trials", verify.trials, "Trials per dimension")->capture_default_str();
  v->add_option("--seed", verify.seed, "Master seed")->capture_default_str();
  v->add_option("--tol-profile", verify.profile, "default|strict")->capture_default_str();
  v->add_option("--report", verify.report_path, "Write a JSON report here");
  v->add_flag("--inject-fault", verify.inject_fault)->group("");

  BenchOptions bench;
  int bench_threads = 0;
  auto* b = app.add_subcommand("bench", "Time the classic and product routes");
  b->add_option("--dims", bench.dims, "Comma-separated ascending dimensions")->delimiter(',')->capture_default_str();
  b->add_option("--reps", bench.reps, "Timed repetitions")->capture_default_str();
  b->add_option("--warmup", bench.warmup, "Untimed warm-up evaluations")->capture_default_str();
  b->add_option("--seed", bench.seed, "Master seed")->capture_default_str();
  b->add_option("--methods", bench.methods, "Comma-separated methods")->delimiter(',')->capture_default_str();
  b->add_option("--csv", bench.csv_path, "Write the timing table as CSV here");
  b->add_option("--report", bench.report_path, "Write a JSON report here");
  auto* threads_opt = b->add_option("--threads", bench_threads, "Backend threads (overrides UHLFID_THREADS)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "uhlfid: usage: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*c) return cmd_compute(compute, out);
    if (*v) return cmd_verify(verify, hooks, out);
    if (threads_opt->count() > 0) {
      if (bench_threads < 1) throw UsageError("--threads must be at least 1");
      bench.threads = bench_threads;
    }
    return cmd_bench(bench, out);
  } catch (const UsageError& e) {
    err << "uhlfid: usage: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InputError& e) {
    return report_error(err, e.what(), e.category);
  } catch (const Error& e) {
    return report_error(err, e.what(), e.category());
  } catch (const std::bad_alloc&) {
    return report_error(err, "out of memory", ErrorCategory::Numerical);
  } catch (const std::exception& e) {
    return report_error(err, e.what(), ErrorCategory::Numerical);
  }
}

}  // namespace uhlfid
