#include "uhlfid/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "uhlfid/version.hpp"

namespace uhlfid {

namespace {

double entry_component(const nlohmann::json& value, std::size_t index, int component) {
  const char* part = component == 0 ? "re" : "im";
  if (!value.is_number()) {
    throw ParseError("entries[" + std::to_string(index) + "]." + part + " is not a number");
  }
  const double v = value.get<double>();
  if (!std::isfinite(v)) {
    throw ParseError("entries[" + std::to_string(index) + "]." + part + " is not finite");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

ComplexMatrix parse_matrix(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // The message carries "line L, column C".
    throw ParseError(e.what());
  } catch (const nlohmann::json::out_of_range& e) {
    throw ParseError(std::string("non-finite number: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("top level must be an object with \"dim\" and \"entries\"");
  for (const auto& item : doc.items()) {
    if (item.key() != "dim" && item.key() != "entries") {
      throw ParseError("unexpected key \"" + item.key() + "\"");
    }
  }
  if (!doc.contains("dim")) throw ParseError("missing key \"dim\"");
  if (!doc.contains("entries")) throw ParseError("missing key \"entries\"");
  const auto& dim_value = doc["dim"];
  if (!dim_value.is_number_unsigned() || dim_value.get<std::uint64_t>() == 0) {
    throw ParseError("\"dim\" must be a positive integer");
  }
  const std::uint64_t dim = dim_value.get<std::uint64_t>();
  if (dim > 4096) throw ParseError("\"dim\" = " + std::to_string(dim) + " exceeds 4096");
  const auto& entries = doc["entries"];
  if (!entries.is_array()) throw ParseError("\"entries\" must be an array");
  if (entries.size() != dim * dim) {
    throw DimensionError("\"entries\" has " + std::to_string(entries.size()) +
                         " elements, dim² = " + std::to_string(dim * dim));
  }
  const auto n = static_cast<Index>(dim);
  ComplexMatrix a(n, n);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& pair = entries[k];
    if (!pair.is_array() || pair.size() != 2) {
      throw ParseError("entries[" + std::to_string(k) + "] must be a [re, im] pair");
    }
    const auto i = static_cast<Index>(k / dim);
    const auto j = static_cast<Index>(k % dim);
    a(i, j) = Complex(entry_component(pair[0], k, 0), entry_component(pair[1], k, 1));
  }
  return a;
}

std::string serialize_matrix(const ComplexMatrix& a) {
  require_square_finite(a, "serialize_matrix");
  std::string out = "{\n  \"dim\": " + std::to_string(a.rows()) + ",\n  \"entries\": [\n";
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out += "    [" + format_double(a(i, j).real()) + ", " + format_double(a(i, j).imag()) + "]";
      out += (i + 1 == a.rows() && j + 1 == a.cols()) ? "\n" : ",\n";
    }
  }
  out += "  ]\n}\n";
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

ComplexMatrix read_matrix_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_matrix(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const DimensionError& e) {
    throw DimensionError(path.string() + ": " + e.what());
  }
}

std::string digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string bench_csv(const BenchReport& report) {
  std::string out(kBenchCsvHeader);
  out += '\n';
  for (const auto& e : report.entries) {
    out += std::to_string(e.dim) + ',' + std::string(method_name(e.method)) + ',' +
           format_double(e.stats.median_seconds) + ',' + format_double(e.stats.min_seconds) + ',' +
           format_double(e.stats.mean_seconds) + ',' + format_double(e.stats.stddev_seconds) + ',' +
           std::to_string(e.stats.reps) + '\n';
  }
  return out;
}

Json matrix_json(const ComplexMatrix& a) {
  Json entries = Json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) entries.push_back({a(i, j).real(), a(i, j).imag()});
  }
  Json out;
  out["dim"] = a.rows();
  out["entries"] = std::move(entries);
  return out;
}

Json fidelity_json(const FidelityResult& r) {
  Json out;
  out["method"] = method_name(r.method);
  out["value"] = r.value;
  out["raw_value"] = r.raw_value;
  out["max_imag_residual"] = r.max_imag_residual;
  out["clamped_mass"] = r.clamped_mass;
  out["elapsed_seconds"] = r.elapsed_seconds;
  return out;
}

Json suite_json(const SuiteReport& report) {
  Json out;
  out["seeds"] = {{"master_seed", report.master_seed},
                  {"trial_stream", "StateSeed{master_seed, trial_index}"}};
  out["dims"] = report.dims;
  out["trials"] = report.trials;
  out["tol_profile"] = profile_name(report.profile);
  out["all_passed"] = report.all_passed();
  Json props = Json::array();
  for (const auto& p : report.properties) {
    Json item;
    item["name"] = p.name;
    item["passed"] = p.passed;
    item["worst_residual"] = std::isfinite(p.worst_residual) ? Json(p.worst_residual) : Json("inf");
    item["threshold"] = p.threshold;
    item["trials"] = p.trials;
    item["first_failure"] = p.first_failure;
    props.push_back(std::move(item));
  }
  out["properties"] = std::move(props);
  return out;
}

Json bench_json(const BenchReport& report) {
  Json out;
  Json methods = Json::array();
  for (auto m : report.config.methods) methods.push_back(method_name(m));
  out["config"] = {{"dims", report.config.dims},
                   {"reps", report.config.reps},
                   {"warmup", report.config.warmup_reps},
                   {"methods", methods},
                   {"threads", report.threads}};
  out["seeds"] = {{"master_seed", report.config.master_seed},
                  {"pair_stream", "StateSeed{master_seed, dim}"}};
  out["mode"] = report.multithreaded ? "multi-threaded" : "single-threaded";
  Json results = Json::array();
  for (const auto& e : report.entries) {
    Json item;
    item["dim"] = e.dim;
    item["method"] = method_name(e.method);
    item["median_s"] = e.stats.median_seconds;
    item["min_s"] = e.stats.min_seconds;
    item["mean_s"] = e.stats.mean_seconds;
    item["stddev_s"] = e.stats.stddev_seconds;
    item["reps"] = e.stats.reps;
    item["fidelity"] = e.stats.fidelity_value;
    results.push_back(std::move(item));
  }
  out["results"] = std::move(results);
  Json speedups = Json::array();
  for (const auto& s : report.speedups) {
    speedups.push_back({{"dim", s.dim}, {"classic_over_product_eig", s.speedup}});
  }
  out["speedup"] = std::move(speedups);
  Json scaling = Json::array();
  for (const auto& f : report.scaling) {
    scaling.push_back({{"method", method_name(f.method)}, {"exponent", f.exponent}, {"points", f.points}});
  }
  out["scaling_exponent"] = std::move(scaling);
  return out;
}

Json report_header(std::string_view command) {
  Json out;
  out["tool"] = "uhlfid";
  out["version"] = version();
  out["command"] = command;
  return out;
}

std::string dump_report(const Json& report) { return report.dump(2) + "\n"; }

}  // namespace uhlfid
