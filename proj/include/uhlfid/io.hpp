#pragma once

// Matrix files, run reports and the benchmark CSV table.
//
// Matrix file grammar (a JSON document):
//
//   {
//     "dim": <positive integer>,
//     "entries": [
//       [<re>, <im>],
//       ...            dim·dim pairs, row-major
//     ]
//   }
//
// No other keys are allowed. Numbers must be finite. The canonical form,
// produced by serialize_matrix, uses exactly the layout above: two-space
// indentation, one entry per line, shortest round-trip decimals and a final
// newline. Parsing canonical text and serializing again is byte-identical.

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

#include "uhlfid/bench.hpp"
#include "uhlfid/fidelity.hpp"
#include "uhlfid/verify.hpp"

namespace uhlfid {

using Json = nlohmann::ordered_json;

/// Shortest decimal that parses back to exactly `v`.
std::string format_double(double v);

ComplexMatrix parse_matrix(std::string_view text);
std::string serialize_matrix(const ComplexMatrix& a);

/// Reads and parses a matrix file. IoError when the file cannot be read.
ComplexMatrix read_matrix_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// "fnv1a64:" followed by 16 hex digits of the FNV-1a hash of `bytes`.
std::string digest(std::string_view bytes);

/// Header of the benchmark CSV table.
inline constexpr std::string_view kBenchCsvHeader = "dim,method,median_s,min_s,mean_s,stddev_s,reps";

std::string bench_csv(const BenchReport& report);

Json matrix_json(const ComplexMatrix& a);
Json fidelity_json(const FidelityResult& r);
Json suite_json(const SuiteReport& report);
Json bench_json(const BenchReport& report);

/// Envelope shared by all reports: tool, version and command, in that order.
Json report_header(std::string_view command);

/// Pretty-printed with two-space indentation and a final newline.
std::string dump_report(const Json& report);

}  // namespace uhlfid
