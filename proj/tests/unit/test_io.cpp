#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <numbers>

#include "uhlfid/io.hpp"
#include "uhlfid/states.hpp"

using namespace uhlfid;

namespace {

const char* kIdentity2 =
    "{\n"
    "  \"dim\": 2,\n"
    "  \"entries\": [\n"
    "    [1, 0],\n"
    "    [0, 0],\n"
    "    [0, 0],\n"
    "    [1, 0]\n"
    "  ]\n"
    "}\n";

template <class E>
std::string message_of(const std::string& text) {
  try {
    parse_matrix(text);
  } catch (const E& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("format_double is shortest round trip") {
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-2.5) == "-2.5");
  CHECK(format_double(1e-300) == "1e-300");
  for (double v : {1.0 / 3.0, std::numbers::pi, 6.02214076e23, std::numeric_limits<double>::denorm_min(),
                   std::numeric_limits<double>::max()}) {
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("serialize identity") {
  const std::string s = serialize_matrix(ComplexMatrix::Identity(2, 2));
  CHECK(s == kIdentity2);
  CHECK(serialize_matrix(ComplexMatrix::Identity(2, 2)) == s);
  CHECK(max_abs(parse_matrix(s) - ComplexMatrix::Identity(2, 2)) == 0.0);
  CHECK(serialize_matrix(parse_matrix(kIdentity2)) == kIdentity2);
}

TEST_CASE("round trip of random matrices is exact") {
  for (std::uint64_t k = 0; k < 100; ++k) {
    GaussianSource src(StateSeed{99, k});
    const Index n = 1 + static_cast<Index>(k % 7);
    ComplexMatrix a = ginibre(n, n, src);
    a *= std::pow(10.0, static_cast<double>(k % 41) - 20.0);
    const std::string text = serialize_matrix(a);
    const ComplexMatrix b = parse_matrix(text);
    CHECK(max_abs(a - b) == 0.0);
    CHECK(serialize_matrix(b) == text);
  }
}

TEST_CASE("parse accepts non-canonical layout") {
  const ComplexMatrix a = parse_matrix(R"( {"entries":[[0.5,0],[0,-1.5e-3],[0,0],[2E2,0]],"dim":2} )");
  CHECK(a(0, 0) == Complex(0.5, 0));
  CHECK(a(0, 1) == Complex(0, -1.5e-3));
  CHECK(a(1, 1) == Complex(200, 0));
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_matrix(R"({"dim":2,"entries":[[1,0],[0,0],[0,0]]})"), DimensionError);
  CHECK_THROWS_AS(parse_matrix(R"({"dim":1,"entries":[[1e999,0]]})"), ParseError);
  CHECK_THROWS_AS(parse_matrix(R"({"dim":1,"entries":[[1,0]],"extra":1})"), ParseError);
  CHECK_THROWS_AS(parse_matrix(R"({"dim":0,"entries":[]})"), ParseError);
  CHECK_THROWS_AS(parse_matrix(R"({"dim":-1,"entries":[]})"), ParseError);
  CHECK_THROWS_AS(parse_matrix(R"({"dim":1.5,"entries":[]})"), ParseError);
  CHECK_THROWS_AS(parse_matrix(R"({"dim":1})"), ParseError);
  CHECK_THROWS_AS(parse_matrix(R"({"dim":1,"entries":[[1]]})"), ParseError);
  CHECK_THROWS_AS(parse_matrix(R"({"dim":1,"entries":[["1",0]]})"), ParseError);
  CHECK_THROWS_AS(parse_matrix(R"([1,2])"), ParseError);
  CHECK_THROWS_AS(parse_matrix(""), ParseError);

  const std::string syntax = message_of<ParseError>("{\n  \"dim\": 2,\n  \"entries\": [\n    [1, 0],,\n");
  CHECK(syntax.find("line 4") != std::string::npos);
  CHECK(message_of<ParseError>(R"({"dim":1,"entries":[[0,"x"]]})").find("entries[0].im") != std::string::npos);
}

TEST_CASE("too few entries for dim") {
  CHECK_THROWS_AS(parse_matrix(R"({"dim":3,"entries":[[1,0]]})"), DimensionError);
}

TEST_CASE("serialize refuses non-finite entries") {
  ComplexMatrix a = ComplexMatrix::Identity(1, 1);
  a(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(serialize_matrix(a), DomainError);
}

TEST_CASE("files") {
  const auto dir = std::filesystem::temp_directory_path() / "uhlfid_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "m.json";
  write_text_file(path, kIdentity2);
  CHECK(read_text_file(path) == kIdentity2);
  CHECK(max_abs(read_matrix_file(path) - ComplexMatrix::Identity(2, 2)) == 0.0);
  CHECK_THROWS_AS(read_matrix_file(dir / "missing.json"), IoError);
  write_text_file(path, "{");
  CHECK_THROWS_AS(read_matrix_file(path), ParseError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("digest is FNV-1a 64") {
  CHECK(digest("") == "fnv1a64:cbf29ce484222325");
  CHECK(digest("a") == "fnv1a64:af63dc4c8601ec8c");
  CHECK(digest("foobar") == "fnv1a64:85944171f73967e8");
}

TEST_CASE("bench csv") {
  BenchReport r;
  r.entries.push_back({64, FidelityMethod::Classic, TimingStats{0.5, 0.25, 0.5, 0.125, 3, 0.9}});
  const std::string csv = bench_csv(r);
  CHECK(csv == "dim,method,median_s,min_s,mean_s,stddev_s,reps\n64,classic,0.5,0.25,0.5,0.125,3\n");
  CHECK(csv.substr(0, csv.find('\n')) == kBenchCsvHeader);
}

TEST_CASE("report envelope") {
  const Json h = report_header("uhlfid verify --dims 2");
  auto it = h.begin();
  CHECK(it.key() == "tool");
  ++it;
  CHECK(it.key() == "version");
  ++it;
  CHECK(it.key() == "command");
  const std::string dumped = dump_report(h);
  CHECK(dumped.back() == '\n');
  CHECK(Json::parse(dumped) == h);
}
