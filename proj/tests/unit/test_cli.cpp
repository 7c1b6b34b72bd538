#include "doctest.h"

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "uhlfid/cli.hpp"
#include "uhlfid/io.hpp"
#include "uhlfid/states.hpp"

using namespace uhlfid;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args, const CliHooks& hooks = {}) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err, hooks);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("uhlfid_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const ComplexMatrix& m) const {
    const fs::path p = path / name;
    write_text_file(p, serialize_matrix(m));
    return p.string();
  }
  std::string at(const std::string& name) const { return (path / name).string(); }
};

int count_lines_with(const std::string& text, const std::string& needle) {
  std::istringstream in(text);
  int n = 0;
  for (std::string line; std::getline(in, line);) n += line.find(needle) != std::string::npos;
  return n;
}

}  // namespace

TEST_CASE("usage errors exit 64") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"compute", "--rho", "a.json"}).code == kExitUsage);
  CHECK(run({"verify", "--trials", "x"}).code == kExitUsage);
  CHECK(run({"verify", "--dims", "2,x"}).code == kExitUsage);
  CHECK(run({"verify", "--tol-profile", "lenient"}).code == kExitUsage);
  CHECK(run({"bench", "--methods", "fast"}).code == kExitUsage);
  CHECK(run({"bench", "--threads", "0"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({"compute", "--help"}).out.find("--all-methods") != std::string::npos);
}

TEST_CASE("compute on identical files prints 1") {
  TempDir dir;
  const std::string rho = dir.file("rho.json", random_density(4, 4, StateSeed{1, 1}).mat());
  const Run r = run({"compute", "--rho", rho, "--sigma", rho});
  CHECK(r.code == kExitOk);
  std::istringstream in(r.out);
  std::string line;
  double value = -1.0;
  while (std::getline(in, line)) {
    if (line.rfind("product-eig", 0) == 0) value = std::stod(line.substr(14));
  }
  CHECK(std::abs(value - 1.0) <= 1e-10);
}

TEST_CASE("compute rejects a non-PSD file with exit 2") {
  TempDir dir;
  ComplexMatrix bad(2, 2);
  bad << 0.5, 0.6, 0.6, 0.5;
  const std::string rho = dir.file("bad.json", bad);
  const std::string sigma = dir.file("ok.json", maximally_mixed(2).mat());
  const Run r = run({"compute", "--rho", rho, "--sigma", sigma});
  CHECK(r.code == kExitValidation);
  CHECK(r.err.find("NegativityError") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("compute input errors") {
  TempDir dir;
  const std::string ok = dir.file("ok.json", maximally_mixed(2).mat());
  CHECK(run({"compute", "--rho", dir.at("missing.json"), "--sigma", ok}).code == kExitValidation);
  write_text_file(dir.at("short.json"), R"({"dim":2,"entries":[[1,0]]})");
  const Run r = run({"compute", "--rho", dir.at("short.json"), "--sigma", ok});
  CHECK(r.code == kExitValidation);
  CHECK(r.err.find("DimensionError") != std::string::npos);
  const std::string big = dir.file("big.json", maximally_mixed(3).mat());
  CHECK(run({"compute", "--rho", big, "--sigma", ok}).code == kExitValidation);
  CHECK(run({"compute", "--rho", ok, "--sigma", ok, "--tol", "-1"}).code == kExitUsage);
}

TEST_CASE("compute --all-methods") {
  TempDir dir;
  const std::string rho = dir.file("rho.json", random_density(4, 4, StateSeed{2, 1}).mat());
  const std::string sigma = dir.file("sigma.json", random_density(4, 4, StateSeed{2, 2}).mat());
  const Run r = run({"compute", "--rho", rho, "--sigma", sigma, "--all-methods", "--report", dir.at("r.json")});
  CHECK(r.code == kExitOk);
  for (const char* m : {"trace-norm", "classic", "product-sqrt", "product-eig"}) {
    CHECK(count_lines_with(r.out, m) == 1);
  }
  const auto pos = r.out.find("max_disagreement ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(r.out.substr(pos + 17)) <= 1e-8);

  const Json report = Json::parse(read_text_file(dir.at("r.json")));
  CHECK(report["tool"] == "uhlfid");
  CHECK(report["results"].size() == 4);
  CHECK(report["inputs"]["rho"]["digest"] == digest(read_text_file(rho)));
  CHECK(report["max_disagreement"].get<double>() <= 1e-8);
}

TEST_CASE("compute stdout is byte-identical across runs") {
  TempDir dir;
  const std::string rho = dir.file("rho.json", random_density(6, 3, StateSeed{3, 1}).mat());
  const std::string sigma = dir.file("sigma.json", random_density(6, 6, StateSeed{3, 2}).mat());
  const std::vector<std::string> args{"compute", "--rho", rho, "--sigma", sigma, "--all-methods"};
  CHECK(run(args).out == run(args).out);
}

TEST_CASE("verify is reproducible and writes identical reports") {
  TempDir dir;
  const Run a = run({"verify", "--dims", "2,4", "--trials", "5", "--seed", "7", "--report", dir.at("a.json")});
  const Run b = run({"verify", "--dims", "2,4", "--trials", "5", "--seed", "7", "--report", dir.at("b.json")});
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(read_text_file(dir.at("a.json")) == read_text_file(dir.at("b.json")));
  const Json report = Json::parse(read_text_file(dir.at("a.json")));
  CHECK(report["seeds"]["master_seed"] == 7);
  CHECK(report["all_passed"] == true);
  CHECK(report["command"] == "uhlfid verify --dims 2,4 --trials 5 --seed 7 --tol-profile default");
}

TEST_CASE("verify with an injected fault exits 1 and still writes the report") {
  TempDir dir;
  CliHooks hooks;
  hooks.evaluator = [](const DensityMatrix& r, const DensityMatrix& s, FidelityMethod m) {
    FidelityResult out = fidelity(r, s, m);
    if (m == FidelityMethod::TraceNorm) out.value = 0.5 * out.value;
    return out;
  };
  const Run r = run({"verify", "--dims", "2", "--trials", "2", "--report", dir.at("f.json")}, hooks);
  CHECK(r.code == kExitPropertyFailure);
  CHECK(r.out.find("FAIL") != std::string::npos);
  const Json report = Json::parse(read_text_file(dir.at("f.json")));
  CHECK(report["all_passed"] == false);

  CHECK(run({"verify", "--dims", "2", "--trials", "2", "--inject-fault"}).code == kExitPropertyFailure);
}

TEST_CASE("bench smoke, table and CSV") {
  TempDir dir;
  const Run r = run({"bench", "--dims", "16,32", "--reps", "3", "--seed", "1", "--csv", dir.at("b.csv"), "--report",
                     dir.at("b.json")});
  CHECK(r.code == kExitOk);
  CHECK(count_lines_with(r.out, " classic   ") == 2);
  CHECK(count_lines_with(r.out, " product-eig   ") == 2);
  CHECK(r.out.find("speedup") != std::string::npos);

  const std::string csv = read_text_file(dir.at("b.csv"));
  CHECK(csv.substr(0, csv.find('\n')) == "dim,method,median_s,min_s,mean_s,stddev_s,reps");
  CHECK(count_lines_with(csv, ",") == 5);

  const Json report = Json::parse(read_text_file(dir.at("b.json")));
  CHECK(report["results"].size() == 4);
  CHECK(report["speedup"].size() == 2);
  CHECK(report["mode"] == "single-threaded");
}

TEST_CASE("bench rejects invalid configs with exit 2") {
  CHECK(run({"bench", "--dims", "32,16", "--reps", "3"}).code == kExitValidation);
  CHECK(run({"bench", "--dims", "16", "--reps", "2"}).code == kExitValidation);
}

TEST_CASE("UHLFID_THREADS mirrors --threads, flag wins") {
  TempDir dir;
  ::setenv("UHLFID_THREADS", "2", 1);
  CHECK(run({"bench", "--dims", "8", "--reps", "3", "--report", dir.at("env.json")}).code == kExitOk);
  CHECK(Json::parse(read_text_file(dir.at("env.json")))["config"]["threads"] == 2);
  CHECK(run({"bench", "--dims", "8", "--reps", "3", "--threads", "1", "--report", dir.at("flag.json")}).code ==
        kExitOk);
  CHECK(Json::parse(read_text_file(dir.at("flag.json")))["config"]["threads"] == 1);
  ::setenv("UHLFID_THREADS", "zero", 1);
  CHECK(run({"bench", "--dims", "8", "--reps", "3"}).code == kExitUsage);
  ::unsetenv("UHLFID_THREADS");
}
