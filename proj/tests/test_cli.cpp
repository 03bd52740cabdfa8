#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dstab/cli.hpp"

using namespace dstab;
using nlohmann::json;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

std::string write_temp(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("dstab_test_" + name);
  std::ofstream(path) << body;
  return path.string();
}

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "dstab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

}  // namespace

TEST_CASE("bound on the 3x3 identity") {
  const auto path = write_temp("id3.txt", "3\n1 0 0\n0 1 0\n0 0 1\n");
  const auto r = invoke({"bound", "--input", path});
  CHECK(r.status == 0);
  const auto j = json::parse(r.out);
  CHECK(j["det_exact"].get<double>() == doctest::Approx(1.0));
  CHECK(j["bounds"]["hadamard"]["value"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("sample on the rotation generator") {
  const auto path = write_temp("rot.txt", "2\n0 1\n-1 0\n");
  const auto r = invoke({"sample", "--input", path, "--theta", "0.785", "--trials", "1000", "--seed", "42"});
  CHECK(r.status == 0);
  CHECK(json::parse(r.out)["violations"] == 1000);
}

TEST_CASE("certify picks the dominance certificate") {
  const auto path = write_temp("dom.json", R"({"n": 2, "rows": [[-2, 1], [1, -2]]})");
  const auto r = invoke({"certify", "--input", path, "--format", "json"});
  CHECK(r.status == 0);
  const auto j = json::parse(r.out);
  CHECK(j["selected"] == "SectorDominant");
  CHECK(j["certificates"].size() == 1);
  CHECK(j["certificates"][0]["theta"].get<double>() == doctest::Approx(std::asin(0.5)).epsilon(1e-5));
  const auto all = json::parse(invoke({"certify", "--input", path, "--format", "json", "--all"}).out);
  CHECK(all["certificates"].size() >= 4);
}

TEST_CASE("exit statuses") {
  const auto good = write_temp("good.txt", "2\n-1 0\n0 -1\n");
  const auto bad = write_temp("bad.txt", "2\n1 2\n");
  CHECK(invoke({"classify", "--input", bad}).status == 2);
  CHECK(invoke({"classify", "--input", good, "--bogus"}).status == 2);
  CHECK(invoke({"classify", "--input", good, "--theta", "2.0"}).status == 2);
  CHECK(invoke({"sample", "--input", good, "--trials", "0", "--theta", "0.1"}).status == 2);
  CHECK(invoke({"classify", "--input", "/nonexistent/matrix.txt"}).status == 2);
  const auto missing = invoke({"sample", "--input", good});
  CHECK(missing.status == 3);
  CHECK(json::parse(missing.err)["error"] == "InvalidArgument");
  CHECK(invoke({"classify", "--input", good}).status == 0);
  CHECK(invoke({"verify", "--input", good, "--theta", "0.1", "--trials", "50"}).status == 0);
}

TEST_CASE("CSV and pretty output") {
  const auto path = write_temp("neg.txt", "2\n-1 0\n0 -2\n");
  const auto csv = invoke({"sample", "--input", path, "--theta", "0.1", "--trials", "4", "--output", "csv"});
  CHECK(csv.status == 0);
  CHECK(csv.out.rfind("trial,d,re,im,slack\n", 0) == 0);
  const auto pretty = invoke({"classify", "--input", path, "--output", "pretty"});
  CHECK(pretty.status == 0);
  CHECK(json::parse(pretty.out).is_object());
  CHECK(invoke({"classify", "--input", path, "--output", "csv"}).status == 2);
}

TEST_CASE("identical runs give identical output") {
  const auto path = write_temp("rand.txt", "3\n-3 1 0.5\n0.2 -2 1\n1 -0.5 -4\n");
  const std::vector<std::string> base = {"sample", "--input", path, "--theta", "0.9", "--trials", "2000", "--seed", "42"};
  auto with_threads = [&](const char* t) {
    auto args = base;
    args.insert(args.end(), {"--threads", t});
    return invoke(args).out;
  };
  const auto one = with_threads("1");
  CHECK(one == with_threads("1"));
  CHECK(one == with_threads("8"));
  CHECK(invoke({"bound", "--input", path, "--seed", "42"}).out == invoke({"bound", "--input", path, "--seed", "42"}).out);
}
