// SPDX-License-Identifier: Apache-2.0
//
// Integration tests for the command-line tool. Each case drives the real
// binary through a scratch directory.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "appgnn/json_io.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const std::string kBin = APPGNN_BIN;

struct Scratch {
  fs::path dir;
  Scratch() : dir(fs::temp_directory_path() / "appgnn_cli_test") {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const std::string& p) const { return (dir / p).string(); }
};

int run(const std::string& args) {
  return std::system((kBin + " " + args + " >/dev/null 2>&1").c_str());
}

} // namespace

TEST_CASE("gen emits one netlist per parameter plus a manifest") {
  Scratch s;
  REQUIRE(run("gen --family lta --width 16 --param 2 --param 4 --param 6 --param 8 --out " +
              (s / "fx")) == 0);
  const json manifest = json::parse(appgnn::read_file(s / "fx/manifest.json"));
  CHECK(manifest.size() == 4);
  int files = 0;
  for (const auto& e : fs::directory_iterator(s / "fx")) {
    if (e.path().extension() == ".v") ++files;
  }
  CHECK(files == 4);
  // normalized area shrinks as k grows
  double prev = 2.0;
  for (const auto& e : manifest) {
    const double area = e.at("normalized_area").get<double>();
    CHECK(area < prev);
    prev = area;
  }
}

TEST_CASE("convert turns a batch of netlists into graph JSONs with a manifest") {
  Scratch s;
  REQUIRE(run("gen --family exact --width 4 --out " + (s / "nl")) == 0);
  REQUIRE(run("gen --family exact --width 5 --out " + (s / "nl")) == 0);
  REQUIRE(run("gen --family exact --width 6 --out " + (s / "nl")) == 0);
  std::string inputs;
  for (int w : {4, 5, 6}) {
    inputs += s / ("nl/exact_add" + std::to_string(w) + ".v");
    inputs += " ";
  }
  REQUIRE(run("convert " + inputs + " --out " + (s / "g")) == 0);
  const json manifest = json::parse(appgnn::read_file(s / "g/manifest.json"));
  CHECK(manifest.size() == 3);
  for (const auto& e : manifest) CHECK(fs::exists(e.at("graph").get<std::string>()));
}

TEST_CASE("convert fails fast on an invalid netlist") {
  Scratch s;
  std::ofstream(s / "bad.v") << "module bad; input a; output y; "
                                "NOPE u1 (.A(a), .Y(y)); endmodule\n";
  CHECK(run("convert " + (s / "bad.v") + " --out " + (s / "g")) != 0);
}

TEST_CASE("sample rejects n = 0 and writes byte-identical output for a fixed seed") {
  Scratch s;
  REQUIRE(run("gen --family lca --width 8 --param 4 --out " + (s / "nl")) == 0);
  REQUIRE(run("convert " + (s / "nl/lca_add8_k4.v") + " --labels " +
              (s / "nl/lca_add8_k4.labels.json") + " --out " + (s / "g")) == 0);
  const std::string graph = s / "g/lca_add8_k4.graph.json";

  CHECK(run("sample " + graph + " --mode leaf --n 0 --seed 1 --out " + (s / "a.json")) != 0);

  REQUIRE(run("sample " + graph + " --mode leaf --n 2 --seed 9 --out " + (s / "a.json") +
              " --report " + (s / "ra.json")) == 0);
  REQUIRE(run("sample " + graph + " --mode leaf --n 2 --seed 9 --out " + (s / "b.json")) == 0);
  CHECK(appgnn::read_file(s / "a.json") == appgnn::read_file(s / "b.json"));

  const json report = json::parse(appgnn::read_file(s / "ra.json"));
  CHECK(report.at("selected").size() == 2);
  CHECK(report.at("added").size() == 2);
}

TEST_CASE("eval with a missing checkpoint reports a clear error") {
  Scratch s;
  REQUIRE(run("gen --family exact --width 4 --out " + (s / "nl")) == 0);
  REQUIRE(run("convert " + (s / "nl/exact_add4.v") + " --labels " +
              (s / "nl/exact_add4.labels.json") + " --out " + (s / "g")) == 0);
  CHECK(run("eval " + (s / "g/exact_add4.graph.json") + " --checkpoint " + (s / "nope.json") +
            " --out " + (s / "e")) != 0);
}
