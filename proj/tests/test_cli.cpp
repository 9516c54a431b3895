#include <doctest.h>

#include <bisc/cli.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = bisc::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("bisc_cli_" + name)).string();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Drops fields that legitimately differ between runs.
json numerical(json j) {
  j.erase("timing");
  j["config"].erase("output");
  return j;
}

}  // namespace

TEST_CASE("gen then oracle count") {
  const auto c8 = temp_path("c8.txt");
  const auto g = call({"gen", "--kind", "cycle", "--m", "8", "-o", c8});
  REQUIRE(g.code == 0);
  CHECK(json::parse(g.out)["result"]["nX"] == 4);

  const auto r = call({"count", "--graph", c8, "--mode", "oracle"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["result"]["value"] == "47");
  CHECK(j["result"]["certified"] == true);
  CHECK(j["config"]["subcommand"] == "count");
  CHECK(j["config"]["C1"] == 100.0);
  CHECK(j["config"].contains("caps"));
  CHECK(j.contains("timing"));

  const auto gen = call({"count", "--graph", c8, "--mode", "oracle-general"});
  CHECK(json::parse(gen.out)["result"]["value"] == "47");
}

TEST_CASE("K2,2 oracle and hard-core oracle") {
  const auto k = temp_path("k22.txt");
  write_file(k, "c K2,2\np bis 2 2 2\ne 0 0\ne 0 1\ne 1 0\ne 1 1\n");
  CHECK(json::parse(call({"count", "--graph", k}).out)["result"]["value"] == "7");
  const auto h = call({"count", "--graph", k, "--lambda", "1/2"});
  CHECK(json::parse(h.out)["result"]["value"] == "7/2");
}

TEST_CASE("invalid input exits 2 with a line diagnostic") {
  const auto bad = temp_path("bad.txt");
  write_file(bad, "p bis 2 2 2\ne 0 0\ne 0 1\ne 1 0\n");
  const auto r = call({"count", "--graph", bad});
  CHECK(r.code == 2);
  CHECK(r.err.find("line ") != std::string::npos);

  CHECK(call({"count", "--graph", temp_path("missing.txt")}).code == 2);
  CHECK(call({"count", "--bogus"}).code == 2);

  const auto c8 = temp_path("c8.txt");
  call({"gen", "--kind", "cycle", "--m", "8", "-o", c8});
  CHECK(call({"count", "--graph", c8, "--mode", "hardcore", "--lambda", "1e-3"}).code == 2);
  CHECK(call({"count", "--graph", c8, "--mode", "hardcore", "--lambda", "1e-3", "--float-lambda"}).code == 0);
  CHECK(call({"count", "--graph", c8, "--mode", "nope"}).code == 2);
}

TEST_CASE("capacity errors exit 3") {
  const auto c8 = temp_path("c8.txt");
  call({"gen", "--kind", "cycle", "--m", "8", "-o", c8});
  CHECK(call({"count", "--graph", c8, "--oracle-cap", "2"}).code == 3);
}

TEST_CASE("replaying the emitted config") {
  const auto c8 = temp_path("c8.txt");
  call({"gen", "--kind", "cycle", "--m", "8", "-o", c8});
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"count", "--graph", c8, "--mode", "general-exact", "--C1", "1"},
        std::vector<std::string>{"count", "--graph", c8, "--mode", "general", "--C1", "1", "--seed", "11"},
        std::vector<std::string>{"count", "--graph", c8, "--mode", "expander", "--C1", "1", "--eps", "0.01",
                                 "--no-brute"},
        std::vector<std::string>{"sample", "--graph", c8, "--C1", "1", "--samples", "20", "--seed", "5"}}) {
    const auto first = temp_path("first.json");
    auto a = args;
    a.push_back("-o");
    a.push_back(first);
    REQUIRE(call(a).code == 0);
    const auto second = call({"--config", first});
    REQUIRE(second.code == 0);
    CHECK(numerical(json::parse(read_file(first))) == numerical(json::parse(second.out)));
  }
}

TEST_CASE("other subcommands") {
  const auto c8 = temp_path("c8.txt");
  call({"gen", "--kind", "cycle", "--m", "8", "-o", c8});
  const auto cert = json::parse(call({"certify", "--graph", c8, "--T", "2"}).out)["result"];
  CHECK(cert["identity"] == true);
  CHECK(cert["value"] == "47");

  const auto chk = json::parse(call({"check-expander", "--graph", c8, "--alpha", "1"}).out)["result"];
  CHECK(chk["verdict"] == "falsified");

  const auto kp = json::parse(call({"verify-kp", "--graph", c8, "--C1", "1"}).out)["result"];
  CHECK(kp["kp_status"] == "violated");

  const auto s = json::parse(call({"sample", "--graph", c8, "--C1", "1", "--samples", "3"}).out)["result"];
  CHECK(s["samples"].size() == 3);

  const auto b = call({"bench", "--kind", "cycle", "--sizes", "8,12", "--modes", "oracle,general-exact", "--C1", "1"});
  REQUIRE(b.code == 0);
  CHECK(b.out.rfind("kind,size,n,d,mode", 0) == 0);
  CHECK(std::count(b.out.begin(), b.out.end(), '\n') == 5);
}
