#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace nvfix;
using namespace nvfix::testing;

namespace {

struct Run {
  int code;
  std::string out;
};

// Runs the CLI through the shell with stderr discarded.
Run run_cli(const std::string &args, const std::string &env = "") {
  const std::string cmd =
      env + " '" + std::string(NVFIX_CLI_PATH) + "' " + args + " 2>/dev/null";
  FILE *pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe))
    out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string fixture_path(const std::string &name) {
  return "'" + std::string(NVFIX_FIXTURE_DIR) + "/" + name + ".json'";
}

std::filesystem::path scratch_dir() {
  auto p = std::filesystem::temp_directory_path() / "nvfix_cli_test";
  std::filesystem::create_directories(p);
  return p;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("compute on the Klein fixture") {
  const Run r = run_cli("compute --invariant all " + fixture_path("klein"));
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["lefschetz"] == "1");
  CHECK(j["nielsen"] == "1");
  CHECK(j["trace"].size() == 1);
  CHECK(j["diagnostics"]["index_pi_Gamma"] == "2");

  const Run l = run_cli("compute --invariant lefschetz " + fixture_path("circle_degree3"));
  REQUIRE(l.code == 0);
  CHECK(Json::parse(l.out)["lefschetz"] == "-2");
}

TEST_CASE("validate") {
  Run r = run_cli("validate " + fixture_path("klein"));
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out)["valid"] == true);

  r = run_cli("validate " + fixture_path("klein_broken"));
  CHECK(r.code == 1);
  const Json j = Json::parse(r.out);
  CHECK(j["valid"] == false);
  CHECK(j["problems"].dump().find("b*b*c^-1") != std::string::npos);

  // computing on an invalid document also fails validation
  CHECK(run_cli("compute " + fixture_path("klein_broken")).code == 1);
}

TEST_CASE("compare and oracle") {
  Run r = run_cli("--format text compare " + fixture_path("klein"));
  CHECK(r.code == 0);
  CHECK(r.out.rfind("algebraic == geometric", 0) == 0);

  for (const auto &name : lift_fixtures()) {
    CAPTURE(name);
    r = run_cli("compare " + fixture_path(name));
    CHECK(r.code == 0);
    CHECK(Json::parse(r.out)["match"] == true);
  }

  r = run_cli("oracle " + fixture_path("klein"));
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out)["fixed_points"].size() == 1);

  // the degenerate Hantzsche-Wendt fixture has no lift block
  CHECK(run_cli("oracle " + fixture_path("hantzsche_wendt_negation")).code == 1);
}

TEST_CASE("degenerate lift exits with 2") {
  const auto path = scratch_dir() / "identity.json";
  std::ofstream(path) << R"({
    "group": {"dimension": 1, "lattice": [{"name": "a", "vector": ["1"]}]},
    "morphism": {"n": 1, "images": {"a": {"components": ["a"]}}},
    "lift": {"branches": [{"matrix": [["1"]], "translation": ["0"]}]}
  })";
  CHECK(run_cli("oracle '" + path.string() + "'").code == 2);
}

TEST_CASE("I/O and parse errors exit with 4") {
  CHECK(run_cli("compute /nonexistent/input.json").code == 4);
  const auto path = scratch_dir() / "garbage.json";
  std::ofstream(path) << "{ not json";
  CHECK(run_cli("compute '" + path.string() + "'").code == 4);
  CHECK(run_cli("compute --invariant euler " + fixture_path("klein")).code == 4);
  CHECK(run_cli("").code == 4);
}

TEST_CASE("output file and formats") {
  const auto path = scratch_dir() / "out.json";
  std::filesystem::remove(path);
  Run r = run_cli("--out '" + path.string() + "' compute " + fixture_path("torus_negation"));
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::stringstream ss;
  ss << std::ifstream(path).rdbuf();
  CHECK(Json::parse(ss.str())["nielsen"] == "4");

  r = run_cli("--format text compute " + fixture_path("klein"));
  CHECK(r.code == 0);
  CHECK(r.out.find("lefschetz: 1") != std::string::npos);

  r = run_cli("compute " + fixture_path("klein"), "NVFIX_FORMAT=text");
  CHECK(r.out.find("nielsen: 1") != std::string::npos);

  r = run_cli("--threads 2 compute " + fixture_path("torus_3valued"));
  CHECK(Json::parse(r.out)["nielsen"] == "6");
}

TEST_CASE("output is byte-stable") {
  for (const auto &name : lift_fixtures()) {
    const Run a = run_cli("compare " + fixture_path(name));
    const Run b = run_cli("--threads 1 compare " + fixture_path(name));
    CHECK(a.out == b.out);
  }
}

} // TEST_SUITE
