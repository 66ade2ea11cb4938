#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "eigenorbit/io.hpp"

using namespace eigenorbit;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string command = std::string(CLI_PATH) + " " + args + " > cli_stdout.txt 2> cli_stderr.txt";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

io::json read_json(const fs::path& path) {
  std::ifstream in(path);
  return io::json::parse(in);
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run("") == 2);
  CHECK(run("trace-curve --n 1 --m 1") == 2);
  CHECK(run("trajectory --energy 1+") == 2);
  CHECK(run("trajectory --potential 'x^6' --energy 1 --exact") == 2);
  CHECK(run("trajectory --potential 'sin(x)' --energy 1") == 2);
  CHECK(run("no-such-command") == 2);
}

TEST_CASE("numerical errors exit with 3") {
  CHECK(run("separatrix --potential '(x-1)^2*(x+1)^2*(x-2)^2*(x+2)^2' --energy 16.489+10i --from 1 --to 0.3 "
            "--closure-tol 1e-3 --tmax 50") == 3);
}

TEST_CASE("trajectory CSV and manifest") {
  REQUIRE(run("trajectory --potential 'x^4-5x^2' --energy -1 --x0 0.5 --tmax 10 --out cli_orbit.csv") == 0);
  std::ifstream csv("cli_orbit.csv");
  const io::TrajectoryTable table = io::read_trajectory_csv(csv);
  CHECK(table.t.back() == doctest::Approx(10.0));
  for (const auto x : table.x) CHECK(x.real() > 0.0);
  const io::RunManifest m = io::manifest_from_json(read_json("cli_orbit.manifest.json"));
  CHECK(m.command == "trajectory");
  CHECK(m.outputs.front() == "cli_orbit.csv");
  CHECK(m.version == EIGENORBIT_VERSION);
}

TEST_CASE("exact trajectory matches the library") {
  REQUIRE(run("trajectory --energy 0.6725431089+1i --exact --tmax 5 --dt 0.5 --out cli_exact.csv") == 0);
  std::ifstream csv("cli_exact.csv");
  const io::TrajectoryTable table = io::read_trajectory_csv(csv);
  REQUIRE(table.t.size() == 11);
  CHECK(std::abs(table.x[0]) == 0.0);
  CHECK(table.t.back() == doctest::Approx(5.0));
}

TEST_CASE("reruns are bit-identical") {
  REQUIRE(run("trajectory --energy -1-1i --tmax 5 --out cli_a.csv") == 0);
  REQUIRE(run("trajectory --energy -1-1i --tmax 5 --out cli_b.csv") == 0);
  std::ifstream a("cli_a.csv");
  std::ifstream b("cli_b.csv");
  const std::string sa((std::istreambuf_iterator<char>(a)), {});
  const std::string sb((std::istreambuf_iterator<char>(b)), {});
  CHECK(sa == sb);
}

TEST_CASE("trace-curve writes both branches") {
  REQUIRE(run("trace-curve --n 3 --m 1 --max-radius 1.5 --step 0.05 --out cli_curve.csv --jobs 2") == 0);
  std::ifstream up("cli_curve.csv");
  std::ifstream down("cli_curve_conj.csv");
  const io::CurveTable upper = io::read_curve_csv(up);
  const io::CurveTable lower = io::read_curve_csv(down);
  REQUIRE(upper.energies.size() == lower.energies.size());
  CHECK(std::abs(lower.energies.back() - std::conj(upper.energies.back())) < 1e-8);
  CHECK(fs::exists("cli_curve.manifest.json"));
}

TEST_CASE("classify keeps the order of starting points") {
  REQUIRE(run("classify --energy -1 --x0 0.5 --x0 -0.5 --x0 1 --tmax 20 --jobs 3 --out cli_classify.json") == 0);
  const io::json doc = read_json("cli_classify.json");
  REQUIRE(doc.at("records").size() == 3);
  CHECK(doc["records"][0]["x0"] == io::format_complex(0.5));
  CHECK(doc["records"][1]["x0"] == io::format_complex(-0.5));
  for (const auto& r : doc["records"]) CHECK(r.at("verdict") == "periodic");
  CHECK(doc.at("closure_tol") == 1e-4);
}
