#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "ldslab/mps.hpp"
#include "support/paths.hpp"

using testsupport::ScratchDir;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
  const std::string command = std::string(LDSLAB_CLI_PATH) + " " + args + " 2>&1";
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 1024> buffer;
  while (fgets(buffer.data(), buffer.size(), pipe)) result.output += buffer.data();
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string fixA(const std::string& file) {
  return (testsupport::fixture_dir() / file).string();
}

}  // namespace

TEST_CASE("compare writes a four-row report and exits zero") {
  ScratchDir dir;
  const RunResult r = run_cli("compare --config " + fixA("fixA.toml") + " --ts " +
                              fixA("fixA.csv") + " --formulation all --solver reference -o " +
                              dir.path().string());
  CHECK(r.exit_code == 0);
  const std::string report = testsupport::read_file(dir.file("report.csv"));
  int lines = 0;
  for (char c : report) {
    if (c == '\n') ++lines;
  }
  CHECK(lines == 5);  // header + 4 formulations
  CHECK(report.find("explicit-hourly,optimal") != std::string::npos);
  CHECK(report.find("original,optimal") != std::string::npos);
  CHECK(testsupport::read_file(dir.file("manifest.json")).find("\"seed\": 7") !=
        std::string::npos);
}

TEST_CASE("compare reports are deterministic outside the timing columns") {
  ScratchDir dir1, dir2;
  const std::string args = "compare --config " + fixA("fixA.toml") + " --ts " + fixA("fixA.csv") +
                           " --formulation all --solver reference -o ";
  REQUIRE(run_cli(args + dir1.path().string()).exit_code == 0);
  REQUIRE(run_cli(args + dir2.path().string()).exit_code == 0);

  auto strip_times = [](const std::string& csv) {
    std::string out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
      std::size_t end = csv.find('\n', pos);
      if (end == std::string::npos) end = csv.size();
      const std::string line = csv.substr(pos, end - pos);
      pos = end + 1;
      if (line.empty()) continue;
      std::vector<std::string> fields;
      std::size_t p = 0;
      while (true) {
        const std::size_t comma = line.find(',', p);
        fields.push_back(line.substr(p, comma - p));
        if (comma == std::string::npos) break;
        p = comma + 1;
      }
      if (fields.size() == 10) {
        fields[6] = "-";
        fields[7] = "-";
      }
      for (std::size_t i = 0; i < fields.size(); ++i) {
        out += fields[i];
        out += i + 1 < fields.size() ? "," : "\n";
      }
    }
    return out;
  };
  const std::string a = strip_times(testsupport::read_file(dir1.file("report.csv")));
  const std::string b = strip_times(testsupport::read_file(dir2.file("report.csv")));
  CHECK(a == b);
}

TEST_CASE("missing timeseries file exits 1 and names the path") {
  ScratchDir dir;
  const RunResult r = run_cli("compare --config " + fixA("fixA.toml") +
                              " --ts /nonexistent/path.csv --formulation all -o " +
                              dir.path().string());
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("/nonexistent/path.csv") != std::string::npos);
}

TEST_CASE("export-mps produces a file the parser accepts") {
  ScratchDir dir;
  const RunResult r = run_cli("export-mps --config " + fixA("fixA.toml") + " --ts " +
                              fixA("fixA.csv") + " --formulation implicit-minmax -o " +
                              dir.path().string());
  REQUIRE(r.exit_code == 0);
  const ldslab::LpModel model = ldslab::parse_mps(dir.file("model.mps"));
  CHECK(model.num_rows() > 0);
  CHECK(model.num_vars() > 0);
}

TEST_CASE("aggregate writes byte-identical mappings per seed") {
  ScratchDir dir1, dir2;
  const std::string args = "aggregate --config " + fixA("fixA.toml") + " --ts " +
                           fixA("fixA.csv") + " -o ";
  REQUIRE(run_cli(args + dir1.path().string()).exit_code == 0);
  REQUIRE(run_cli(args + dir2.path().string()).exit_code == 0);
  CHECK(testsupport::read_file(dir1.file("mapping.csv")) ==
        testsupport::read_file(dir2.file("mapping.csv")));
  CHECK(testsupport::read_file(dir1.file("representatives.csv")) ==
        testsupport::read_file(dir2.file("representatives.csv")));

  ScratchDir dir3;
  REQUIRE(run_cli(args + dir3.path().string() + " --seed 99").exit_code == 0);
  CHECK(testsupport::read_file(dir3.file("manifest.json")).find("\"seed\": 99") !=
        std::string::npos);
}

TEST_CASE("validate-soc audits the original formulation on FIX-B") {
  ScratchDir dir;
  const RunResult r = run_cli("validate-soc --config " + fixA("fixB.toml") + " --ts " +
                              fixA("fixB.csv") + " --formulation original -o " +
                              dir.path().string());
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("2 over, 0 under") != std::string::npos);
  const std::string violations = testsupport::read_file(dir.file("violations.csv"));
  CHECK(violations.find("h2store,2,0") != std::string::npos);
  const std::string soc = testsupport::read_file(dir.file("soc_h2store.csv"));
  CHECK(soc.rfind("step,soc\n", 0) == 0);
}

TEST_CASE("solve writes trajectories and the manifest records the objective") {
  ScratchDir dir;
  const RunResult r = run_cli("solve --config " + fixA("fixA.toml") + " --ts " +
                              fixA("fixA.csv") + " --formulation explicit-hourly -o " +
                              dir.path().string());
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("status optimal") != std::string::npos);
  const std::string manifest = testsupport::read_file(dir.file("manifest.json"));
  CHECK(manifest.find("\"objective\"") != std::string::npos);
  CHECK(manifest.find("\"rows\"") != std::string::npos);
  CHECK(testsupport::read_file(dir.file("soc_lds1.csv")).rfind("step,soc\n", 0) == 0);
}

TEST_CASE("identity mapping flag runs the full-resolution model") {
  ScratchDir dir;
  const RunResult r = run_cli("solve --config " + fixA("fixA.toml") + " --ts " +
                              fixA("fixA.csv") +
                              " --formulation implicit-minmax --identity-mapping -o " +
                              dir.path().string());
  REQUIRE(r.exit_code == 0);
  const std::string manifest = testsupport::read_file(dir.file("manifest.json"));
  CHECK(manifest.find("\"identity_mapping\": true") != std::string::npos);
}

TEST_CASE("a failing external solver maps to exit code 2") {
  ScratchDir dir;
  ::setenv("LDSLAB_SOLVER_CMD", "exit 7 # {mps} {sol}", 1);
  const RunResult r = run_cli("solve --config " + fixA("fixA.toml") + " --ts " +
                              fixA("fixA.csv") +
                              " --formulation explicit-hourly --solver external -o " +
                              dir.path().string());
  ::unsetenv("LDSLAB_SOLVER_CMD");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("solver") != std::string::npos);
}

TEST_CASE("unknown formulation is a usage error") {
  ScratchDir dir;
  const RunResult r = run_cli("solve --config " + fixA("fixA.toml") + " --ts " +
                              fixA("fixA.csv") + " --formulation bogus -o " +
                              dir.path().string());
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("bogus") != std::string::npos);
}

#ifdef LDSLAB_MPS_SOLVE_PATH
TEST_CASE("external backend through the shim matches the reference backend") {
  ScratchDir ref_dir, ext_dir;
  const std::string common = "solve --config " + fixA("fixA.toml") + " --ts " + fixA("fixA.csv") +
                             " --formulation implicit-minmax -o ";
  REQUIRE(run_cli(common + ref_dir.path().string()).exit_code == 0);

  ::setenv("LDSLAB_SOLVER_CMD", (std::string(LDSLAB_MPS_SOLVE_PATH) + " {mps} {sol}").c_str(), 1);
  const RunResult ext =
      run_cli(common + ext_dir.path().string() + " --solver external");
  ::unsetenv("LDSLAB_SOLVER_CMD");
  REQUIRE(ext.exit_code == 0);

  auto objective_of = [](const std::string& manifest) {
    const std::size_t pos = manifest.find("\"objective\": ");
    REQUIRE(pos != std::string::npos);
    return std::stod(manifest.substr(pos + 13));
  };
  const double ref_obj = objective_of(testsupport::read_file(ref_dir.file("manifest.json")));
  const double ext_obj = objective_of(testsupport::read_file(ext_dir.file("manifest.json")));
  CHECK(ext_obj == doctest::Approx(ref_obj).epsilon(1e-6).scale(1.0 + std::abs(ref_obj)));
}
#endif
