#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string output;
};

Result cli(const std::string& args) {
  const std::string cmd = std::string(CGVF_CLI_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path workdir() {
  const fs::path dir = fs::temp_directory_path() / "cgvf_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const fs::path p = workdir() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("short bundled run exits 1 and still writes its trace") {
  const auto csv = (workdir() / "short.csv").string();
  const auto json = (workdir() / "short.json").string();
  fs::remove(csv);
  const auto r = cli("simulate helicoid_case1 --override t_end=0.01 --csv " + csv + " --json " + json);
  CHECK(r.code == 1);
  CHECK(contains(r.output, "C1"));
  CHECK(fs::exists(csv));
  CHECK(contains(slurp(json), "\"all_pass\": false"));
}

TEST_CASE("repeated runs produce byte-identical CSV") {
  const auto a = (workdir() / "a.csv").string();
  const auto b = (workdir() / "b.csv").string();
  const std::string common = "simulate torus4d_case2 --set integrator.t_end=0.05 --json " +
                             (workdir() / "ab.json").string() + " --csv ";
  REQUIRE(cli(common + a).code == 1);
  REQUIRE(cli(common + b).code == 1);
  const auto text = slurp(a);
  CHECK(!text.empty());
  CHECK(text == slurp(b));
}

TEST_CASE("converging scenario exits 0") {
  const auto path = write_file("single.json", R"({
  "name": "single",
  "manifold": "circle2",
  "robots": {"initial": [{"x": [1.2, 0.3], "omega": [0.0]}]},
  "integrator": {"dt": 0.01, "t_end": 10}
})");
  const auto r = cli("simulate " + path + " --csv " + (workdir() / "single.csv").string() + " --json " +
                     (workdir() / "single.json.out").string());
  CHECK(r.code == 0);
  CHECK(contains(r.output, "PASS"));
}

TEST_CASE("initial separation violation exits 2") {
  const auto path = write_file("too_close.json", R"({
  "manifold": "circle2",
  "robots": {"initial": [{"x": [0, 0], "omega": [0]}, {"x": [1, 1], "omega": [0.2]}]}
})");
  const auto r = cli("simulate " + path);
  CHECK(r.code == 2);
  CHECK(contains(r.output, "initial separation must exceed the safe radius"));
}

TEST_CASE("parse errors exit 2 with line and column") {
  const auto broken = write_file("broken.json", "{\n  \"manifold\": \"circle2\"\n  \"robots\": {}\n}");
  const auto r = cli("simulate " + broken);
  CHECK(r.code == 2);
  CHECK(contains(r.output, "line 3, column"));

  const auto unknown = write_file("unknown.json", "{\n  \"manifold\": \"circle2\",\n  \"robots\": {\"count\": 1},\n"
                                                  "  \"integrater\": {}\n}");
  const auto u = cli("simulate " + unknown);
  CHECK(u.code == 2);
  CHECK(contains(u.output, "line 4, column 3"));
  CHECK(contains(u.output, "integrater"));

  CHECK(cli("simulate does_not_exist").code == 2);
  CHECK(cli("simulate helicoid_case1 --set nonsense").code == 2);
}

TEST_CASE("barrier violation exits 3") {
  // dt_min = dt forbids refinement, so the attraction step jumps the pair across r.
  const auto path = write_file("squeeze.json", R"({
  "manifold": "circle2",
  "robots": {"initial": [{"x": [1, 0], "omega": [-0.5]}, {"x": [1, 0], "omega": [0.5]}]},
  "gains": {"c": 20},
  "integrator": {"dt": 0.1, "dt_min": 0.1, "t_end": 1}
})");
  const auto r = cli("simulate " + path + " --csv " + (workdir() / "sq.csv").string());
  CHECK(r.code == 3);
  CHECK(contains(r.output, "between robots 1 and 2"));
}

TEST_CASE("numeric failure exits 4") {
  // exp(w^4) overflows once the virtual coordinate passes about 5.2.
  const auto path = write_file("overflow.json", R"json({
  "manifold": {"m": 1, "expressions": ["exp(w1^4)", "w1"]},
  "robots": {"initial": [{"x": [0, 4], "omega": [4]}]},
  "target": {"omega0": [4]},
  "integrator": {"dt": 0.5, "dt_min": 0.5, "t_end": 5}
})json");
  const auto r = cli("simulate " + path);
  CHECK(r.code == 4);
  CHECK(contains(r.output, "non-finite"));
}

TEST_CASE("verify-lemma1") {
  const auto r = cli("verify-lemma1");
  CHECK(r.code == 0);
  CHECK(contains(r.output, "all 12 cells pass"));
  CHECK(cli("verify-lemma1 --trials 0").code == 0);
  CHECK(cli("verify-lemma1 --n-max 6 --m-max 5").code == 2);
  CHECK(cli("verify-lemma1 --n-max 0").code == 2);
}

TEST_CASE("coupling-demo") {
  const auto r = cli("coupling-demo --draws 5");
  CHECK(r.code == 0);
  CHECK(contains(r.output, "all partials = 1"));
  CHECK(contains(r.output, "feasible [-1, -1, -1]"));
}

TEST_CASE("argument errors exit 2") {
  CHECK(cli("").code == 2);
  CHECK(cli("frobnicate").code == 2);
  CHECK(cli("verify-lemma1 --trials banana").code == 2);
}
