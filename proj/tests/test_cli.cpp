#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("scatspec_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

Run run(const fs::path& dir, const std::string& args) {
  const std::string cmd = std::string("'") + SCATSPEC_CLI_PATH + "' " + args + " > '" + (dir / "stdout").string() +
                          "' 2> '" + (dir / "stderr").string() + "'";
  const int raw = std::system(cmd.c_str());
  Run r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(dir / "stdout");
  r.err = slurp(dir / "stderr");
  return r;
}

fs::path write_config(const fs::path& dir, const std::string& body) {
  const auto p = dir / "run.ini";
  std::ofstream(p) << body << "\n[output]\ndir = " << (dir / "out").string() << "\n[cache]\npolicy = readwrite\ndir = "
                   << (dir / "cache").string() << "\n";
  return p;
}

double stage_seconds(const std::string& err, const std::string& stage) {
  const std::regex re("stage " + stage + ": ([0-9.]+) s");
  std::smatch m;
  REQUIRE(std::regex_search(err, m, re));
  return std::stod(m[1]);
}

const char* kFree = R"([potential]
tag = free
x_min = -10
x_max = 10
step = 0.00390625
[window]
j_lo = -8
j_hi = 8
[grids]
x_min = -4
x_max = 4
x_step = 0.0078125
)";

const char* kKernel = R"([potential]
tag = square_well
depth = -1
width = 2
x_min = -10
x_max = 10
step = 0.001953125
[grids]
x_min = -1
x_max = 1
x_step = 0.0625
[window]
j_lo = -2
j_hi = 6
[multiplier]
tag = imaginary_power
gamma = 1
[kernel]
block = Phi
j = -2
points_per_period = 64
)";

}  // namespace

TEST_CASE("cli: free weighted L2 passes") {
  const auto dir = scratch("wl2");
  const auto cfg = write_config(dir, kFree);
  const auto r = run(dir, "--config '" + cfg.string() + "' verify wl2 --s 1");
  INFO(r.err);
  CHECK(r.status == 0);
  CHECK(fs::exists(dir / "out" / "wl2_s1.json"));
  const auto m = nlohmann::json::parse(slurp(dir / "out" / "manifest.json"));
  CHECK(m.at("all_pass").get<bool>());
  CHECK(m.at("potential").at("tag") == "free");
  fs::remove_all(dir);
}

TEST_CASE("cli: unknown multiplier is a structured error") {
  const auto dir = scratch("badmul");
  const auto cfg = write_config(dir, std::string(kFree) + "[multiplier]\ntag = no_such_thing\n");
  const auto r = run(dir, "--config '" + cfg.string() + "' scatter");
  CHECK(r.status == 2);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("code") == "bad_multiplier");
  CHECK(!j.at("message").get<std::string>().empty());
  fs::remove_all(dir);
}

TEST_CASE("cli: bad config exits 2") {
  const auto dir = scratch("badcfg");
  const auto cfg = write_config(dir, "[potential]\ntag = free\nstep = -1\n");
  const auto r = run(dir, "--config '" + cfg.string() + "' scatter");
  CHECK(r.status == 2);
  CHECK(nlohmann::json::parse(r.out).at("code") == "bad_config");
  fs::remove_all(dir);
}

TEST_CASE("cli: warm cache is identical and faster") {
  const auto dir = scratch("cache");
  const auto cfg = write_config(dir, kKernel);
  const std::string args = "--config '" + cfg.string() + "' kernel";
  const auto cold = run(dir, args);
  REQUIRE(cold.status == 0);
  CHECK(cold.err.find("kernel cache miss") != std::string::npos);
  const std::string f64 = slurp(dir / "out" / "kernel.f64"), csv = slurp(dir / "out" / "kernel.csv");
  const std::string head = slurp(dir / "out" / "kernel.json"), man = slurp(dir / "out" / "manifest.json");
  const auto warm = run(dir, args);
  REQUIRE(warm.status == 0);
  CHECK(warm.err.find("kernel cache hit") != std::string::npos);
  CHECK(slurp(dir / "out" / "kernel.f64") == f64);
  CHECK(slurp(dir / "out" / "kernel.csv") == csv);
  CHECK(slurp(dir / "out" / "kernel.json") == head);
  CHECK(slurp(dir / "out" / "manifest.json") == man);
  const double tc = stage_seconds(cold.err, "kernel"), tw = stage_seconds(warm.err, "kernel");
  MESSAGE("kernel stage cold " << tc << " s, warm " << tw << " s");
  CHECK(tc >= 5.0 * tw);
  CHECK(f64.size() == 33u * 33u * 16u);
  fs::remove_all(dir);
}

TEST_CASE("cli: reruns without a cache are deterministic") {
  const auto dir = scratch("det");
  const auto cfg = write_config(dir, std::string(kKernel) + "[verify]\ndraws = 200\ncells = 200\n[run]\nseed = 11\n");
  std::string first;
  for (int pass = 0; pass < 2; ++pass) {
    fs::remove_all(dir / "cache");
    const auto r = run(dir, "--config '" + cfg.string() + "' verify cz");
    INFO(r.err);
    REQUIRE(r.status == 0);
    const std::string rep = slurp(dir / "out" / "cz.json");
    if (pass == 0) first = rep;
    else CHECK(rep == first);
  }
  const auto other = run(dir, "--config '" + cfg.string() + "' --seed 12 verify cz");
  REQUIRE(other.status == 0);
  CHECK(slurp(dir / "out" / "cz.json") != first);
  fs::remove_all(dir);
}

TEST_CASE("cli: version and stdout listing") {
  const auto dir = scratch("ver");
  const auto v = run(dir, "--version");
  CHECK(v.status == 0);
  CHECK(v.out.find("0.4.0") != std::string::npos);
  const auto cfg = write_config(dir, kFree);
  const auto r = run(dir, "--config '" + cfg.string() + "' scatter");
  CHECK(r.status == 0);
  CHECK(r.out.find("scattering.csv") != std::string::npos);
  CHECK(r.out.find("manifest.json") != std::string::npos);
  fs::remove_all(dir);
}
