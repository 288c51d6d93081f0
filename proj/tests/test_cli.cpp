#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "lo1d/commands.hpp"

#ifndef LO1D_CLI_PATH
#define LO1D_CLI_PATH "lo1d"
#endif

using namespace lo1d;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "lo1d_test_cli";

fs::path write_config(const std::string& name, const std::string& text) {
  fs::create_directories(kRoot);
  const fs::path p = kRoot / (name + ".json");
  std::ofstream(p) << text;
  return p;
}

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + LO1D_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string out_dir(const std::string& name) {
  const fs::path d = kRoot / name;
  fs::remove_all(d);
  return d.string();
}

}  // namespace

TEST_CASE("verify: small suite passes", "[cli]") {
  const auto cfg = write_config("verify_small", R"({"verify": {"random_states": 12}})");
  const std::string out = out_dir("verify_small");
  CHECK(run("verify --config " + cfg.string() + " --out " + out) == cli::kExitOk);
  CHECK(fs::exists(fs::path(out) / "bounds.csv"));
  CHECK(fs::exists(fs::path(out) / "bounds.jsonl"));
  CHECK(fs::exists(fs::path(out) / "manifest.json"));
}

TEST_CASE("verify: reruns are byte-identical", "[cli]") {
  const auto cfg = write_config("verify_rerun", R"({"verify": {"random_states": 6}})");
  const std::string a = out_dir("rerun_a"), b = out_dir("rerun_b");
  REQUIRE(run("verify --config " + cfg.string() + " --seed 5 --out " + a) == 0);
  REQUIRE(run("verify --config " + cfg.string() + " --seed 5 --out " + b + " --jobs 3") == 0);
  CHECK(slurp(fs::path(a) / "bounds.csv") == slurp(fs::path(b) / "bounds.csv"));
  CHECK(slurp(fs::path(a) / "bounds.jsonl") == slurp(fs::path(b) / "bounds.jsonl"));
  const std::string c = out_dir("rerun_c");
  REQUIRE(run("verify --config " + cfg.string() + " --seed 6 --out " + c) == 0);
  CHECK(slurp(fs::path(a) / "bounds.csv") != slurp(fs::path(c) / "bounds.csv"));
}

TEST_CASE("verify: empty state list", "[cli]") {
  const auto cfg = write_config("verify_empty", R"({"verify": {"random_states": 0, "states": []}})");
  const std::string out = out_dir("verify_empty");
  CHECK(run("verify --config " + cfg.string() + " --out " + out) == cli::kExitOk);
  const std::string csv = slurp(fs::path(out) / "bounds.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1);
}

TEST_CASE("verify: violations exit 1", "[cli]") {
  // deliberately wrong moment constants make the logarithmic bound too strong
  const auto cfg = write_config("verify_bad", R"({"verify": {
      "states": [{"family": "GaussianProduct", "centers": [0, 1], "width": 1}],
      "random_states": 0,
      "bounds": [{"id": "Thm3B", "potential": {"family": "RegularizedCoulomb", "beta": 1},
                  "alpha": 1, "constants": {"c1": 1e-9, "c2": 1e-9, "c3": 1e-9}}]}})");
  CHECK(run("verify --config " + cfg.string() + " --out " + out_dir("verify_bad")) == cli::kExitFail);
}

TEST_CASE("verify: conjectured bound in the proven set exits 2", "[cli]") {
  const auto cfg = write_config("verify_rasanen", R"({"verify": {"random_states": 2,
      "bounds": [{"id": "Rasanen", "potential": {"family": "SoftCoulomb", "epsilon": 1}}]}})");
  CHECK(run("verify --config " + cfg.string() + " --out " + out_dir("verify_rasanen")) == cli::kExitConfig);
  const auto ref = write_config("verify_reference", R"({"verify": {"random_states": 2,
      "reference_bounds": [{"id": "Rasanen", "potential": {"family": "SoftCoulomb", "epsilon": 1}}]}})");
  const std::string out = out_dir("verify_reference");
  CHECK(run("verify --config " + ref.string() + " --out " + out) == cli::kExitOk);
  CHECK(fs::exists(fs::path(out) / "reference_bounds.csv"));
}

TEST_CASE("config errors exit 2", "[cli]") {
  CHECK(run("verify --config " + write_config("bad_key", R"({"verfy": {}})").string()) == cli::kExitConfig);
  CHECK(run("verify --config " + write_config("bad_json", "{").string()) == cli::kExitConfig);
  CHECK(run("verify --config /nonexistent/config.json") == cli::kExitConfig);
  CHECK(run("frobnicate") == cli::kExitConfig);
  CHECK(run("") == cli::kExitConfig);
  CHECK(run("verify --jobs 0") == cli::kExitConfig);
}

TEST_CASE("moments: Coulomb request exits 2", "[cli]") {
  const auto cfg = write_config("moments_coulomb", R"({"moments": {"potentials": [{"family": "Coulomb"}]}})");
  CHECK(run("moments --config " + cfg.string() + " --out " + out_dir("moments_coulomb")) == cli::kExitConfig);
  try {
    parse_potential(json::parse(R"({"family": "Coulomb"})"));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("+inf") != std::string::npos);
  }
}

TEST_CASE("moments: default certification", "[cli]") {
  const auto cfg = write_config("moments_small", R"({"moments": {"gamma_points": 40}})");
  const std::string out = out_dir("moments_small");
  CHECK(run("moments --config " + cfg.string() + " --out " + out) == cli::kExitOk);
  CHECK(fs::exists(fs::path(out) / "certification.csv"));
  CHECK(fs::exists(fs::path(out) / "discrepancies.jsonl"));
}

TEST_CASE("optimize, hubbard and maximal subcommands", "[cli]") {
  const auto cfg = write_config("misc", R"({
      "optimize": {"potentials": [{"family": "Contact"}], "families": ["gaussian_pair_antisymmetric"], "budget": 100},
      "hubbard": {"grid": 40, "random_vectors": 200, "u_over_t_points": 11},
      "maximal": {"random_profiles": 10, "points": 129}})");
  const std::string out = out_dir("misc");
  CHECK(run("optimize --config " + cfg.string() + " --out " + out) == cli::kExitOk);
  CHECK(run("hubbard --config " + cfg.string() + " --out " + out) == cli::kExitOk);
  CHECK(run("maximal --config " + cfg.string() + " --out " + out) == cli::kExitOk);
  for (const char* f : {"constants.csv", "hubbard_grid.csv", "hubbard_beta.csv", "maximal.csv"})
    CHECK(fs::exists(fs::path(out) / f));
}

TEST_CASE("in-process commands", "[cli]") {
  Config c = parse_config(json::parse(R"({"hubbard": {"grid": 30, "random_vectors": 100, "u_over_t_points": 5},
                                          "maximal": {"random_profiles": 5, "points": 65}})"));
  c.out = out_dir("inproc");
  std::ostringstream log;
  CHECK(cli::cmd_hubbard(c, log) == cli::kExitOk);
  CHECK(cli::cmd_maximal(c, log) == cli::kExitOk);
  CHECK(cli::guarded([]() -> int { throw ConfigError("x"); }) == cli::kExitConfig);
  CHECK(cli::guarded([]() -> int { throw IncompatibleSpec("x"); }) == cli::kExitConfig);
  CHECK(cli::guarded([]() -> int { throw NonConvergence("x", 0.0, 1.0); }) == cli::kExitFail);
}
