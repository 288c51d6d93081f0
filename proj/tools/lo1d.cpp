#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "lo1d/commands.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> jobs;
  std::optional<double> tolerance;
};

lo1d::Config resolve(const Flags& f) {
  lo1d::json raw = lo1d::json::object();
  if (!f.config.empty()) raw = lo1d::load_config(f.config).raw;
  if (f.seed) raw["seed"] = *f.seed;
  if (f.out) raw["out"] = *f.out;
  if (f.jobs) raw["jobs"] = *f.jobs;
  if (f.tolerance) raw["tolerance"] = *f.tolerance;
  return lo1d::parse_config(raw);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lo1d: one-dimensional Lieb-Oxford bound verification toolkit"};
  app.require_subcommand(1);
  Flags flags;
  app.add_option("--config", flags.config, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", flags.seed, "random seed");
  app.add_option("--out", flags.out, "output directory");
  app.add_option("--jobs", flags.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--tolerance", flags.tolerance, "relative slack tolerance")->check(CLI::PositiveNumber);

  using Cmd = int (*)(const lo1d::Config&, std::ostream&);
  const std::pair<const char*, Cmd> table[] = {
      {"verify", lo1d::cli::cmd_verify},   {"moments", lo1d::cli::cmd_moments}, {"optimize", lo1d::cli::cmd_optimize},
      {"hubbard", lo1d::cli::cmd_hubbard}, {"maximal", lo1d::cli::cmd_maximal},
  };
  const char* help[] = {"check every proven bound on a trial-state suite", "moment tables and certification",
                        "search for the largest empirical constant", "Hubbard interpolation sweeps",
                        "maximal-function norm ratios"};
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(table); ++i) {
    CLI::App* s = app.add_subcommand(table[i].first, help[i]);
    s->fallthrough();
    subs.push_back(s);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : lo1d::cli::kExitConfig;
  }
  for (std::size_t i = 0; i < subs.size(); ++i)
    if (subs[i]->parsed())
      return lo1d::cli::guarded([&] { return table[i].second(resolve(flags), std::cout); });
  return lo1d::cli::kExitConfig;
}
