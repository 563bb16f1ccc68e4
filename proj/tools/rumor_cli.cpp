#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rumor/jobs.hpp"
#include "rumor/series_io.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string profile;
  std::string output_dir;
  std::string series_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int jobs = 0;
};

rumor::JobConfig resolve_config(const CliOptions& opt) {
  rumor::JobConfig config;
  rumor::apply_profile(config, "desk");
  if (!opt.profile.empty()) rumor::apply_profile(config, opt.profile);
  if (!opt.config_path.empty())
    config = rumor::job_config_from_json_text(rumor::read_text_file(opt.config_path), config);
  if (opt.seed_set) config.master_seed = opt.seed;
  if (!opt.output_dir.empty()) config.output_dir = opt.output_dir;
  if (!opt.series_path.empty()) config.input_series = opt.series_path;
  if (opt.jobs > 0) config.jobs = opt.jobs;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rumor spreading simulator and growth-law toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  CliOptions opt;
  app.add_option("--config", opt.config_path, "JSON job configuration")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", opt.seed, "master seed (64-bit)")
      ->each([&](const std::string&) { opt.seed_set = true; });
  app.add_option("--profile", opt.profile, "scale profile")
      ->check(CLI::IsMember({"desk", "paper"}));
  app.add_option("--out", opt.output_dir, "output directory");
  app.add_option("--jobs", opt.jobs, "worker threads for sweep grid points")
      ->check(CLI::PositiveNumber);

  auto* gen_pop = app.add_subcommand("gen-pop", "generate one population network");
  auto* simulate = app.add_subcommand("simulate", "run one spreading ensemble");
  auto* sweep = app.add_subcommand("sweep", "ensemble + fit over the parameter grid");
  auto* fit = app.add_subcommand("fit", "fit the growth law to a series CSV");
  fit->add_option("--series", opt.series_path, "input series CSV")->check(CLI::ExistingFile);
  auto* predict = app.add_subcommand("predict", "growth curve and times from parameters");
  auto* infer = app.add_subcommand("infer", "infer p_ip and p_usg from a series CSV");
  infer->add_option("--series", opt.series_path, "input series CSV")->check(CLI::ExistingFile);
  auto* validate = app.add_subcommand("validate-tables",
                                      "check the USG polynomials against the law table");

  CLI11_PARSE(app, argc, argv);

  try {
    const rumor::JobConfig config = resolve_config(opt);
    if (gen_pop->parsed()) return rumor::run_gen_pop(config, std::cout);
    if (simulate->parsed()) return rumor::run_simulate(config, std::cout);
    if (sweep->parsed()) return rumor::run_sweep(config, std::cout);
    if (fit->parsed()) return rumor::run_fit_job(config, std::cout);
    if (predict->parsed()) return rumor::run_predict(config, std::cout);
    if (infer->parsed()) return rumor::run_infer(config, std::cout);
    if (validate->parsed()) return rumor::run_validate_tables(config, std::cout);
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  }
  return 0;
}
