// rocsim command line: run / validate experiment configs, inspect IDX files.
#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rocsim/rocsim.h"

namespace {

int report_failure(const char* what, rocsim_status s) {
  std::fprintf(stderr, "rocsim: %s failed (%s): %s\n", what, rocsim_status_string(s), rocsim_last_error());
  // 2 = bad input (config, file format), 1 = anything else
  return s == ROCSIM_ERR_INVALID_INPUT || s == ROCSIM_ERR_FORMAT ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rocsim: similarity learning by pointwise ROC optimization"};
  app.set_version_flag("--version", rocsim_version());
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::string> output_dir;

  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--output-dir", output_dir, "Override the output directory");

  auto* validate = app.add_subcommand("validate", "Check a config file without running it");
  validate->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);

  std::string idx_path;
  auto* idx = app.add_subcommand("idx-info", "Print the header of an IDX file");
  idx->add_option("file", idx_path, "IDX file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    rocsim_run_overrides ov{};
    if (seed) {
      ov.has_seed = 1;
      ov.seed = *seed;
    }
    if (workers) ov.workers = *workers;
    if (output_dir) ov.output_dir = output_dir->c_str();
    char* summary = nullptr;
    const rocsim_status s = rocsim_run(config_path.c_str(), &ov, &summary);
    if (summary) {
      std::puts(summary);
      rocsim_string_free(summary);
    }
    return s == ROCSIM_OK ? 0 : report_failure("run", s);
  }
  if (*validate) {
    char* report = nullptr;
    const rocsim_status s = rocsim_validate_config(config_path.c_str(), &report);
    if (report) {
      std::fputs(report, s == ROCSIM_OK ? stdout : stderr);
      rocsim_string_free(report);
    }
    if (s == ROCSIM_OK) {
      std::puts("config ok");
      return 0;
    }
    return report_failure("validate", s);
  }
  char* info = nullptr;
  const rocsim_status s = rocsim_idx_info(idx_path.c_str(), &info);
  if (s != ROCSIM_OK) return report_failure("idx-info", s);
  std::puts(info);
  rocsim_string_free(info);
  return 0;
}
