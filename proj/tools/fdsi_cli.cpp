// Command-line front end. Talks to the simulator only through the C API.

#include <algorithm>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fdsi/fdsi.h"

namespace {

struct RunOptions {
  std::string config;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<int> realizations;
  std::optional<unsigned> threads;
  std::string out = "out";
  bool full_scale = false;
  bool quiet = false;
};

int report(fdsi_status status, const char* what) {
  std::fprintf(stderr, "fdsi: %s: %s: %s\n", what, fdsi_status_string(status), fdsi_last_error());
  return 1 + static_cast<int>(status);
}

void print_table(const fdsi_table* t) {
  const std::size_t cols = fdsi_table_columns(t);
  const std::size_t rows = fdsi_table_rows(t);
  std::vector<std::size_t> width(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    width[c] = std::string(fdsi_table_column_name(t, c)).size();
    for (std::size_t r = 0; r < rows; ++r) {
      width[c] = std::max(width[c], std::string(fdsi_table_text(t, r, c)).size());
    }
  }
  for (std::size_t c = 0; c < cols; ++c) {
    std::printf("%*s%s", static_cast<int>(width[c]), fdsi_table_column_name(t, c),
                c + 1 < cols ? "  " : "\n");
  }
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      std::printf("%*s%s", static_cast<int>(width[c]), fdsi_table_text(t, r, c),
                  c + 1 < cols ? "  " : "\n");
    }
  }
}

int run(const std::string& command, const RunOptions& opt) {
  fdsi_experiment* exp = nullptr;
  fdsi_status st = opt.config.empty()
                       ? fdsi_experiment_from_preset(
                             opt.preset.empty() ? "table1-baseline" : opt.preset.c_str(), &exp)
                       : fdsi_experiment_from_file(opt.config.c_str(), &exp);
  if (st != FDSI_OK) return report(st, "loading configuration");

  int reps = 0;
  if (opt.full_scale) reps = command == "sweep-mn" ? 400 : 1000;
  if (opt.realizations) reps = *opt.realizations;
  if (opt.seed) st = fdsi_experiment_set_seed(exp, *opt.seed);
  if (st == FDSI_OK && reps > 0) st = fdsi_experiment_set_realizations(exp, reps);
  if (st == FDSI_OK && opt.threads) st = fdsi_experiment_set_threads(exp, *opt.threads);
  if (st == FDSI_OK) st = fdsi_experiment_set_output_dir(exp, opt.out.c_str());
  if (st != FDSI_OK) {
    fdsi_experiment_free(exp);
    return report(st, "applying options");
  }

  fdsi_table* table = nullptr;
  st = fdsi_run(exp, command.c_str(), &table);
  fdsi_experiment_free(exp);
  if (st != FDSI_OK) return report(st, command.c_str());
  if (!opt.quiet) print_table(table);
  if (!opt.out.empty()) std::fprintf(stderr, "fdsi: %s results written to %s\n", command.c_str(),
                                     opt.out.c_str());
  fdsi_table_free(table);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Full-duplex self-interference simulator"};
  app.set_version_flag("--version", std::string(fdsi_version()));
  app.require_subcommand(1);

  RunOptions opt;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"budget", "closed-form component power budget over the transmit-power sweep"},
      {"sweep-tx", "waveform simulation: SINR and digital attenuation versus transmit power"},
      {"sweep-mn", "waveform simulation over filter length M and training length N"},
      {"bias", "Monte-Carlo check of the IMD-induced estimator bias"},
  };
  std::string chosen;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    auto* config = sub->add_option("--config", opt.config, "YAML experiment file")
                       ->check(CLI::ExistingFile);
    sub->add_option("--preset", opt.preset, "named scenario when no --config is given")
        ->excludes(config);
    sub->add_option("--seed", opt.seed, "base seed");
    sub->add_option("--realizations", opt.realizations, "independent realisations per point")
        ->check(CLI::PositiveNumber);
    sub->add_option("--threads", opt.threads, "worker threads (0 = all cores)");
    sub->add_option("--out", opt.out, "output directory (empty string: print only)");
    sub->add_flag("--full-scale", opt.full_scale, "1000 realisations (400 for sweep-mn)");
    sub->add_flag("-q,--quiet", opt.quiet, "do not print the result table");
    sub->callback([&chosen, name = name] { chosen = name; });
  }
  app.add_subcommand("presets", "list the named scenarios")->callback([&chosen] {
    chosen = "presets";
  });

  CLI11_PARSE(app, argc, argv);

  if (chosen == "presets") {
    for (std::size_t i = 0; i < fdsi_preset_count(); ++i) std::printf("%s\n", fdsi_preset_name(i));
    return 0;
  }
  return run(chosen, opt);
}
