// Command-line front end. Talks to the solver exclusively through the C API.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gne/gne_c.h"

namespace {

constexpr int kExitInputError = 1;
constexpr int kExitNotConverged = 2;

struct Options {
  std::string config_path;
  std::string scenario_name;
  std::string out_dir;
  std::string format = "json";
  bool trace = false;
  bool quiet = false;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

int report_error(const char* what, gne_status status) {
  std::fprintf(stderr, "gne: %s: %s\n", what, gne_last_error());
  if (status == GNE_ERR_CALIBRATION) return kExitNotConverged;
  return kExitInputError;
}

// Owns one C handle.
template <typename T, void (*Destroy)(T*)>
class Handle {
 public:
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Destroy(ptr_); }
  T** out() { return &ptr_; }
  T* get() const { return ptr_; }

 private:
  T* ptr_ = nullptr;
};

using Config = Handle<gne_config, gne_config_destroy>;
using Run = Handle<gne_run, gne_run_destroy>;

class OwnedString {
 public:
  OwnedString() = default;
  OwnedString(const OwnedString&) = delete;
  OwnedString& operator=(const OwnedString&) = delete;
  ~OwnedString() { gne_string_free(ptr_); }
  char** out() { return &ptr_; }
  const char* c_str() const { return ptr_ == nullptr ? "" : ptr_; }

 private:
  char* ptr_ = nullptr;
};

int cmd_solve(const Options& opt) {
  Config config;
  if (gne_status s = gne_config_load_file(opt.config_path.c_str(), config.out()); s != GNE_OK) {
    return report_error(opt.config_path.c_str(), s);
  }
  if (opt.seed) gne_config_set_seed(config.get(), *opt.seed);

  Run run;
  if (gne_status s = gne_run_create(config.get(), opt.threads, run.out()); s != GNE_OK) {
    return report_error("solve", s);
  }
  if (!opt.out_dir.empty()) {
    if (gne_status s = gne_run_write(run.get(), opt.out_dir.c_str(), opt.trace ? 1 : 0); s != GNE_OK) {
      return report_error("writing report", s);
    }
  }
  if (!opt.quiet) {
    OwnedString summary;
    if (gne_status s = gne_run_summary(run.get(), opt.format.c_str(), summary.out()); s != GNE_OK) {
      return report_error("summary", s);
    }
    std::fputs(summary.c_str(), stdout);
  }
  const gne_run_status status = gne_run_get_status(run.get());
  if (status == GNE_RUN_NOT_CONVERGED) std::fprintf(stderr, "gne: solver did not converge\n");
  if (status == GNE_RUN_VERIFICATION_FAILED) std::fprintf(stderr, "gne: equilibrium verification failed\n");
  if (!opt.quiet) std::fprintf(stderr, "gne: wall time %.3f s\n", gne_run_wall_time(run.get()));
  return static_cast<int>(status);
}

int cmd_scenario(const Options& opt) {
  Config config;
  if (gne_status s = gne_config_builtin(opt.scenario_name.c_str(), config.out()); s != GNE_OK) {
    std::string names;
    for (std::size_t k = 0; const char* n = gne_builtin_name(k); ++k) names += std::string(k ? ", " : "") + n;
    std::fprintf(stderr, "gne: %s (available: %s)\n", gne_last_error(), names.c_str());
    return kExitInputError;
  }
  if (opt.seed) gne_config_set_seed(config.get(), *opt.seed);
  OwnedString json;
  if (gne_status s = gne_config_to_json(config.get(), json.out()); s != GNE_OK) return report_error("scenario", s);
  if (opt.out_dir.empty()) {
    std::fputs(json.c_str(), stdout);
    return 0;
  }
  const std::string path = opt.out_dir + "/" + opt.scenario_name + ".json";
  std::error_code ec;
  std::filesystem::create_directories(opt.out_dir, ec);
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (f == nullptr || std::fputs(json.c_str(), f) < 0) {
    if (f != nullptr) std::fclose(f);
    std::fprintf(stderr, "gne: %s: cannot write file\n", path.c_str());
    return kExitInputError;
  }
  std::fclose(f);
  if (!opt.quiet) std::printf("%s\n", path.c_str());
  return 0;
}

int cmd_validate(const Options& opt) {
  Config config;
  if (gne_status s = gne_config_load_file(opt.config_path.c_str(), config.out()); s != GNE_OK) {
    // An invalid generated game is reported by the loader too.
    return report_error(opt.config_path.c_str(), s);
  }
  OwnedString report;
  if (gne_status s = gne_config_validate(config.get(), report.out()); s != GNE_OK) {
    std::fprintf(stderr, "gne: %s: invalid game\n%s", opt.config_path.c_str(), report.c_str());
    return kExitInputError;
  }
  if (!opt.quiet) std::printf("ok\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gestalt Nash equilibrium solver for interdependent security games with limited attention"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&opt](CLI::App* cmd) {
    cmd->add_option("--out", opt.out_dir, "Output directory");
    cmd->add_option("--seed", opt.seed, "Override the configured RNG seed");
    cmd->add_flag("--quiet", opt.quiet, "Suppress standard output");
  };

  CLI::App* solve = app.add_subcommand("solve", "Solve a configured scenario, verify and report");
  solve->add_option("config", opt.config_path, "JSON config file")->required();
  add_common(solve);
  solve->add_flag("--trace", opt.trace, "Also write per-round and per-iteration CSV traces");
  solve->add_option("--format", opt.format, "Summary format on standard output")
      ->check(CLI::IsMember({"json", "csv"}));
  solve->add_option("--threads", opt.threads, "Worker threads (0: all cores)");

  CLI::App* scenario = app.add_subcommand("scenario", "Print a ready-made config for a built-in scenario");
  scenario->add_option("name", opt.scenario_name, "homogeneous, two-group, two-group-filling or heterogeneous")
      ->required();
  add_common(scenario);

  CLI::App* validate = app.add_subcommand("validate", "Check a config's game against the modelling assumptions");
  validate->add_option("config", opt.config_path, "JSON config file")->required();
  validate->add_flag("--quiet", opt.quiet, "Suppress standard output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  if (*solve) return cmd_solve(opt);
  if (*scenario) return cmd_scenario(opt);
  return cmd_validate(opt);
}
