#include "gne/gne_c.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "gne/error.hpp"
#include "gne/gne.hpp"
#include "gne/report.hpp"
#include "gne/scenario.hpp"

struct gne_game {
  gne::SecurityGame game;
};

struct gne_outcome {
  gne::GneOutcome outcome;
};

struct gne_config {
  gne::RunConfig config;
};

struct gne_run {
  gne::RunReport report;
};

namespace {

thread_local std::string last_error;

gne_status fail(gne_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs `body`, mapping exceptions onto status codes.
template <typename F>
gne_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const gne::ConfigError& e) {
    return fail(GNE_ERR_CONFIG, e.what());
  } catch (const gne::IoError& e) {
    return fail(GNE_ERR_IO, e.what());
  } catch (const gne::SingularMatrix& e) {
    return fail(GNE_ERR_SINGULAR, e.what());
  } catch (const gne::CalibrationError& e) {
    return fail(GNE_ERR_CALIBRATION, e.what());
  } catch (const gne::DomainError& e) {
    return fail(GNE_ERR_DOMAIN, e.what());
  } catch (const gne::InvalidArgument& e) {
    return fail(GNE_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(GNE_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(GNE_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(GNE_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(GNE_ERR_INTERNAL, "unknown error");
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

gne::Vector vector_from(const double* data, std::size_t n) {
  return Eigen::Map<const gne::Vector>(data, static_cast<Eigen::Index>(n));
}

gne::Matrix matrix_from(const double* data, std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(data, k, k);
}

gne_status copy_out(const gne::Vector& v, double* out, std::size_t len) {
  if (out == nullptr) return fail(GNE_ERR_INVALID_ARGUMENT, "output buffer is null");
  if (len != static_cast<std::size_t>(v.size())) {
    return fail(GNE_ERR_INVALID_ARGUMENT, "output buffer has length " + std::to_string(len) + ", expected " +
                                              std::to_string(v.size()));
  }
  std::memcpy(out, v.data(), len * sizeof(double));
  return GNE_OK;
}

gne::BrMethod br_method(gne_br_method m) {
  switch (m) {
    case GNE_BR_DIRECT: return gne::BrMethod::Direct;
    case GNE_BR_GAUSS_SEIDEL: return gne::BrMethod::GaussSeidel;
    case GNE_BR_JACOBI: return gne::BrMethod::Jacobi;
  }
  throw gne::InvalidArgument("unknown best-response method");
}

#define GNE_REQUIRE(ptr)                                                        \
  do {                                                                          \
    if ((ptr) == nullptr) return fail(GNE_ERR_INVALID_ARGUMENT, #ptr " is null"); \
  } while (0)

}  // namespace

extern "C" {

const char* gne_version(void) { return "1.0.0"; }

const char* gne_last_error(void) { return last_error.c_str(); }

const char* gne_status_name(gne_status status) {
  switch (status) {
    case GNE_OK: return "ok";
    case GNE_ERR_INVALID_ARGUMENT: return "invalid argument";
    case GNE_ERR_INVALID_GAME: return "invalid game";
    case GNE_ERR_CONFIG: return "config error";
    case GNE_ERR_IO: return "i/o error";
    case GNE_ERR_SINGULAR: return "singular system";
    case GNE_ERR_CALIBRATION: return "calibration failure";
    case GNE_ERR_DOMAIN: return "domain error";
    case GNE_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void gne_string_free(char* s) { std::free(s); }

gne_status gne_game_create(size_t n, const double* influence, const double* returns, const double* budgets,
                           gne_game** out) {
  return guarded([&] {
    GNE_REQUIRE(influence);
    GNE_REQUIRE(returns);
    GNE_REQUIRE(budgets);
    GNE_REQUIRE(out);
    if (n == 0) return fail(GNE_ERR_INVALID_ARGUMENT, "game must have at least one agent");
    *out = new gne_game{gne::SecurityGame(matrix_from(influence, n), vector_from(returns, n), vector_from(budgets, n))};
    return GNE_OK;
  });
}

void gne_game_destroy(gne_game* game) { delete game; }

size_t gne_game_size(const gne_game* game) { return game == nullptr ? 0 : game->game.size(); }

gne_status gne_game_validate(const gne_game* game, char** report) {
  return guarded([&] {
    GNE_REQUIRE(game);
    const gne::ValidationReport rep = gne::validate_game(game->game);
    if (report != nullptr) *report = duplicate(rep.to_string());
    if (rep.ok()) return GNE_OK;
    return fail(GNE_ERR_INVALID_GAME, rep.to_string());
  });
}

gne_status gne_true_cost(const gne_game* game, size_t agent, const double* u, double* out) {
  return guarded([&] {
    GNE_REQUIRE(game);
    GNE_REQUIRE(u);
    GNE_REQUIRE(out);
    *out = gne::true_cost(game->game, agent, vector_from(u, game->game.size()));
    return GNE_OK;
  });
}

gne_status gne_perceived_cost(const gne_game* game, size_t agent, const double* u, const double* attention,
                              double* out) {
  return guarded([&] {
    GNE_REQUIRE(game);
    GNE_REQUIRE(u);
    GNE_REQUIRE(attention);
    GNE_REQUIRE(out);
    const std::size_t n = game->game.size();
    *out = gne::perceived_cost(game->game, agent, vector_from(u, n), vector_from(attention, n));
    return GNE_OK;
  });
}

gne_status gne_rbp(const gne_game* game, size_t agent, const double* u, const double* attention, double* out) {
  return guarded([&] {
    GNE_REQUIRE(game);
    GNE_REQUIRE(u);
    GNE_REQUIRE(attention);
    GNE_REQUIRE(out);
    const std::size_t n = game->game.size();
    *out = gne::rbp(game->game, agent, vector_from(u, n), vector_from(attention, n));
    return GNE_OK;
  });
}

gne_status gne_rational_ne(const gne_game* game, double* u_out) {
  return guarded([&] {
    GNE_REQUIRE(game);
    const gne::Vector u = gne::rational_ne(game->game);
    return copy_out(u, u_out, game->game.size());
  });
}

gne_status gne_brne(const gne_game* game, const double* attention, gne_br_method method, double* u_out) {
  return guarded([&] {
    GNE_REQUIRE(game);
    GNE_REQUIRE(attention);
    const std::size_t n = game->game.size();
    gne::BrSolverConfig cfg;
    cfg.method = br_method(method);
    const gne::BrResult r = gne::solve_brne(game->game, gne::CognitionProfile(matrix_from(attention, n)), cfg);
    if (!r.trace.converged) return fail(GNE_ERR_DOMAIN, "best-response dynamics did not converge");
    return copy_out(r.u, u_out, n);
  });
}

gne_status gne_homogeneous_closed_form(double r1, double r2, double r, int n, double beta, double* m_out,
                                       double* u_out) {
  return guarded([&] {
    GNE_REQUIRE(m_out);
    GNE_REQUIRE(u_out);
    const gne::HomogeneousSolution s = gne::homogeneous_closed_form(r1, r2, r, n, beta);
    *m_out = s.m_value;
    *u_out = s.u_value;
    return GNE_OK;
  });
}

void gne_solve_options_default(gne_solve_options* opts) {
  if (opts == nullptr) return;
  const gne::GneConfig d;
  opts->outer_tol = d.outer_tol;
  opts->max_rounds = d.max_rounds;
  opts->br_method = GNE_BR_DIRECT;
  opts->apg_tol = d.apg_config.tol;
  opts->apg_max_iters = d.apg_config.max_iters;
  opts->threads = d.threads;
}

gne_status gne_solve(const gne_game* game, const gne_solve_options* opts, gne_outcome** out) {
  return guarded([&] {
    GNE_REQUIRE(game);
    GNE_REQUIRE(out);
    gne::GneConfig cfg;
    if (opts != nullptr) {
      cfg.outer_tol = opts->outer_tol;
      cfg.max_rounds = opts->max_rounds;
      cfg.br_config.method = br_method(opts->br_method);
      cfg.apg_config.tol = opts->apg_tol;
      cfg.apg_config.max_iters = opts->apg_max_iters;
      cfg.threads = opts->threads;
    }
    *out = new gne_outcome{gne::gne_solve(game->game, cfg)};
    return GNE_OK;
  });
}

void gne_outcome_destroy(gne_outcome* outcome) { delete outcome; }

int gne_outcome_converged(const gne_outcome* outcome) { return outcome != nullptr && outcome->outcome.converged; }

int gne_outcome_rounds(const gne_outcome* outcome) { return outcome == nullptr ? 0 : outcome->outcome.rounds_used; }

gne_status gne_outcome_u(const gne_outcome* outcome, double* out, size_t len) {
  return guarded([&] {
    GNE_REQUIRE(outcome);
    return copy_out(outcome->outcome.u_star, out, len);
  });
}

gne_status gne_outcome_attention(const gne_outcome* outcome, double* out, size_t len) {
  return guarded([&] {
    GNE_REQUIRE(outcome);
    const gne::Matrix& m = outcome->outcome.m_star.matrix();
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> row_major = m;
    return copy_out(Eigen::Map<const gne::Vector>(row_major.data(), row_major.size()), out, len);
  });
}

gne_status gne_outcome_alphas(const gne_outcome* outcome, double* out, size_t len) {
  return guarded([&] {
    GNE_REQUIRE(outcome);
    return copy_out(outcome->outcome.alphas, out, len);
  });
}

gne_status gne_outcome_rbp(const gne_outcome* outcome, double* out, size_t len) {
  return guarded([&] {
    GNE_REQUIRE(outcome);
    return copy_out(outcome->outcome.rbp, out, len);
  });
}

gne_status gne_verify(const gne_game* game, const gne_outcome* outcome, int n_probes, uint64_t seed, int* passed) {
  return guarded([&] {
    GNE_REQUIRE(game);
    GNE_REQUIRE(outcome);
    GNE_REQUIRE(passed);
    const gne::VerificationReport rep = gne::verify_gne(game->game, outcome->outcome, n_probes, seed);
    *passed = rep.passed ? 1 : 0;
    if (!rep.passed) {
      std::string msg;
      for (const auto& f : rep.failures) msg += f + "\n";
      last_error = msg;
    }
    return GNE_OK;
  });
}

gne_status gne_config_load_file(const char* path, gne_config** out) {
  return guarded([&] {
    GNE_REQUIRE(path);
    GNE_REQUIRE(out);
    *out = new gne_config{gne::load_config(path)};
    return GNE_OK;
  });
}

gne_status gne_config_parse(const char* json, gne_config** out) {
  return guarded([&] {
    GNE_REQUIRE(json);
    GNE_REQUIRE(out);
    *out = new gne_config{gne::parse_config(json)};
    return GNE_OK;
  });
}

gne_status gne_config_builtin(const char* name, gne_config** out) {
  return guarded([&] {
    GNE_REQUIRE(name);
    GNE_REQUIRE(out);
    *out = new gne_config{gne::builtin_config(name)};
    return GNE_OK;
  });
}

const char* gne_builtin_name(size_t index) {
  static const std::vector<std::string> names = gne::builtin_scenarios();
  return index < names.size() ? names[index].c_str() : nullptr;
}

void gne_config_destroy(gne_config* config) { delete config; }

gne_status gne_config_set_seed(gne_config* config, uint64_t seed) {
  return guarded([&] {
    GNE_REQUIRE(config);
    config->config.rng_seed = seed;
    return GNE_OK;
  });
}

gne_status gne_config_to_json(const gne_config* config, char** out) {
  return guarded([&] {
    GNE_REQUIRE(config);
    GNE_REQUIRE(out);
    *out = duplicate(gne::config_to_json(config->config));
    return GNE_OK;
  });
}

gne_status gne_config_validate(const gne_config* config, char** report) {
  return guarded([&] {
    GNE_REQUIRE(config);
    const gne::BuiltScenario built = gne::build_scenario_unchecked(config->config.scenario);
    const gne::ValidationReport rep = gne::validate_game(built.game);
    if (report != nullptr) *report = duplicate(rep.to_string());
    if (rep.ok()) return GNE_OK;
    return fail(GNE_ERR_INVALID_GAME, rep.to_string());
  });
}

gne_status gne_run_create(const gne_config* config, unsigned threads, gne_run** out) {
  return guarded([&] {
    GNE_REQUIRE(config);
    GNE_REQUIRE(out);
    *out = new gne_run{gne::run_scenario(config->config, threads)};
    return GNE_OK;
  });
}

void gne_run_destroy(gne_run* run) { delete run; }

gne_run_status gne_run_get_status(const gne_run* run) {
  if (run == nullptr) return GNE_RUN_NOT_CONVERGED;
  return static_cast<gne_run_status>(gne::run_status(run->report));
}

double gne_run_wall_time(const gne_run* run) { return run == nullptr ? 0.0 : run->report.wall_time; }

gne_status gne_run_summary(const gne_run* run, const char* format, char** out) {
  return guarded([&] {
    GNE_REQUIRE(run);
    GNE_REQUIRE(format);
    GNE_REQUIRE(out);
    const std::string f(format);
    if (f == "json") {
      *out = duplicate(gne::summary_json(run->report));
    } else if (f == "csv") {
      *out = duplicate(gne::summary_csv(run->report));
    } else {
      return fail(GNE_ERR_INVALID_ARGUMENT, "unknown summary format '" + f + "' (expected json or csv)");
    }
    return GNE_OK;
  });
}

gne_status gne_run_write(const gne_run* run, const char* dir, int with_trace) {
  return guarded([&] {
    GNE_REQUIRE(run);
    GNE_REQUIRE(dir);
    gne::emit_report(run->report, dir, with_trace != 0);
    return GNE_OK;
  });
}

}  // extern "C"
