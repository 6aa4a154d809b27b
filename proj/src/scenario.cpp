#include "gne/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "config_json.hpp"
#include "gne/error.hpp"

namespace gne {

using nlohmann::json;

const char* scenario_kind(const ScenarioSpec& spec) {
  struct {
    const char* operator()(const HomogeneousSpec&) const { return "homogeneous"; }
    const char* operator()(const TwoGroupSpec&) const { return "two-group"; }
    const char* operator()(const HeterogeneousSineSpec&) const { return "heterogeneous-sine"; }
    const char* operator()(const CustomSpec&) const { return "custom"; }
  } visitor;
  return std::visit(visitor, spec);
}

namespace {

void require(bool cond, const std::string& field, const std::string& what) {
  if (!cond) throw ConfigError(field, what);
}

Matrix coupled(int n, double self, double cross) {
  Matrix r = Matrix::Constant(n, n, cross);
  r.diagonal().setConstant(self);
  return r;
}

BuiltScenario make(const HomogeneousSpec& s) {
  require(s.n_agents >= 1, "scenario.n_agents", "must be at least 1");
  const int n = s.n_agents;
  return {SecurityGame(coupled(n, s.self_influence, s.cross_influence), Vector::Constant(n, s.ret),
                       Vector::Constant(n, s.budget)),
          std::nullopt};
}

BuiltScenario make(const TwoGroupSpec& s) {
  require(!s.group_sizes.empty(), "scenario.group_sizes", "must list at least one group");
  require(s.group_sizes.size() == s.group_returns.size(), "scenario.group_returns",
          "must have one entry per group");
  int n = 0;
  for (int size : s.group_sizes) {
    require(size >= 1, "scenario.group_sizes", "group sizes must be positive");
    n += size;
  }
  Vector returns(n);
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (std::size_t g = 0; g < s.group_sizes.size(); ++g) {
    for (int k = 0; k < s.group_sizes[g]; ++k) {
      returns(static_cast<Eigen::Index>(labels.size())) = s.group_returns[g];
      labels.push_back(static_cast<int>(g));
    }
  }
  return {SecurityGame(coupled(n, s.self_influence, s.cross_influence), returns, Vector::Constant(n, s.budget)),
          std::move(labels)};
}

BuiltScenario make(const HeterogeneousSineSpec& s) {
  require(s.n_agents >= 1, "scenario.n_agents", "must be at least 1");
  const int n = s.n_agents;
  Matrix r = coupled(n, 0.0, s.cross_influence);
  Vector returns(n);
  for (int i = 0; i < n; ++i) {
    const double label = static_cast<double>(i + 1);
    r(i, i) = s.self_base + s.self_amplitude * std::sin(label);
    returns(i) = s.return_base + s.return_slope * label;
  }
  return {SecurityGame(std::move(r), std::move(returns), Vector::Constant(n, s.budget)), std::nullopt};
}

BuiltScenario make(const CustomSpec& s) {
  const auto n = s.returns.size();
  require(n >= 1, "scenario.returns", "must have at least one entry");
  require(s.influence.rows() == n && s.influence.cols() == n, "scenario.influence",
          "must be a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  require(s.budgets.size() == n, "scenario.budgets", "must have one entry per agent");
  std::optional<std::vector<int>> labels;
  if (!s.group_labels.empty()) {
    require(s.group_labels.size() == static_cast<std::size_t>(n), "scenario.group_labels",
            "must have one entry per agent");
    for (int g : s.group_labels) require(g >= 0, "scenario.group_labels", "labels must be nonnegative");
    labels = s.group_labels;
  }
  return {SecurityGame(s.influence, s.returns, s.budgets), std::move(labels)};
}

}  // namespace

BuiltScenario build_scenario_unchecked(const ScenarioSpec& spec) {
  try {
    return std::visit([](const auto& s) { return make(s); }, spec);
  } catch (const InvalidArgument& e) {
    throw ConfigError("scenario", e.what());
  }
}

BuiltScenario build_scenario(const ScenarioSpec& spec) {
  BuiltScenario built = build_scenario_unchecked(spec);
  const ValidationReport report = validate_game(built.game);
  if (!report.ok()) {
    std::string msg = "generated game is invalid:";
    for (const auto& v : report.violations) msg += " [" + v.where + ": " + v.message + "]";
    throw ConfigError("scenario", msg);
  }
  return built;
}

ScenarioSpec with_budget(const ScenarioSpec& spec, double budget) {
  ScenarioSpec copy = spec;
  std::visit(
      [budget](auto& s) {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, CustomSpec>) {
          s.budgets.setConstant(budget);
        } else {
          s.budget = budget;
        }
      },
      copy);
  return copy;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

// Walks a JSON object, remembering the path for diagnostics and rejecting
// unknown keys.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "must be an object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const {
    seen_.insert(key);
    return node_.contains(key);
  }

  const json& at(const std::string& key) const {
    seen_.insert(key);
    if (!node_.contains(key)) throw ConfigError(field(key), "missing required field");
    return node_.at(key);
  }

  double number(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_number()) throw ConfigError(field(key), "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(field(key), "must be finite");
    return d;
  }
  double number_or(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

  long long integer(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_number_integer()) throw ConfigError(field(key), "must be an integer");
    return v.get<long long>();
  }
  int int_or(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const long long v = integer(key);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
      throw ConfigError(field(key), "out of range");
    }
    return static_cast<int>(v);
  }

  std::string string(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_string()) throw ConfigError(field(key), "must be a string");
    return v.get<std::string>();
  }

  bool boolean_or(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_boolean()) throw ConfigError(field(key), "must be true or false");
    return v.get<bool>();
  }

  Vector vector(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_array()) throw ConfigError(field(key), "must be an array of numbers");
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!v[k].is_number()) throw ConfigError(field(key) + "[" + std::to_string(k) + "]", "must be a number");
      out(static_cast<Eigen::Index>(k)) = v[k].get<double>();
    }
    return out;
  }

  std::vector<int> int_list(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_array()) throw ConfigError(field(key), "must be an array of integers");
    std::vector<int> out;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!v[k].is_number_integer()) {
        throw ConfigError(field(key) + "[" + std::to_string(k) + "]", "must be an integer");
      }
      out.push_back(v[k].get<int>());
    }
    return out;
  }

  Matrix matrix(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_array() || v.empty()) throw ConfigError(field(key), "must be a non-empty array of rows");
    const std::size_t n = v.size();
    Matrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const std::string row = field(key) + "[" + std::to_string(i) + "]";
      if (!v[i].is_array() || v[i].size() != n) {
        throw ConfigError(row, "must be an array of " + std::to_string(n) + " numbers");
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (!v[i][j].is_number()) throw ConfigError(row + "[" + std::to_string(j) + "]", "must be a number");
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v[i][j].get<double>();
      }
    }
    return out;
  }

  Reader object(const std::string& key) const { return Reader(at(key), field(key)); }

  // Call once every field has been read.
  void finish() const {
    for (const auto& item : node_.items()) {
      if (!seen_.count(item.key())) throw ConfigError(field(item.key()), "unknown field");
    }
  }

 private:
  const json& node_;
  std::string path_;
  mutable std::set<std::string> seen_;
};

ScenarioSpec scenario_from_json(const Reader& r) {
  const std::string kind = r.string("kind");
  if (kind == "homogeneous") {
    HomogeneousSpec s;
    s.n_agents = r.int_or("n_agents", s.n_agents);
    s.self_influence = r.number_or("self_influence", s.self_influence);
    s.cross_influence = r.number_or("cross_influence", s.cross_influence);
    s.ret = r.number_or("return", s.ret);
    s.budget = r.number_or("budget", s.budget);
    r.finish();
    return s;
  }
  if (kind == "two-group") {
    TwoGroupSpec s;
    if (r.has("group_sizes")) s.group_sizes = r.int_list("group_sizes");
    if (r.has("group_returns")) {
      const Vector v = r.vector("group_returns");
      s.group_returns.assign(v.data(), v.data() + v.size());
    }
    s.self_influence = r.number_or("self_influence", s.self_influence);
    s.cross_influence = r.number_or("cross_influence", s.cross_influence);
    s.budget = r.number_or("budget", s.budget);
    r.finish();
    return s;
  }
  if (kind == "heterogeneous-sine") {
    HeterogeneousSineSpec s;
    s.n_agents = r.int_or("n_agents", s.n_agents);
    s.self_base = r.number_or("self_base", s.self_base);
    s.self_amplitude = r.number_or("self_amplitude", s.self_amplitude);
    s.cross_influence = r.number_or("cross_influence", s.cross_influence);
    s.return_base = r.number_or("return_base", s.return_base);
    s.return_slope = r.number_or("return_slope", s.return_slope);
    s.budget = r.number_or("budget", s.budget);
    r.finish();
    return s;
  }
  if (kind == "custom") {
    CustomSpec s;
    s.influence = r.matrix("influence");
    s.returns = r.vector("returns");
    s.budgets = r.vector("budgets");
    if (r.has("group_labels")) s.group_labels = r.int_list("group_labels");
    r.finish();
    return s;
  }
  throw ConfigError(r.field("kind"), "unknown scenario kind '" + kind +
                                         "' (expected homogeneous, two-group, heterogeneous-sine or custom)");
}

json scenario_to_json(const ScenarioSpec& spec) {
  json j;
  j["kind"] = scenario_kind(spec);
  std::visit(
      [&j](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, HomogeneousSpec>) {
          j["n_agents"] = s.n_agents;
          j["self_influence"] = s.self_influence;
          j["cross_influence"] = s.cross_influence;
          j["return"] = s.ret;
          j["budget"] = s.budget;
        } else if constexpr (std::is_same_v<T, TwoGroupSpec>) {
          j["group_sizes"] = s.group_sizes;
          j["group_returns"] = s.group_returns;
          j["self_influence"] = s.self_influence;
          j["cross_influence"] = s.cross_influence;
          j["budget"] = s.budget;
        } else if constexpr (std::is_same_v<T, HeterogeneousSineSpec>) {
          j["n_agents"] = s.n_agents;
          j["self_base"] = s.self_base;
          j["self_amplitude"] = s.self_amplitude;
          j["cross_influence"] = s.cross_influence;
          j["return_base"] = s.return_base;
          j["return_slope"] = s.return_slope;
          j["budget"] = s.budget;
        } else {
          json rows = json::array();
          for (Eigen::Index i = 0; i < s.influence.rows(); ++i) {
            std::vector<double> row(s.influence.cols());
            for (Eigen::Index k = 0; k < s.influence.cols(); ++k) row[static_cast<std::size_t>(k)] = s.influence(i, k);
            rows.push_back(row);
          }
          j["influence"] = rows;
          j["returns"] = std::vector<double>(s.returns.data(), s.returns.data() + s.returns.size());
          j["budgets"] = std::vector<double>(s.budgets.data(), s.budgets.data() + s.budgets.size());
          if (!s.group_labels.empty()) j["group_labels"] = s.group_labels;
        }
      },
      spec);
  return j;
}

void solver_from_json(const Reader& r, GneConfig& cfg) {
  cfg.outer_tol = r.number_or("outer_tol", cfg.outer_tol);
  require(cfg.outer_tol > 0.0, r.field("outer_tol"), "must be positive");
  cfg.max_rounds = r.int_or("max_rounds", cfg.max_rounds);
  require(cfg.max_rounds >= 1, r.field("max_rounds"), "must be at least 1");
  if (r.has("budget_mode")) {
    const auto mode = parse_budget_mode(r.string("budget_mode"));
    require(mode.has_value(), r.field("budget_mode"), "must be \"beta\" or \"alpha\"");
    cfg.budget_mode = *mode;
  }
  if (r.has("fixed_alphas")) {
    cfg.fixed_alphas = r.vector("fixed_alphas");
    for (Eigen::Index k = 0; k < cfg.fixed_alphas.size(); ++k) {
      require(cfg.fixed_alphas(k) >= 0.0, r.field("fixed_alphas"), "entries must be nonnegative");
    }
  }
  require(cfg.budget_mode != BudgetMode::FixedAlpha || cfg.fixed_alphas.size() > 0, r.field("fixed_alphas"),
          "required when budget_mode is \"alpha\"");
  if (r.has("br")) {
    const Reader br = r.object("br");
    if (br.has("method")) {
      const auto method = parse_br_method(br.string("method"));
      require(method.has_value(), br.field("method"), "must be gauss-seidel, jacobi or direct");
      cfg.br_config.method = *method;
    }
    cfg.br_config.tol = br.number_or("tol", cfg.br_config.tol);
    require(cfg.br_config.tol > 0.0, br.field("tol"), "must be positive");
    cfg.br_config.max_iters = br.int_or("max_iters", cfg.br_config.max_iters);
    require(cfg.br_config.max_iters >= 1, br.field("max_iters"), "must be at least 1");
    br.finish();
  }
  if (r.has("apg")) {
    const Reader apg = r.object("apg");
    cfg.apg_config.tol = apg.number_or("tol", cfg.apg_config.tol);
    require(cfg.apg_config.tol > 0.0, apg.field("tol"), "must be positive");
    cfg.apg_config.max_iters = apg.int_or("max_iters", cfg.apg_config.max_iters);
    require(cfg.apg_config.max_iters >= 1, apg.field("max_iters"), "must be at least 1");
    cfg.apg_config.force_nonconvex_path = apg.boolean_or("force_nonconvex_path", cfg.apg_config.force_nonconvex_path);
    apg.finish();
  }
  if (r.has("calibration")) {
    const Reader c = r.object("calibration");
    cfg.calibration.budget_tol = c.number_or("budget_tol", cfg.calibration.budget_tol);
    require(cfg.calibration.budget_tol > 0.0, c.field("budget_tol"), "must be positive");
    cfg.calibration.bracket_tol = c.number_or("bracket_tol", cfg.calibration.bracket_tol);
    require(cfg.calibration.bracket_tol > 0.0, c.field("bracket_tol"), "must be positive");
    cfg.calibration.max_bisections = c.int_or("max_bisections", cfg.calibration.max_bisections);
    require(cfg.calibration.max_bisections >= 1, c.field("max_bisections"), "must be at least 1");
    c.finish();
  }
  r.finish();
}

json solver_to_json(const GneConfig& cfg) {
  json j;
  j["outer_tol"] = cfg.outer_tol;
  j["max_rounds"] = cfg.max_rounds;
  j["budget_mode"] = to_string(cfg.budget_mode);
  if (cfg.fixed_alphas.size() > 0) {
    j["fixed_alphas"] = std::vector<double>(cfg.fixed_alphas.data(), cfg.fixed_alphas.data() + cfg.fixed_alphas.size());
  }
  j["br"] = {{"method", to_string(cfg.br_config.method)},
             {"tol", cfg.br_config.tol},
             {"max_iters", cfg.br_config.max_iters}};
  j["apg"] = {{"tol", cfg.apg_config.tol},
              {"max_iters", cfg.apg_config.max_iters},
              {"force_nonconvex_path", cfg.apg_config.force_nonconvex_path}};
  j["calibration"] = {{"budget_tol", cfg.calibration.budget_tol},
                      {"bracket_tol", cfg.calibration.bracket_tol},
                      {"max_bisections", cfg.calibration.max_bisections}};
  return j;
}

}  // namespace

namespace detail {

RunConfig config_from_json(const json& doc) {
  const Reader root(doc, "");
  const long long version = root.integer("schema_version");
  require(version == kSchemaVersion, "schema_version", "unsupported version " + std::to_string(version) +
                                                            " (expected " + std::to_string(kSchemaVersion) + ")");
  RunConfig cfg;
  cfg.scenario = scenario_from_json(root.object("scenario"));
  if (root.has("solver")) solver_from_json(root.object("solver"), cfg.solver);
  if (root.has("verification")) {
    const Reader v = root.object("verification");
    cfg.n_probes = v.int_or("n_probes", cfg.n_probes);
    require(cfg.n_probes >= 0, v.field("n_probes"), "must be nonnegative");
    v.finish();
  }
  if (root.has("phenomena")) {
    const Reader p = root.object("phenomena");
    cfg.support_eps = p.number_or("support_eps", cfg.support_eps);
    require(cfg.support_eps > 0.0, p.field("support_eps"), "must be positive");
    if (p.has("compare_budget") && !p.at("compare_budget").is_null()) {
      cfg.compare_budget = p.number("compare_budget");
      require(*cfg.compare_budget > 0.0, p.field("compare_budget"), "must be positive");
    }
    p.finish();
  }
  if (root.has("rng_seed")) {
    const json& s = root.at("rng_seed");
    require(s.is_number_unsigned() || (s.is_number_integer() && s.get<long long>() >= 0), "rng_seed",
            "must be a nonnegative integer");
    cfg.rng_seed = s.get<std::uint64_t>();
  }
  root.finish();
  if (cfg.solver.budget_mode == BudgetMode::FixedAlpha) {
    const BuiltScenario built = build_scenario(cfg.scenario);
    require(static_cast<std::size_t>(cfg.solver.fixed_alphas.size()) == built.game.size(), "solver.fixed_alphas",
            "must have one entry per agent");
  }
  return cfg;
}

json config_echo(const RunConfig& config) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["scenario"] = scenario_to_json(config.scenario);
  j["solver"] = solver_to_json(config.solver);
  j["verification"] = {{"n_probes", config.n_probes}};
  j["phenomena"] = {{"support_eps", config.support_eps}};
  if (config.compare_budget) j["phenomena"]["compare_budget"] = *config.compare_budget;
  j["rng_seed"] = config.rng_seed;
  return j;
}

}  // namespace detail

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line:column.
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t k = 0; k < stop; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col), "JSON syntax error");
  }
  return detail::config_from_json(doc);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const RunConfig& config) { return detail::config_echo(config).dump(2) + "\n"; }

std::vector<std::string> builtin_scenarios() {
  return {"homogeneous", "two-group", "two-group-filling", "heterogeneous"};
}

RunConfig builtin_config(const std::string& name) {
  RunConfig cfg;
  if (name == "homogeneous") {
    cfg.scenario = HomogeneousSpec{};
  } else if (name == "two-group") {
    cfg.scenario = TwoGroupSpec{};
  } else if (name == "two-group-filling") {
    TwoGroupSpec s;
    s.budget = 8.0;
    cfg.scenario = s;
    cfg.compare_budget = 3.0;
  } else if (name == "heterogeneous") {
    cfg.scenario = HeterogeneousSineSpec{};
  } else {
    throw ConfigError("scenario", "unknown built-in scenario '" + name + "'");
  }
  return cfg;
}

}  // namespace gne
