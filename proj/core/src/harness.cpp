#include "qfbsde/harness.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace qfbsde {
namespace {

using nlohmann::json;

constexpr double kPercent = 100.0;

template <class Enum, std::size_t N>
Enum parse_enum(std::string_view text, const std::array<std::pair<std::string_view, Enum>, N>& names,
                std::string_view what) {
  for (const auto& [name, value] : names) {
    if (name == text) return value;
  }
  std::string allowed;
  for (const auto& [name, value] : names) {
    if (!allowed.empty()) allowed += ", ";
    allowed += name;
  }
  throw ConfigError(std::string(what) + " '" + std::string(text) + "' is not one of: " + allowed);
}

constexpr std::array<std::pair<std::string_view, Mode>, 5> kModes{{
    {"expand", Mode::expand},
    {"mc", Mode::mc},
    {"compare", Mode::compare},
    {"paths", Mode::paths},
    {"validate", Mode::validate},
}};
constexpr std::array<std::pair<std::string_view, OutputFormat>, 2> kFormats{{
    {"csv", OutputFormat::csv},
    {"json", OutputFormat::json},
}};
constexpr std::array<std::pair<std::string_view, TableId>, 4> kTables{{
    {"eg1", TableId::eg1},
    {"eg6", TableId::eg6},
    {"zeg1", TableId::zeg1},
    {"zeg6", TableId::zeg6},
}};
constexpr std::array<std::pair<std::string_view, BumpScheme>, 3> kSchemes{{
    {"backward", BumpScheme::backward},
    {"forward", BumpScheme::forward},
    {"central", BumpScheme::central},
}};

template <class Enum, std::size_t N>
std::string_view name_of(Enum value,
                         const std::array<std::pair<std::string_view, Enum>, N>& names) noexcept {
  for (const auto& [name, v] : names) {
    if (v == value) return name;
  }
  return "?";
}

bool is_z_table(TableId id) { return id == TableId::zeg1 || id == TableId::zeg6; }

std::vector<double> unit_maturities(int count) {
  std::vector<double> out;
  for (int i = 1; i <= count; ++i) out.push_back(i);
  return out;
}

std::string format_general(double value, int significant) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, value);
  return buf;
}

std::string format_maturity(double T) {
  if (T == std::floor(T) && std::abs(T) < 1e9) return std::to_string(static_cast<long long>(T));
  return format_general(T, 6);
}

json params_json(const ModelParams& p) {
  return json{{"mu", p.mu}, {"k", p.k}, {"m", p.m}, {"c", p.c}, {"rho", p.rho}, {"gamma", p.gamma}};
}

template <class T>
void read(const json& j, const char* key, T& field) {
  if (!j.contains(key)) return;
  try {
    field = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

}  // namespace

std::string_view to_string(Mode mode) noexcept { return name_of(mode, kModes); }
std::string_view to_string(OutputFormat format) noexcept { return name_of(format, kFormats); }
std::string_view to_string(TableId table) noexcept { return name_of(table, kTables); }
std::string_view to_string(BumpScheme scheme) noexcept { return name_of(scheme, kSchemes); }
Mode parse_mode(std::string_view text) { return parse_enum(text, kModes, "mode"); }
OutputFormat parse_format(std::string_view text) { return parse_enum(text, kFormats, "format"); }
TableId parse_table(std::string_view text) { return parse_enum(text, kTables, "table"); }
BumpScheme parse_bump_scheme(std::string_view text) {
  return parse_enum(text, kSchemes, "bump scheme");
}

ModelParams eg1_params() noexcept {
  return ModelParams{.mu = 0.17, .k = 0.15, .m = 0.0625, .c = 0.05, .rho = -0.30, .gamma = 1.0};
}

ModelParams eg6_params() noexcept {
  return ModelParams{.mu = 0.17, .k = 0.20, .m = 0.0625, .c = 0.12, .rho = -0.30, .gamma = 1.0};
}

RunConfig preset(std::string_view name) {
  RunConfig cfg;
  if (name == "eg1" || name == "eg6") {
    cfg.params = name == "eg1" ? eg1_params() : eg6_params();
    cfg.x0 = cfg.params.m;
    cfg.maturities = unit_maturities(10);
    return cfg;
  }
  if (name == "fig1") {
    cfg.params = eg1_params();
    cfg.params.rho = -0.35;
    cfg.x0 = cfg.params.m;
    cfg.maturities = {10.0};
    cfg.mode = Mode::paths;
    return cfg;
  }
  throw ConfigError("unknown preset '" + std::string(name) + "' (expected eg1, eg6 or fig1)");
}

void check(const RunConfig& cfg) {
  validate(cfg.params);
  if (!(cfg.x0 > 0.0) || !std::isfinite(cfg.x0)) throw ConfigError("x0 must be positive");
  for (std::size_t i = 0; i < cfg.maturities.size(); ++i) {
    if (!(cfg.maturities[i] > 0.0)) throw ConfigError("maturities must be positive");
    if (i > 0 && !(cfg.maturities[i] > cfg.maturities[i - 1]))
      throw ConfigError("maturities must be strictly increasing");
  }
  if (cfg.order < 0 || cfg.order > ExpansionOrder::kMax)
    throw ConfigError("order must be in 0..3");
  if (cfg.mode != Mode::compare && cfg.mode != Mode::validate && cfg.maturities.empty())
    throw ConfigError("maturities: mode '" + std::string(to_string(cfg.mode)) +
                      "' needs at least one maturity");
  if (cfg.mode == Mode::expand && !(cfg.t >= 0.0 && cfg.t <= cfg.maturities.front()))
    throw ConfigError("t must satisfy 0 <= t <= first maturity");
  if (cfg.mode == Mode::validate && cfg.oracle_paths < 1)
    throw ConfigError("oracle_paths must be at least 1");
  if (cfg.mode == Mode::mc || cfg.mode == Mode::paths ||
      (cfg.mode == Mode::compare && !cfg.skip_mc)) {
    for (double T : cfg.maturities) check_config(cfg.mc, T);
  }
}

std::string to_json(const RunConfig& cfg) {
  json j;
  j["params"] = params_json(cfg.params);
  j["x0"] = cfg.x0;
  j["maturities"] = cfg.maturities;
  j["mc"] = json{{"pairs", cfg.mc.n_pairs},
                 {"dt", cfg.mc.dt},
                 {"bump", cfg.mc.bump},
                 {"seed", cfg.mc.seed},
                 {"crn", cfg.mc.common_random_numbers},
                 {"bump_scheme", to_string(cfg.mc.bump_scheme)},
                 {"chunk_size", cfg.mc.chunk_size},
                 {"threads", cfg.mc.threads}};
  j["mode"] = to_string(cfg.mode);
  j["order"] = cfg.order;
  j["t"] = cfg.t;
  j["skip_mc"] = cfg.skip_mc;
  j["with_z"] = cfg.with_z;
  j["oracle_paths"] = cfg.oracle_paths;
  j["output"] = cfg.output_path;
  j["format"] = to_string(cfg.format);
  return j.dump(2);
}

RunConfig parse_config(std::string_view json_text, const RunConfig& base) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  RunConfig cfg = base;
  if (j.contains("preset")) cfg = preset(j.at("preset").get<std::string>());
  if (j.contains("params")) {
    const json& p = j.at("params");
    read(p, "mu", cfg.params.mu);
    read(p, "k", cfg.params.k);
    read(p, "m", cfg.params.m);
    read(p, "c", cfg.params.c);
    read(p, "rho", cfg.params.rho);
    read(p, "gamma", cfg.params.gamma);
  }
  read(j, "x0", cfg.x0);
  read(j, "maturities", cfg.maturities);
  if (j.contains("mc")) {
    const json& m = j.at("mc");
    read(m, "pairs", cfg.mc.n_pairs);
    read(m, "dt", cfg.mc.dt);
    read(m, "bump", cfg.mc.bump);
    read(m, "seed", cfg.mc.seed);
    read(m, "crn", cfg.mc.common_random_numbers);
    read(m, "chunk_size", cfg.mc.chunk_size);
    read(m, "threads", cfg.mc.threads);
    std::string scheme;
    read(m, "bump_scheme", scheme);
    if (!scheme.empty()) cfg.mc.bump_scheme = parse_bump_scheme(scheme);
  }
  std::string text;
  read(j, "mode", text);
  if (!text.empty()) cfg.mode = parse_mode(text);
  read(j, "order", cfg.order);
  read(j, "t", cfg.t);
  read(j, "skip_mc", cfg.skip_mc);
  read(j, "with_z", cfg.with_z);
  read(j, "oracle_paths", cfg.oracle_paths);
  read(j, "output", cfg.output_path);
  text.clear();
  read(j, "format", text);
  if (!text.empty()) cfg.format = parse_format(text);
  return cfg;
}

RunConfig table_config(TableId table) {
  RunConfig cfg = preset(table == TableId::eg1 || table == TableId::zeg1 ? "eg1" : "eg6");
  cfg.mode = Mode::compare;
  return cfg;
}

Table reproduce_table(TableId id, const RunConfig& cfg) {
  const ValidatedParams params = validate(cfg.params);
  Table table;
  table.id = id;
  if (cfg.maturities.empty()) return table;

  std::vector<McEstimate> mc;
  if (!cfg.skip_mc) {
    mc = is_z_table(id) ? mc_z_curve(params, cfg.maturities, cfg.x0, cfg.mc)
                        : mc_value_curve(params, cfg.maturities, cfg.x0, cfg.mc);
  }
  for (std::size_t i = 0; i < cfg.maturities.size(); ++i) {
    TableRow row;
    row.maturity = cfg.maturities[i];
    if (!mc.empty()) row.mc = mc[i];
    const TermTable terms = term_table(make_state(0.0, row.maturity, cfg.x0), params);
    for (int o = 0; o <= ExpansionOrder::kMax; ++o) {
      row.eps[o] = is_z_table(id) ? sum_z(terms, ExpansionOrder(o)) : sum_v(terms, ExpansionOrder(o));
    }
    table.rows.push_back(row);
  }
  return table;
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s = buf;
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

void write_table_csv(std::ostream& out, const Table& table) {
  const char* q = is_z_table(table.id) ? "Z" : "V";
  const char* err = is_z_table(table.id) ? "err" : "std err";
  out << "maturity (yr)," << q << "-MC (%)," << err
      << " (%),eps-0th (%),eps-1st (%),eps-2nd (%),eps-3rd (%)\n";
  for (const auto& row : table.rows) {
    out << format_maturity(row.maturity) << ',';
    if (row.mc) {
      out << format_fixed(kPercent * row.mc->mean, 3) << ','
          << format_fixed(kPercent * row.mc->std_err, 3);
    } else {
      out << ',';
    }
    for (double e : row.eps) out << ',' << format_fixed(kPercent * e, 3);
    out << '\n';
  }
}

void write_table_json(std::ostream& out, const Table& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json r{{"maturity", row.maturity}, {"eps", row.eps}};
    if (row.mc) {
      r["mc_mean"] = row.mc->mean;
      r["mc_std_err"] = row.mc->std_err;
      r["mc_samples"] = row.mc->n_samples;
    }
    rows.push_back(std::move(r));
  }
  out << json{{"table", to_string(table.id)}, {"rows", std::move(rows)}}.dump(2) << '\n';
}

PathSample sample_paths(const RunConfig& cfg, std::uint64_t seed) {
  const ValidatedParams params = validate(cfg.params);
  if (cfg.maturities.empty()) throw ConfigError("maturities: paths mode needs a horizon");
  const double T = cfg.maturities.back();
  const std::size_t steps = step_count(T, cfg.mc.dt);
  const VarianceDynamics dyn = original_dynamics(params);
  if (!dyn.milstein_positive()) {
    throw ConfigError("implicit Milstein positivity fails under the original measure: k*m < c^2/4");
  }
  const ExpansionOrder order(cfg.order);

  PathSample s;
  s.x = simulate_variance_path(cfg.x0, dyn, cfg.mc.dt, steps, NormalStream(seed, 0));
  s.times.resize(steps + 1);
  s.z.resize(steps + 1);
  s.w_opt.resize(steps + 1);
  s.w_mv.resize(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    s.times[i] = i == steps ? T : static_cast<double>(i) * cfg.mc.dt;
    const TermTable terms = term_table(make_state(s.times[i], T, s.x[i]), params);
    s.z[i] = sum_z(terms, order);
    s.w_opt[i] = optimal_weight(s.x[i], s.z[i], params);
    s.w_mv[i] = mean_variance_weight(s.x[i], params);
  }
  return s;
}

void write_paths_csv(std::ostream& out, const PathSample& s) {
  out << "time,x,z,w_opt,w_mv\n";
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    out << format_general(s.times[i], 6) << ',' << format_general(s.x[i], 6) << ','
        << format_general(s.z[i], 6) << ',' << format_general(s.w_opt[i], 6) << ','
        << format_general(s.w_mv[i], 6) << '\n';
  }
}

void write_paths_json(std::ostream& out, const PathSample& s) {
  out << json{{"time", s.times}, {"x", s.x}, {"z", s.z}, {"w_opt", s.w_opt}, {"w_mv", s.w_mv}}
             .dump()
      << '\n';
}

void write_expansion(std::ostream& out, const RunConfig& cfg, const ExpansionResult& result,
                     const ValidatedParams& params) {
  const double T = cfg.maturities.front();
  const double w_opt = optimal_weight(cfg.x0, result.z, params);
  const double w_mv = mean_variance_weight(cfg.x0, params);

  if (cfg.format == OutputFormat::json) {
    json terms = json::object();
    for (std::size_t i = 0; i < kTermCount; ++i) {
      terms[std::string(info(static_cast<VTerm>(i)).label)] = result.terms.v[i];
      terms[std::string(info(static_cast<ZTerm>(i)).label)] = result.terms.z[i];
    }
    json j{{"t", cfg.t},         {"T", T},           {"x0", cfg.x0},
           {"order", cfg.order}, {"terms", terms},   {"V", result.v},
           {"Z", result.z},      {"w_opt", w_opt},   {"w_mv", w_mv}};
    json partial_v = json::array(), partial_z = json::array();
    for (int o = 0; o <= ExpansionOrder::kMax; ++o) {
      partial_v.push_back(sum_v(result.terms, ExpansionOrder(o)));
      partial_z.push_back(sum_z(result.terms, ExpansionOrder(o)));
    }
    j["V_by_order"] = partial_v;
    j["Z_by_order"] = partial_z;
    out << j.dump(2) << '\n';
    return;
  }

  const auto line = [&out](std::string_view name, double v) {
    out << name << ',' << format_general(v, 12) << ',' << format_fixed(kPercent * v, 3) << '\n';
  };
  out << "quantity,value,percent\n";
  for (std::size_t i = 0; i < kTermCount; ++i)
    line(info(static_cast<VTerm>(i)).label, result.terms.v[i]);
  for (std::size_t i = 0; i < kTermCount; ++i)
    line(info(static_cast<ZTerm>(i)).label, result.terms.z[i]);
  static constexpr std::array<std::string_view, 4> kV{"V_eps0", "V_eps1", "V_eps2", "V_eps3"};
  static constexpr std::array<std::string_view, 4> kZ{"Z_eps0", "Z_eps1", "Z_eps2", "Z_eps3"};
  for (int o = 0; o <= ExpansionOrder::kMax; ++o) line(kV[o], sum_v(result.terms, ExpansionOrder(o)));
  for (int o = 0; o <= ExpansionOrder::kMax; ++o) line(kZ[o], sum_z(result.terms, ExpansionOrder(o)));
  line("V", result.v);
  line("Z", result.z);
  out << "w_opt," << format_general(w_opt, 12) << ",\n";
  out << "w_mv," << format_general(w_mv, 12) << ",\n";
}

McReport run_mc(const RunConfig& cfg) {
  const ValidatedParams params = validate(cfg.params);
  McReport report;
  report.maturities = cfg.maturities;
  report.v = mc_value_curve(params, cfg.maturities, cfg.x0, cfg.mc);
  if (cfg.with_z) report.z = mc_z_curve(params, cfg.maturities, cfg.x0, cfg.mc);
  return report;
}

void write_mc(std::ostream& out, const McReport& report, OutputFormat format) {
  if (format == OutputFormat::json) {
    json rows = json::array();
    for (std::size_t i = 0; i < report.maturities.size(); ++i) {
      json r{{"maturity", report.maturities[i]},
             {"V", report.v[i].mean},
             {"V_std_err", report.v[i].std_err},
             {"pairs", report.v[i].n_samples}};
      if (!report.z.empty()) {
        r["Z"] = report.z[i].mean;
        r["Z_std_err"] = report.z[i].std_err;
      }
      rows.push_back(std::move(r));
    }
    out << rows.dump(2) << '\n';
    return;
  }
  out << "maturity,quantity,mean,std_err,pairs,mean (%),std_err (%)\n";
  const auto line = [&out](double T, const char* q, const McEstimate& e) {
    out << format_maturity(T) << ',' << q << ',' << format_general(e.mean, 12) << ','
        << format_general(e.std_err, 6) << ',' << e.n_samples << ','
        << format_fixed(kPercent * e.mean, 3) << ',' << format_fixed(kPercent * e.std_err, 4)
        << '\n';
  };
  for (std::size_t i = 0; i < report.maturities.size(); ++i) {
    line(report.maturities[i], "V", report.v[i]);
    if (!report.z.empty()) line(report.maturities[i], "Z", report.z[i]);
  }
}

void write_oracle(std::ostream& out, const MomentReport& report,
                  const std::vector<OracleCheck>& checks, OutputFormat format) {
  if (format == OutputFormat::json) {
    json rows = json::array();
    for (const auto& c : checks) {
      rows.push_back(json{{"moment", c.name},
                          {"estimate", c.estimate},
                          {"std_err", c.std_err},
                          {"target", c.target},
                          {"passed", c.passed}});
    }
    out << json{{"time", report.time}, {"paths", report.n_paths}, {"checks", rows}}.dump(2)
        << '\n';
    return;
  }
  out << "moment,estimate,std_err,target,z_score,result\n";
  for (const auto& c : checks) {
    const double z = c.std_err > 0.0 ? (c.estimate - c.target) / c.std_err : 0.0;
    out << c.name << ',' << format_general(c.estimate, 6) << ',' << format_general(c.std_err, 6)
        << ',' << format_general(c.target, 6) << ',' << format_fixed(z, 3) << ','
        << (c.passed ? "PASS" : "FAIL") << '\n';
  }
}

}  // namespace qfbsde
