#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qfbsde/harness.hpp"

namespace qfbsde::cli {
namespace {

constexpr std::size_t kPaperScalePairs = 1000000;

// Flags shared by every subcommand. Values are only applied when given, so
// that preset < config file < flags.
struct CommonFlags {
  std::string preset;
  std::string config_path;
  double mu = 0, k = 0, m = 0, c = 0, rho = 0, gamma = 0, x0 = 0, T = 0;
  std::vector<double> maturities;
  std::string out;
  std::string format;
  CLI::Option *o_mu{}, *o_k{}, *o_m{}, *o_c{}, *o_rho{}, *o_gamma{}, *o_x0{}, *o_T{},
      *o_maturities{}, *o_format{};

  void attach(CLI::App* app) {
    app->add_option("--preset", preset, "Built-in parameter set")
        ->check(CLI::IsMember({"eg1", "eg6", "fig1"}));
    app->add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    o_mu = app->add_option("--mu", mu, "Asset drift");
    o_k = app->add_option("--k", k, "Mean-reversion speed");
    o_m = app->add_option("--m", m, "Long-run variance");
    o_c = app->add_option("--c", c, "Vol-of-vol");
    o_rho = app->add_option("--rho", rho, "Correlation");
    o_gamma = app->add_option("--gamma", gamma, "Absolute risk aversion");
    o_x0 = app->add_option("--x0", x0, "Initial variance (defaults to m)");
    o_T = app->add_option("--T", T, "Single horizon in years");
    o_maturities = app->add_option("--maturities", maturities, "Horizons in years")
                       ->delimiter(',')
                       ->excludes(o_T);
    app->add_option("--out", out, "Output file (relative paths resolve against $" +
                                      std::string(kOutputDirEnv) + ")");
    o_format = app->add_option("--format", format, "Output format")
                   ->check(CLI::IsMember({"csv", "json"}));
  }

  void apply(RunConfig& cfg) const {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      std::stringstream text;
      text << in.rdbuf();
      cfg = parse_config(text.str(), cfg);
    }
    const bool m_given = o_m->count() > 0;
    if (o_mu->count()) cfg.params.mu = mu;
    if (o_k->count()) cfg.params.k = k;
    if (m_given) cfg.params.m = m;
    if (o_c->count()) cfg.params.c = c;
    if (o_rho->count()) cfg.params.rho = rho;
    if (o_gamma->count()) cfg.params.gamma = gamma;
    if (o_x0->count()) {
      cfg.x0 = x0;
    } else if (m_given || cfg.x0 <= 0.0) {
      cfg.x0 = cfg.params.m;
    }
    if (o_T->count()) cfg.maturities = {T};
    if (o_maturities->count()) cfg.maturities = maturities;
    if (!out.empty()) cfg.output_path = out;
    if (o_format->count()) cfg.format = parse_format(format);
  }
};

struct McFlags {
  std::size_t pairs = 0, chunk_size = 0;
  double dt = 0, bump = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string scheme;
  bool independent = false;
  bool paper_scale = false;
  CLI::Option *o_pairs{}, *o_chunk{}, *o_dt{}, *o_bump{}, *o_seed{}, *o_threads{}, *o_scheme{};

  void attach(CLI::App* app, bool with_bump) {
    o_pairs = app->add_option("--pairs", pairs, "Antithetic path pairs")->check(CLI::PositiveNumber);
    app->add_flag("--paper-scale", paper_scale, "Use 1M antithetic pairs")->excludes(o_pairs);
    o_dt = app->add_option("--dt", dt, "Time step in years")->check(CLI::PositiveNumber);
    o_seed = app->add_option("--seed", seed, "RNG seed");
    o_chunk = app->add_option("--chunk-size", chunk_size, "Pairs per work unit")
                  ->check(CLI::PositiveNumber);
    o_threads = app->add_option("--threads", threads, "Worker threads (0: all cores)");
    if (with_bump) {
      o_bump = app->add_option("--bump", bump, "Initial-variance shift for Z")
                   ->check(CLI::PositiveNumber);
      o_scheme = app->add_option("--bump-scheme", scheme, "Finite-difference side for Z")
                     ->check(CLI::IsMember({"backward", "forward", "central"}));
      app->add_flag("--independent", independent,
                    "Draw fresh random numbers for the shifted valuation");
    }
  }

  void apply(McConfig& mc) const {
    if (o_pairs->count()) mc.n_pairs = pairs;
    if (paper_scale) mc.n_pairs = kPaperScalePairs;
    if (o_dt->count()) mc.dt = dt;
    if (o_seed->count()) mc.seed = seed;
    if (o_chunk->count()) mc.chunk_size = chunk_size;
    if (o_threads->count()) mc.threads = threads;
    if (o_bump && o_bump->count()) mc.bump = bump;
    if (o_scheme && o_scheme->count()) mc.bump_scheme = parse_bump_scheme(scheme);
    if (independent) mc.common_random_numbers = false;
  }
};

RunConfig base_config(const std::string& preset_name, const char* fallback) {
  return preset(preset_name.empty() ? fallback : preset_name);
}

std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
      p = std::filesystem::path(dir) / p;
    }
  }
  return p;
}

// Writes via `emit` to the configured file, or to `out`.
template <class Emit>
void emit_output(const RunConfig& cfg, std::ostream& out, Emit&& emit) {
  if (cfg.output_path.empty()) {
    emit(out);
    return;
  }
  const auto path = resolve_output(cfg.output_path);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot open output file '" + path.string() + "'");
  emit(file);
  if (!file) throw std::runtime_error("failed writing '" + path.string() + "'");
}

void report_warnings(const RunConfig& cfg, std::ostream& err) {
  for (const auto& w : validate(cfg.params).warnings()) err << "warning: " << w << '\n';
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Asymptotic expansion and Cole-Hopf Monte Carlo for the exponential-utility "
               "FBSDE under stochastic volatility",
               "qfbsde"};
  app.require_subcommand(1);

  // expand
  CommonFlags expand_common;
  int expand_order = ExpansionOrder::kMax;
  double expand_t = 0.0;
  auto* expand = app.add_subcommand("expand", "Closed-form terms, partial sums and weights");
  expand_common.attach(expand);
  expand->add_option("--order", expand_order, "eps order 0..3")->check(CLI::Range(0, 3));
  expand->add_option("--t", expand_t, "Evaluation time");

  // mc
  CommonFlags mc_common;
  McFlags mc_flags;
  bool mc_z = false;
  auto* mc = app.add_subcommand("mc", "Cole-Hopf Monte Carlo estimate of V (and Z)");
  mc_common.attach(mc);
  mc_flags.attach(mc, true);
  mc->add_flag("--z", mc_z, "Also estimate Z by revaluation");

  // compare
  CommonFlags cmp_common;
  McFlags cmp_flags;
  std::string table_name;
  bool skip_mc = false;
  auto* compare = app.add_subcommand("compare", "Reproduce a comparison table as CSV");
  cmp_common.attach(compare);
  cmp_flags.attach(compare, true);
  compare->add_option("--table", table_name, "eg1, eg6, zeg1 or zeg6")
      ->required()
      ->check(CLI::IsMember({"eg1", "eg6", "zeg1", "zeg6"}));
  compare->add_flag("--skip-mc", skip_mc, "Closed-form columns only");

  // paths
  CommonFlags paths_common;
  McFlags paths_flags;
  int paths_order = ExpansionOrder::kMax;
  auto* paths = app.add_subcommand("paths", "Sample path of the optimal and myopic weights");
  paths_common.attach(paths);
  paths_flags.attach(paths, false);
  paths->add_option("--order", paths_order, "eps order 0..3 used for Z")->check(CLI::Range(0, 3));

  // validate
  CommonFlags val_common;
  std::size_t val_paths = 0;
  double val_dt = 0.0;
  std::uint64_t val_seed = 0;
  auto* validate_cmd = app.add_subcommand("validate", "Moment checks of the expansion processes");
  val_common.attach(validate_cmd);
  auto* o_val_paths = validate_cmd->add_option("--paths", val_paths, "Independent paths")
                          ->check(CLI::PositiveNumber);
  auto* o_val_dt = validate_cmd->add_option("--dt", val_dt, "Time step")->check(CLI::PositiveNumber);
  auto* o_val_seed = validate_cmd->add_option("--seed", val_seed, "RNG seed");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (expand->parsed()) {
      RunConfig cfg = base_config(expand_common.preset, "eg1");
      cfg.mode = Mode::expand;
      expand_common.apply(cfg);
      if (expand->count("--order")) cfg.order = expand_order;
      if (expand->count("--t")) cfg.t = expand_t;
      check(cfg);
      report_warnings(cfg, err);
      const ValidatedParams params = validate(cfg.params);
      const double T = cfg.maturities.front();
      const ExpansionResult result =
          qfbsde::expand(make_state(cfg.t, T, cfg.x0), params, ExpansionOrder(cfg.order));
      emit_output(cfg, out, [&](std::ostream& os) { write_expansion(os, cfg, result, params); });
      return 0;
    }

    if (mc->parsed()) {
      RunConfig cfg = base_config(mc_common.preset, "eg1");
      cfg.mode = Mode::mc;
      mc_common.apply(cfg);
      mc_flags.apply(cfg.mc);
      if (mc_z) cfg.with_z = true;
      check(cfg);
      report_warnings(cfg, err);
      const auto start = std::chrono::steady_clock::now();
      const McReport report = run_mc(cfg);
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      emit_output(cfg, out, [&](std::ostream& os) { write_mc(os, report, cfg.format); });
      err << "mc: " << cfg.mc.n_pairs << " pairs in " << elapsed.count() << " s\n";
      return 0;
    }

    if (compare->parsed()) {
      const TableId id = parse_table(table_name);
      RunConfig cfg = table_config(id);
      if (!cmp_common.preset.empty()) cfg = base_config(cmp_common.preset, "eg1");
      cfg.mode = Mode::compare;
      cmp_common.apply(cfg);
      cmp_flags.apply(cfg.mc);
      if (skip_mc) cfg.skip_mc = true;
      check(cfg);
      report_warnings(cfg, err);
      const Table table = reproduce_table(id, cfg);
      emit_output(cfg, out, [&](std::ostream& os) {
        if (cfg.format == OutputFormat::json) {
          write_table_json(os, table);
        } else {
          write_table_csv(os, table);
        }
      });
      return 0;
    }

    if (paths->parsed()) {
      RunConfig cfg = base_config(paths_common.preset, "fig1");
      cfg.mode = Mode::paths;
      paths_common.apply(cfg);
      paths_flags.apply(cfg.mc);
      if (paths->count("--order")) cfg.order = paths_order;
      check(cfg);
      report_warnings(cfg, err);
      const PathSample sample = sample_paths(cfg, cfg.mc.seed);
      emit_output(cfg, out, [&](std::ostream& os) {
        if (cfg.format == OutputFormat::json) {
          write_paths_json(os, sample);
        } else {
          write_paths_csv(os, sample);
        }
      });
      return 0;
    }

    if (validate_cmd->parsed()) {
      RunConfig cfg = base_config(val_common.preset, "eg1");
      cfg.mode = Mode::validate;
      cfg.maturities = {1.0};
      val_common.apply(cfg);
      if (o_val_paths->count()) cfg.oracle_paths = val_paths;
      if (o_val_dt->count()) cfg.mc.dt = val_dt;
      if (o_val_seed->count()) cfg.mc.seed = val_seed;
      check(cfg);
      const ValidatedParams params = validate(cfg.params);
      OracleConfig oc;
      oc.n_paths = cfg.oracle_paths;
      oc.dt = cfg.mc.dt;
      oc.horizon = cfg.maturities.back();
      oc.seed = cfg.mc.seed;
      oc.threads = cfg.mc.threads;
      const MomentReport report = run_moment_oracle(params, cfg.x0, oc).back();
      const auto checks = check_moments(report, params, cfg.x0);
      emit_output(cfg, out, [&](std::ostream& os) { write_oracle(os, report, checks, cfg.format); });
      const bool ok = std::all_of(checks.begin(), checks.end(), [](auto& c) { return c.passed; });
      if (!ok) err << "validate: at least one moment check failed\n";
      return ok ? 0 : 1;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace qfbsde::cli
