#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qfbsde/colehopf.hpp"
#include "qfbsde/expansion.hpp"
#include "qfbsde/model.hpp"
#include "qfbsde/xoracle.hpp"

namespace qfbsde {

enum class Mode { expand, mc, compare, paths, validate };
enum class OutputFormat { csv, json };
enum class TableId { eg1, eg6, zeg1, zeg6 };

std::string_view to_string(Mode mode) noexcept;
std::string_view to_string(OutputFormat format) noexcept;
std::string_view to_string(TableId table) noexcept;
std::string_view to_string(BumpScheme scheme) noexcept;
Mode parse_mode(std::string_view text);
OutputFormat parse_format(std::string_view text);
TableId parse_table(std::string_view text);
BumpScheme parse_bump_scheme(std::string_view text);

struct RunConfig {
  ModelParams params;
  double x0 = 0.0;
  std::vector<double> maturities;  // strictly increasing, positive
  McConfig mc;
  Mode mode = Mode::compare;
  int order = ExpansionOrder::kMax;
  double t = 0.0;                // evaluation time for expand
  bool skip_mc = false;          // compare: closed-form columns only
  bool with_z = false;           // mc: also estimate Z
  std::size_t oracle_paths = 100000;
  std::string output_path;       // empty: standard output
  OutputFormat format = OutputFormat::csv;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Table parameter set with the lower vol-of-vol (k = 15%, c = 5%).
ModelParams eg1_params() noexcept;
/// Table parameter set with the higher vol-of-vol (k = 20%, c = 12%).
ModelParams eg6_params() noexcept;

/// Built-in presets: "eg1", "eg6" (x0 = m, maturities 1..10) and "fig1"
/// (eg1 with rho = -35%, one 10-year horizon, eps-3rd order).
RunConfig preset(std::string_view name);

/// Throws ConfigError naming the offending field.
void check(const RunConfig& cfg);

/// JSON form of a configuration; parse_config(to_json(c)) == c.
std::string to_json(const RunConfig& cfg);

/// Reads JSON keys over `base` (absent keys keep their base value). A
/// "preset" key, if present, replaces the base before other keys apply.
RunConfig parse_config(std::string_view json_text, const RunConfig& base = RunConfig{});

struct TableRow {
  double maturity = 0.0;
  std::optional<McEstimate> mc;
  std::array<double, ExpansionOrder::kMax + 1> eps{};  // eps-0th .. eps-3rd
};

struct Table {
  TableId id = TableId::eg1;
  std::vector<TableRow> rows;
};

/// Default configuration of a comparison table (its published parameters).
RunConfig table_config(TableId table);

/// One row per maturity with the MC estimate (unless cfg.skip_mc) and the
/// four eps partial sums of V (eg tables) or Z (zeg tables).
Table reproduce_table(TableId table, const RunConfig& cfg);

/// CSV in percent with 3 decimals; MC cells are empty when not computed.
void write_table_csv(std::ostream& out, const Table& table);
void write_table_json(std::ostream& out, const Table& table);

/// Sample path of the variance and of the optimal and mean-variance weights.
struct PathSample {
  std::vector<double> times;
  std::vector<double> x;
  std::vector<double> z;
  std::vector<double> w_opt;
  std::vector<double> w_mv;
};

/// Simulates X under the original measure on [0, T] with T = last maturity and
/// grid cfg.mc.dt, evaluating Z from the expansion (order cfg.order) at each point.
PathSample sample_paths(const RunConfig& cfg, std::uint64_t seed);

/// time,x,z,w_opt,w_mv with 6 significant digits.
void write_paths_csv(std::ostream& out, const PathSample& sample);
void write_paths_json(std::ostream& out, const PathSample& sample);

void write_expansion(std::ostream& out, const RunConfig& cfg, const ExpansionResult& result,
                     const ValidatedParams& params);

struct McReport {
  std::vector<double> maturities;
  std::vector<McEstimate> v;
  std::vector<McEstimate> z;  // empty unless requested
};

McReport run_mc(const RunConfig& cfg);
void write_mc(std::ostream& out, const McReport& report, OutputFormat format);

void write_oracle(std::ostream& out, const MomentReport& report,
                  const std::vector<OracleCheck>& checks, OutputFormat format);

/// Fixed-point text with `decimals` places; never prints "-0.000".
std::string format_fixed(double value, int decimals);

}  // namespace qfbsde
