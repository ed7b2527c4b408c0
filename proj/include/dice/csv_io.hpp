#ifndef DICE_CSV_IO_HPP
#define DICE_CSV_IO_HPP

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dice/sensitivity.hpp"
#include "dice/trajectory.hpp"

namespace dice {

/// A rectangular table of doubles with named columns.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  int column_index(std::string_view name) const;
  std::vector<double> column(std::string_view name) const; ///< throws if absent
};

/// Serializes a double with up to 17 significant digits; parsing the result
/// reproduces the value exactly.
std::string format_value(double value);

void write_csv(const std::filesystem::path& path, const Table& table);

/// Throws std::runtime_error with a line number on malformed input.
Table read_csv(const std::filesystem::path& path);

/// Base trajectory table: year,K,TATM,TLO,MAT,MUP,MLO,mu,s,E,RF,C,U followed
/// by the exogenous columns sigma,L,A,ELand,FEX,theta1. year(1) = base_year.
Table trajectory_table(const Trajectory& traj, const ControlPath& controls,
                       const ExogenousPath& exo, const ModelParams& params);

void append_scc_columns(Table& table, const MarginalSet& marginals);
void append_aux_columns(Table& table, const AuxiliaryQuantities& aux);

/// Writes one two-column (year, value) space-separated file per non-year
/// column: <prefix><column>.dat. Returns the file paths.
std::vector<std::filesystem::path>
write_plot_series(const std::filesystem::path& prefix, const Table& table);

struct ColumnTolerance {
  double abs = 0.0;
  double rel = 1e-4;
};

struct VerifySpec {
  ColumnTolerance default_tolerance;
  std::map<std::string, ColumnTolerance> per_column;
  /// produced-column name -> reference-column name
  std::map<std::string, std::string> column_map;
};

struct ColumnReport {
  std::string column;
  int worst_row = -1; ///< 0-based row of the worst offender, -1 if equal
  double produced = 0.0;
  double reference = 0.0;
  double abs_err = 0.0;
  double tol = 0.0;
  bool pass = true;
};

struct VerifyReport {
  bool pass = false;
  std::vector<ColumnReport> columns; ///< one entry per compared column
  std::vector<std::string> skipped;  ///< columns present on only one side
  std::string failure;               ///< structural failure, if any
};

/// Column-by-column comparison under |a-b| <= max(abs, rel*max(|a|,|b|)),
/// which is symmetric in its operands.
VerifyReport verify_tables(const Table& produced, const Table& reference,
                           const VerifySpec& spec);

} // namespace dice

#endif
