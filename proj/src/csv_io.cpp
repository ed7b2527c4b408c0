#include "dice/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dice {

int Table::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<double> Table::column(std::string_view name) const {
  const int idx = column_index(name);
  if (idx < 0) throw std::runtime_error("table has no column '" + std::string(name) + "'");
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[idx]);
  return out;
}

std::string format_value(double value) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_csv(const std::filesystem::path& path, const Table& table) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out << ',';
    out << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_value(row[i]);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& text, int line_no) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  double value = 0.0;
  auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{}) {
    throw std::runtime_error("line " + std::to_string(line_no) +
                             ": cannot parse '" + text + "' as a number");
  }
  return value;
}

} // namespace

Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");

  Table table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (line_no == 1) {
      table.columns = std::move(fields);
      continue;
    }
    if (fields.size() != table.columns.size()) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(table.columns.size()) + " fields, got " +
                               std::to_string(fields.size()));
    }
    std::vector<double> row(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      row[i] = parse_double(fields[i], line_no);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.columns.empty()) {
    throw std::runtime_error("'" + path.string() + "' has no header row");
  }
  return table;
}

Table trajectory_table(const Trajectory& traj, const ControlPath& controls,
                       const ExogenousPath& exo, const ModelParams& params) {
  Table t;
  t.columns = {"year", "K",  "TATM", "TLO", "MAT",   "MUP", "MLO",  "mu", "s",
               "E",    "RF", "C",    "U",   "sigma", "L",   "A",    "ELand",
               "FEX",  "theta1"};
  const int n = static_cast<int>(traj.states.size());
  t.rows.reserve(n);
  for (int i = 1; i <= n; ++i) {
    const State& st = traj.states[i - 1];
    const StepOutput& o = traj.outputs[i - 1];
    t.rows.push_back({static_cast<double>(params.year_of(i)), st.k, st.tat, st.tlo,
                      st.mat, st.mup, st.mlo, controls.mu[i - 1], controls.s[i - 1],
                      o.emissions, o.forcing, o.consumption, o.utility,
                      exo.sigma[i - 1], exo.labor[i - 1], exo.tfp[i - 1],
                      exo.eland[i - 1], exo.fex[i - 1], exo.theta1[i - 1]});
  }
  return t;
}

namespace {

void append_column(Table& table, const std::string& name,
                   const std::vector<double>& values) {
  if (values.size() != table.rows.size()) {
    throw std::invalid_argument("column '" + name + "' length mismatch");
  }
  table.columns.push_back(name);
  for (std::size_t i = 0; i < values.size(); ++i) table.rows[i].push_back(values[i]);
}

} // namespace

void append_scc_columns(Table& table, const MarginalSet& marginals) {
  append_column(table, "lamE", marginals.lam_e);
  append_column(table, "lamC", marginals.lam_c);
  append_column(table, "SCC", marginals.scc);
}

void append_aux_columns(Table& table, const AuxiliaryQuantities& aux) {
  append_column(table, "IE", aux.ie);
  append_column(table, "NEO", aux.neo);
  append_column(table, "PCC", aux.pcc);
  append_column(table, "DF", aux.df);
  append_column(table, "ACppm", aux.acppm);
  append_column(table, "MCA", aux.mca);
}

std::vector<std::filesystem::path>
write_plot_series(const std::filesystem::path& prefix, const Table& table) {
  const int year_idx = table.column_index("year");
  if (year_idx < 0) throw std::invalid_argument("plot data requires a year column");
  std::vector<std::filesystem::path> written;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (static_cast<int>(c) == year_idx) continue;
    std::filesystem::path path = prefix;
    path += table.columns[c];
    path += ".dat";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    for (const auto& row : table.rows) {
      out << format_value(row[year_idx]) << ' ' << format_value(row[c]) << '\n';
    }
    written.push_back(std::move(path));
  }
  return written;
}

VerifyReport verify_tables(const Table& produced, const Table& reference,
                           const VerifySpec& spec) {
  VerifyReport report;
  if (produced.rows.size() != reference.rows.size()) {
    report.failure = "row count mismatch: " + std::to_string(produced.rows.size()) +
                     " vs " + std::to_string(reference.rows.size());
    return report;
  }

  auto mapped_name = [&](const std::string& ours) {
    auto it = spec.column_map.find(ours);
    return it == spec.column_map.end() ? ours : it->second;
  };

  bool all_pass = true;
  int compared = 0;
  for (std::size_t c = 0; c < produced.columns.size(); ++c) {
    const std::string& ours = produced.columns[c];
    const int ref_idx = reference.column_index(mapped_name(ours));
    if (ref_idx < 0) {
      report.skipped.push_back(ours);
      continue;
    }
    ++compared;
    ColumnTolerance tol = spec.default_tolerance;
    if (auto it = spec.per_column.find(ours); it != spec.per_column.end()) {
      tol = it->second;
    }
    ColumnReport col;
    col.column = ours;
    double worst_excess = -1.0;
    for (std::size_t r = 0; r < produced.rows.size(); ++r) {
      const double a = produced.rows[r][c];
      const double b = reference.rows[r][ref_idx];
      const double err = std::abs(a - b);
      const double allowed =
          std::max(tol.abs, tol.rel * std::max(std::abs(a), std::abs(b)));
      const double excess = err - allowed;
      if (excess > worst_excess) {
        worst_excess = excess;
        col.worst_row = static_cast<int>(r);
        col.produced = a;
        col.reference = b;
        col.abs_err = err;
        col.tol = allowed;
      }
      if (err > allowed) col.pass = false;
    }
    all_pass = all_pass && col.pass;
    report.columns.push_back(std::move(col));
  }
  for (const auto& name : reference.columns) {
    bool used = false;
    for (std::size_t c = 0; c < produced.columns.size(); ++c) {
      if (mapped_name(produced.columns[c]) == name &&
          reference.column_index(name) >= 0) {
        used = true;
        break;
      }
    }
    if (!used) report.skipped.push_back(name + " (reference only)");
  }
  if (compared == 0) {
    report.failure = "no common columns to compare";
    return report;
  }
  report.pass = all_pass;
  return report;
}

} // namespace dice
