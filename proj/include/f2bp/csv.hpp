#pragma once

#include "f2bp/dynamics.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace f2bp {

/// Column names of the states CSV:
/// t, X, V, R (row-major), Omega, Omega2, x1, x2, v1, v2, R2 (row-major).
std::vector<std::string> state_columns();
/// t, U, KE, E, gamma_T, pi_T, errR, errR2
std::vector<std::string> diagnostics_columns();

void write_header(std::ostream& out, const std::vector<std::string>& columns);
void write_state_row(std::ostream& out, double t, const RelativeState& rel, const InertialState& in);
void write_diagnostics_row(std::ostream& out, const DiagnosticsRecord& d);

/// Numeric CSV with one header row.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& file);

/// Relative and inertial state stored in one row of a states CSV.
struct StateRow {
  double t = 0.0;
  RelativeState rel;
  InertialState in;
};

StateRow parse_state_row(const std::vector<double>& row);
/// The last row of a states CSV. Throws ParseError on a malformed file.
StateRow read_last_state(const std::filesystem::path& file);

}  // namespace f2bp
