#include "f2bp/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace f2bp {
namespace {

void push_vec(std::vector<std::string>& c, const std::string& name) {
  for (const char* s : {"_x", "_y", "_z"}) c.push_back(name + s);
}

void push_mat(std::vector<std::string>& c, const std::string& name) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) c.push_back(name + "_" + std::to_string(i) + std::to_string(j));
  }
}

void put(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << ',' << buf;
}

void put(std::ostream& out, const Vec3& v) {
  for (int i = 0; i < 3; ++i) put(out, v[i]);
}

void put(std::ostream& out, const Mat3& m) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) put(out, m(i, j));
  }
}

void put_first(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

}  // namespace

std::vector<std::string> state_columns() {
  std::vector<std::string> c{"t"};
  push_vec(c, "X");
  push_vec(c, "V");
  push_mat(c, "R");
  push_vec(c, "Omega");
  push_vec(c, "Omega2");
  push_vec(c, "x1");
  push_vec(c, "x2");
  push_vec(c, "v1");
  push_vec(c, "v2");
  push_mat(c, "R2");
  return c;
}

std::vector<std::string> diagnostics_columns() {
  std::vector<std::string> c{"t", "U", "KE", "E"};
  push_vec(c, "gamma_T");
  push_vec(c, "pi_T");
  c.push_back("errR");
  c.push_back("errR2");
  return c;
}

void write_header(std::ostream& out, const std::vector<std::string>& columns) {
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
}

void write_state_row(std::ostream& out, double t, const RelativeState& rel, const InertialState& in) {
  put_first(out, t);
  put(out, rel.X);
  put(out, rel.V);
  put(out, rel.R);
  put(out, rel.Omega);
  put(out, rel.Omega2);
  put(out, in.x1);
  put(out, in.x2);
  put(out, in.v1);
  put(out, in.v2);
  put(out, in.R2);
  out << '\n';
}

void write_diagnostics_row(std::ostream& out, const DiagnosticsRecord& d) {
  put_first(out, d.t);
  put(out, d.U);
  put(out, d.KE);
  put(out, d.E);
  put(out, d.gamma_T);
  put(out, d.pi_T);
  put(out, d.errR);
  put(out, d.errR2);
  out << '\n';
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<int>(i);
  }
  throw ParseError("no column named '" + name + "'", 1);
}

CsvTable read_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open " + file.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV file " + file.string(), 1);
  {
    std::stringstream ss(line);
    std::string name;
    while (std::getline(ss, name, ',')) t.columns.push_back(name);
  }
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    std::vector<double> row;
    row.reserve(t.columns.size());
    const char* p = line.data();
    const char* end = p + line.size();
    while (p <= end) {
      const char* comma = std::find(p, end, ',');
      double v = 0.0;
      const auto [q, ec] = std::from_chars(p, comma, v);
      if (ec != std::errc() || q != comma) throw ParseError("malformed number in " + file.string(), n);
      row.push_back(v);
      p = comma + 1;
    }
    if (row.size() != t.columns.size()) throw ParseError("wrong field count in " + file.string(), n);
    t.rows.push_back(std::move(row));
  }
  return t;
}

StateRow parse_state_row(const std::vector<double>& r) {
  if (r.size() != state_columns().size()) throw ParseError("state row has the wrong field count", 0);
  auto vec = [&](int at) { return Vec3(r[at], r[at + 1], r[at + 2]); };
  auto mat = [&](int at) {
    Mat3 m;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) m(i, j) = r[at + 3 * i + j];
    }
    return m;
  };
  StateRow s;
  s.t = r[0];
  s.rel.X = vec(1);
  s.rel.V = vec(4);
  s.rel.R = mat(7);
  s.rel.Omega = vec(16);
  s.rel.Omega2 = vec(19);
  s.in.x1 = vec(22);
  s.in.x2 = vec(25);
  s.in.v1 = vec(28);
  s.in.v2 = vec(31);
  s.in.R2 = mat(34);
  s.in.R1 = s.in.R2 * s.rel.R;
  return s;
}

StateRow read_last_state(const std::filesystem::path& file) {
  const CsvTable t = read_csv(file);
  if (t.columns != state_columns()) throw ParseError("not a states CSV: " + file.string(), 1);
  if (t.rows.empty()) throw ParseError("states CSV has no rows: " + file.string(), 0);
  return parse_state_row(t.rows.back());
}

}  // namespace f2bp
