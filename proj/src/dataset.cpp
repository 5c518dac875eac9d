#include "fuzzybeta/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "fuzzybeta/error.hpp"

namespace fuzzybeta {

std::size_t CsvTable::column_index(const std::string& name) const {
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == name) return j;
  throw UsageError("column '" + name + "' not found");
}

bool CsvTable::has_column(const std::string& name) const {
  for (const auto& h : header)
    if (h == name) return true;
  return false;
}

bool is_missing(const std::string& cell) {
  return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan";
}

double parse_number(const std::string& cell, std::size_t line) {
  std::size_t b = cell.find_first_not_of(" \t");
  std::size_t e = cell.find_last_not_of(" \t");
  if (b == std::string::npos) throw ParseError(line, "empty numeric cell");
  const char* first = cell.data() + b;
  const char* last = cell.data() + e + 1;
  if (*first == '+') ++first;
  double v = 0.0;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
    throw ParseError(line, "not a number: '" + cell + "'");
  }
  return v;
}

std::vector<double> CsvTable::numeric(const std::string& name) const {
  const std::size_t j = column_index(name);
  std::vector<double> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string& cell = rows[i][j];
    out[i] = is_missing(cell) ? std::numeric_limits<double>::quiet_NaN()
                              : parse_number(cell, lines[i]);
  }
  return out;
}

namespace {

std::vector<std::string> split_record(const std::string& text, char delim, std::size_t line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == delim) {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw ParseError(line, "unterminated quoted field");
  fields.push_back(cur);
  for (auto& f : fields) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return fields;
}

}  // namespace

CsvTable parse_csv(std::istream& in, char delimiter) {
  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      line.erase(0, 3);
    }
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto fields = split_record(line, delimiter, lineno);
    if (!have_header) {
      t.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw ParseError(lineno, "expected " + std::to_string(t.header.size()) + " fields, found " +
                                   std::to_string(fields.size()));
    }
    t.rows.push_back(std::move(fields));
    t.lines.push_back(lineno);
  }
  if (!have_header) throw ParseError(lineno, "missing header row");
  return t;
}

CsvTable read_csv(const std::string& path, char delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  return parse_csv(in, delimiter);
}

void write_csv(std::ostream& out, const CsvTable& table, char delimiter) {
  const auto emit = [&](const std::vector<std::string>& fields) {
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (j) out << delimiter;
      const std::string& f = fields[j];
      if (f.find(delimiter) != std::string::npos || f.find('"') != std::string::npos) {
        out << '"';
        for (char c : f) out << (c == '"' ? "\"\"" : std::string(1, c));
        out << '"';
      } else {
        out << f;
      }
    }
    out << '\n';
  };
  emit(table.header);
  for (const auto& r : table.rows) emit(r);
}

std::string format_full(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

LoadedDataset load_fuzzy_dataset(const CsvTable& table, const ModelSpec& spec) {
  const std::vector<double> modes = table.numeric(spec.mode_col);
  const std::vector<double> spreads = table.numeric(spec.spread_col);
  std::vector<std::vector<double>> xcols, zcols;
  for (const auto& c : spec.mu_covariates) xcols.push_back(table.numeric(c));
  for (const auto& c : spec.phi_covariates) zcols.push_back(table.numeric(c));

  LoadedDataset out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    bool complete = !std::isnan(modes[i]) && !std::isnan(spreads[i]);
    for (const auto& c : xcols) complete = complete && !std::isnan(c[i]);
    for (const auto& c : zcols) complete = complete && !std::isnan(c[i]);
    if (complete) {
      out.kept_rows.push_back(i);
    } else {
      ++out.dropped_missing;
    }
  }
  const auto n = static_cast<Eigen::Index>(out.kept_rows.size());
  if (n == 0) throw UsageError("no complete rows in the referenced columns");

  FuzzyDataset& d = out.data;
  d.modes.resize(n);
  d.spreads.resize(n);
  d.design.X.resize(n, static_cast<Eigen::Index>(xcols.size() + 1));
  d.design.Z.resize(n, static_cast<Eigen::Index>(zcols.size() + 1));
  d.design.mean_names = {"(Intercept)"};
  d.design.precision_names = {"(Intercept)"};
  for (const auto& c : spec.mu_covariates) d.design.mean_names.push_back(c);
  for (const auto& c : spec.phi_covariates) d.design.precision_names.push_back(c);

  for (Eigen::Index k = 0; k < n; ++k) {
    const std::size_t i = out.kept_rows[static_cast<std::size_t>(k)];
    double m = modes[i];
    try {
      if (sanitize_mode(m, spec.boundary)) ++out.clamped_modes;
    } catch (const DomainError& e) {
      throw ParseError(table.lines[i], e.what());
    }
    if (spreads[i] < 0.0) throw ParseError(table.lines[i], "negative spread");
    d.modes[k] = m;
    d.spreads[k] = spreads[i];
    d.design.X(k, 0) = 1.0;
    d.design.Z(k, 0) = 1.0;
    for (std::size_t j = 0; j < xcols.size(); ++j)
      d.design.X(k, static_cast<Eigen::Index>(j + 1)) = xcols[j][i];
    for (std::size_t j = 0; j < zcols.size(); ++j)
      d.design.Z(k, static_cast<Eigen::Index>(j + 1)) = zcols[j][i];
  }
  return out;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a_hex(ss.str());
}

}  // namespace fuzzybeta
