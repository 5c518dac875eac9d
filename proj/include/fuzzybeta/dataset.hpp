#pragma once

// Delimited-text input for the command-line tool: a header row, one row per
// observation, dot decimals. "NA" and empty cells are missing values.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fuzzybeta/fuzzy_em.hpp"
#include "fuzzybeta/fuzzy_number.hpp"

namespace fuzzybeta {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;  // 1-based source line of each row

  // Throws UsageError for an unknown column.
  std::size_t column_index(const std::string& name) const;
  bool has_column(const std::string& name) const;
  // Parsed column; missing cells become NaN. Throws ParseError with the line.
  std::vector<double> numeric(const std::string& name) const;
};

CsvTable parse_csv(std::istream& in, char delimiter = ',');
CsvTable read_csv(const std::string& path, char delimiter = ',');  // ParseError if unreadable
void write_csv(std::ostream& out, const CsvTable& table, char delimiter = ',');

bool is_missing(const std::string& cell);
// Throws ParseError(line) unless the whole cell is a finite number.
double parse_number(const std::string& cell, std::size_t line);

// Shortest round-trip decimal representation.
std::string format_full(double v);

struct ModelSpec {
  std::string mode_col = "m";
  std::string spread_col = "s";
  std::vector<std::string> mu_covariates;
  std::vector<std::string> phi_covariates;
  BoundaryPolicy boundary = BoundaryPolicy::clamp;
};

struct LoadedDataset {
  FuzzyDataset data;
  std::vector<std::size_t> kept_rows;  // indices into the table rows
  std::size_t dropped_missing = 0;
  std::size_t clamped_modes = 0;
};

// Complete cases over the referenced columns; intercepts are added to both parts.
LoadedDataset load_fuzzy_dataset(const CsvTable& table, const ModelSpec& spec);

// 64-bit FNV-1a, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);
std::string file_digest(const std::string& path);

}  // namespace fuzzybeta
