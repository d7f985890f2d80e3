#pragma once
//
// Tabular result emission: CSV and JSON renderings of the same row data with
// a deterministic field order, floats at a fixed number of significant
// digits, and a manifest tying outputs to the exact config text (FNV-1a hash)
// and library version.  Nothing here depends on wall-clock time or iteration
// order of hash maps, so re-running a command with the same config produces
// byte-identical files.

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace qpc::report {

using Cell = std::variant<std::string, double, long long, bool>;

struct Table {
  std::string name;                   // file stem, e.g. "certificates"
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;  // each row matches columns in length

  void add_row(std::vector<Cell> row);  // throws ContractError on arity mismatch
};

// %.{digits}g with inf/nan spelled out; digits clamped to [3, 17].
std::string format_double(double v, int digits);

// One cell as it appears in CSV (quoted/escaped when the text needs it).
std::string format_cell(const Cell& c, int digits);

// Header line plus one line per row, '\n' separated, trailing newline.
// An empty table renders as just the header line.
std::string to_csv(const Table& t, int digits);

// {"name":..., "columns": [...], "rows": [[...]]}.  Doubles are parsed back
// from their fixed-digit decimal form first, so both formats carry identical
// values.
nlohmann::ordered_json to_json(const Table& t, int digits);

// FNV-1a 64-bit over the raw bytes, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

struct EmitOptions {
  std::string format = "csv";  // "csv" or "json"
  int precision = 12;
};

// Writes one file per table (<stem>.<format>) plus manifest.json naming the
// command, the config hash, the library version and every emitted file.
// Returns the paths written (manifest last).  I/O failures surface as
// NumericError mentioning the path.
std::vector<std::filesystem::path> write_reports(const std::filesystem::path& out_dir,
                                                 const std::string& command,
                                                 const std::string& config_text,
                                                 const std::vector<Table>& tables,
                                                 const EmitOptions& opt = {});

}  // namespace qpc::report
