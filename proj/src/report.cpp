#include "qpcocycle/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "qpcocycle/errors.hpp"
#include "qpcocycle/version.hpp"

namespace qpc::report {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw ContractError("Table::add_row: row arity " + std::to_string(row.size()) +
                        " does not match " + std::to_string(columns.size()) + " columns");
  rows.push_back(std::move(row));
}

std::string format_double(double v, int digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  digits = std::clamp(digits, 3, 17);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  if (buf[0] == '-' && std::strtod(buf, nullptr) == 0.0) return buf + 1;  // "-0" -> "0"
  return buf;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string format_cell(const Cell& c, int digits) {
  if (const auto* s = std::get_if<std::string>(&c)) return csv_escape(*s);
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d, digits);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<bool>(c) ? "true" : "false";
}

std::string to_csv(const Table& t, int digits) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(t.columns[i]);
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_cell(row[i], digits);
    }
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json to_json(const Table& t, int digits) {
  nlohmann::ordered_json j;
  j["name"] = t.name;
  j["columns"] = t.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    auto jr = nlohmann::ordered_json::array();
    for (const auto& c : row) {
      if (const auto* s = std::get_if<std::string>(&c)) {
        jr.push_back(*s);
      } else if (const auto* d = std::get_if<double>(&c)) {
        if (std::isnan(*d) || std::isinf(*d)) {
          jr.push_back(format_double(*d, digits));
        } else {
          // Round-trip through the fixed-digit decimal so CSV and JSON agree.
          jr.push_back(std::strtod(format_double(*d, digits).c_str(), nullptr));
        }
      } else if (const auto* i = std::get_if<long long>(&c)) {
        jr.push_back(*i);
      } else {
        jr.push_back(std::get<bool>(c));
      }
    }
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  return j;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw NumericError("write_reports: cannot open " + path.string());
  os << body;
  if (!os) throw NumericError("write_reports: write failed for " + path.string());
}

}  // namespace

std::vector<std::filesystem::path> write_reports(const std::filesystem::path& out_dir,
                                                 const std::string& command,
                                                 const std::string& config_text,
                                                 const std::vector<Table>& tables,
                                                 const EmitOptions& opt) {
  if (opt.format != "csv" && opt.format != "json")
    throw ContractError("write_reports: format must be csv or json, got " + opt.format);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw NumericError("write_reports: cannot create " + out_dir.string());

  std::vector<std::filesystem::path> written;
  nlohmann::ordered_json manifest;
  manifest["schema"] = 1;
  manifest["command"] = command;
  manifest["config_hash"] = fnv1a_hex(config_text);
  manifest["version"] = qpc::version();
  manifest["format"] = opt.format;
  manifest["precision"] = opt.precision;
  auto outputs = nlohmann::ordered_json::array();

  for (const auto& t : tables) {
    const std::filesystem::path path = out_dir / (t.name + "." + opt.format);
    if (opt.format == "csv") {
      write_file(path, to_csv(t, opt.precision));
    } else {
      write_file(path, to_json(t, opt.precision).dump(2) + "\n");
    }
    outputs.push_back(path.filename().string());
    written.push_back(path);
  }
  manifest["outputs"] = std::move(outputs);

  const std::filesystem::path mpath = out_dir / "manifest.json";
  write_file(mpath, manifest.dump(2) + "\n");
  written.push_back(mpath);
  return written;
}

}  // namespace qpc::report
