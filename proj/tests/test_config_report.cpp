//
// Config parsing (every violation reported, with line numbers and
// suggestions) and deterministic report emission (CSV/JSON value identity,
// stable hashing, byte-identical reruns).

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "qpcocycle/cocycle.hpp"
#include "qpcocycle/config.hpp"
#include "qpcocycle/report.hpp"

using namespace qpc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("qpc_test_" + tag);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("minimal config parses with documented defaults") {
  const ConfigParse res = parse_config("potential = amo\nlambda = 40\n");
  REQUIRE(res.violations.empty());
  REQUIRE(res.config.has_value());
  const CampaignConfig& cfg = *res.config;
  REQUIRE(cfg.potential.has_value());
  CHECK(cfg.potential->degree() == 1);
  CHECK(cfg.lambdas == std::vector<double>{40.0});
  CHECK(cfg.alpha == doctest::Approx(golden_mean()).epsilon(1e-15));
  CHECK(cfg.n == 10000);
  CHECK(cfg.phases == 256);
  CHECK(cfg.format == "csv");
  CHECK(cfg.precision == 12);
  CHECK(cfg.workers == 0);
  CHECK(cfg.out_dir == "out");
  CHECK(cfg.raw_text == "potential = amo\nlambda = 40\n");
}

TEST_CASE("comments, commas, repeated list keys, and explicit alpha") {
  const ConfigParse res = parse_config(
      "# campaign\n"
      "potential = bichromatic\n"
      "alpha = 0.41421356\n"
      "lambda = 40, 80\n"
      "lambda = 160 320\n"
      "mu = 0\n");
  REQUIRE(res.violations.empty());
  const CampaignConfig& cfg = *res.config;
  CHECK(cfg.lambdas == std::vector<double>{40.0, 80.0, 160.0, 320.0});
  CHECK(cfg.alpha == doctest::Approx(0.41421356));
  CHECK(cfg.mus == std::vector<double>{0.0});
}

TEST_CASE("custom potentials come from coeff lines plus h") {
  const ConfigParse res = parse_config(
      "coeff = 1 1 0\n"
      "coeff = -1 1 0\n"
      "h = 0.5\n"
      "lambda = 5\n");
  REQUIRE(res.violations.empty());
  CHECK(res.config->potential->degree() == 1);
  CHECK(res.config->potential->real_analytic());
}

TEST_CASE("rho outside the admissible window has the exact documented message") {
  const ConfigParse res = parse_config("potential = amo\nrho = 0.4\nlambda = 40\n");
  REQUIRE(res.violations.size() == 1);
  CHECK(res.violations[0].message == "rho must satisfy 0 < rho < min(h,1)/2");
  CHECK_FALSE(res.config.has_value());
}

TEST_CASE("unknown keys suggest the nearest known key") {
  const ConfigParse res = parse_config("potential = amo\nlamda = 40\n");
  REQUIRE(res.violations.size() == 1);
  CHECK(res.violations[0].line == 2);
  CHECK(res.violations[0].message.find("unknown key 'lamda' (did you mean 'lambda'?)") !=
        std::string::npos);
}

TEST_CASE("duplicate scalars, bad numbers, and exclusivity are all reported at once") {
  const ConfigParse res = parse_config(
      "potential = amo\n"     // 1
      "n = 10\n"              // 2
      "n = 20\n"              // 3: duplicate
      "t = abc\n"             // 4: not a number
      "energy = 0\n"          // 5
      "mu = 1\n");            // 6: exclusive with energy
  REQUIRE(res.violations.size() == 3);
  CHECK(res.violations[0].line == 3);
  CHECK(res.violations[0].message.find("duplicate key (first set on line 2)") !=
        std::string::npos);
  CHECK(res.violations[1].line == 4);
  // violations arrive sorted by line; cross-key findings (no line) come last
  CHECK(res.violations[2].message.find("mutually exclusive") != std::string::npos);
}

TEST_CASE("range checks on scalar knobs") {
  const ConfigParse res = parse_config(
      "potential = amo\n"
      "n = 1\n"
      "M = 0\n"
      "precision = 40\n"
      "format = yaml\n"
      "t = 0.5\n");
  CHECK(res.violations.size() == 5);
  for (std::size_t i = 0; i + 1 < res.violations.size(); ++i)
    CHECK(res.violations[i].line <= res.violations[i + 1].line);
}

TEST_CASE("preset and explicit coefficients are mutually exclusive") {
  const ConfigParse res = parse_config("potential = amo\ncoeff = 1 1 0\nh = 0.5\n");
  CHECK_FALSE(res.violations.empty());
}

TEST_CASE("stratum needs exactly two ordered endpoints") {
  CHECK_FALSE(parse_config("potential = amo\nstratum = 1\n").violations.empty());
  CHECK_FALSE(parse_config("potential = amo\nstratum = 1 -1\n").violations.empty());
  const ConfigParse ok = parse_config("potential = amo\nstratum = -1 1\n");
  REQUIRE(ok.violations.empty());
  CHECK(ok.config->stratum->first == doctest::Approx(-1.0));
  CHECK(ok.config->stratum->second == doctest::Approx(1.0));
}

TEST_CASE("parse_config_or_throw joins the violations into a contract error") {
  CHECK_THROWS_AS(parse_config_or_throw("lamda = 3\n"), ContractError);
  CHECK_NOTHROW(parse_config_or_throw("potential = amo\n"));
}

TEST_CASE("edit distance used by the suggestions") {
  CHECK(edit_distance("lamda", "lambda") == 1);
  CHECK(edit_distance("", "abc") == 3);
  CHECK(edit_distance("rho", "rho") == 0);
}

TEST_CASE("double formatting is stable across magnitudes and signs") {
  using report::format_double;
  CHECK(format_double(0.0, 12) == "0");
  CHECK(format_double(-0.0, 12) == "0");  // no negative zero in reports
  CHECK(format_double(1.5, 12) == "1.5");
  CHECK(format_double(3.14159265358979, 4) == "3.142");
  CHECK(format_double(std::nan(""), 12) == "nan");
  CHECK(format_double(std::numeric_limits<double>::infinity(), 12) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity(), 12) == "-inf");
  CHECK(format_double(1.0 / 3.0, 3) == "0.333");
}

TEST_CASE("csv cells are quoted only when needed") {
  using report::Cell;
  using report::format_cell;
  CHECK(format_cell(Cell(std::string("plain")), 12) == "plain");
  CHECK(format_cell(Cell(std::string("he\"llo,x")), 12) == "\"he\"\"llo,x\"");
  CHECK(format_cell(Cell(true), 12) == "true");
  CHECK(format_cell(Cell(false), 12) == "false");
  CHECK(format_cell(Cell(static_cast<long long>(-7)), 12) == "-7");
}

TEST_CASE("tables enforce row arity and render as header plus rows") {
  report::Table t;
  t.name = "demo";
  t.columns = {"a", "b"};
  CHECK_THROWS_AS(t.add_row({report::Cell(1.0)}), ContractError);
  t.add_row({report::Cell(1.0), report::Cell(std::string("x"))});
  CHECK(report::to_csv(t, 12) == "a,b\n1,x\n");

  report::Table empty;
  empty.name = "none";
  empty.columns = {"only", "header"};
  CHECK(report::to_csv(empty, 12) == "only,header\n");
}

TEST_CASE("json rows carry the same values as the csv rendering") {
  report::Table t;
  t.name = "demo";
  t.columns = {"v"};
  t.add_row({report::Cell(1.0 / 3.0)});
  const nlohmann::ordered_json j = report::to_json(t, 6);
  CHECK(j["name"] == "demo");
  const double jv = j["rows"][0][0].get<double>();
  CHECK(jv == doctest::Approx(0.333333).epsilon(1e-9));
  // identical to what the csv route prints at the same precision
  CHECK(report::format_double(jv, 6) == report::format_double(1.0 / 3.0, 6));
}

TEST_CASE("fnv1a matches the published 64-bit test vectors") {
  CHECK(report::fnv1a_hex("") == "cbf29ce484222325");
  CHECK(report::fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(report::fnv1a_hex("config") == report::fnv1a_hex("config"));
  CHECK(report::fnv1a_hex("config") != report::fnv1a_hex("confih"));
}

TEST_CASE("report writing is byte-identical across reruns") {
  report::Table t;
  t.name = "cells";
  t.columns = {"x", "label"};
  t.add_row({report::Cell(0.1), report::Cell(std::string("first"))});
  t.add_row({report::Cell(2e-7), report::Cell(std::string("second"))});

  const fs::path d1 = fresh_dir("emit1");
  const fs::path d2 = fresh_dir("emit2");
  const auto paths1 = report::write_reports(d1, "demo", "k = v\n", {t});
  const auto paths2 = report::write_reports(d2, "demo", "k = v\n", {t});
  REQUIRE(paths1.size() == 2);  // table + manifest
  CHECK(paths1.back().filename() == "manifest.json");
  CHECK(slurp(paths1[0]) == slurp(paths2[0]));
  CHECK(slurp(paths1[1]) == slurp(paths2[1]));

  const auto manifest = nlohmann::json::parse(slurp(paths1.back()));
  CHECK(manifest["command"] == "demo");
  CHECK(manifest["config_hash"] == report::fnv1a_hex("k = v\n"));
  CHECK(manifest["outputs"].size() == 1);
  CHECK(manifest.contains("version"));
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("json emission honors the format option") {
  report::Table t;
  t.name = "cells";
  t.columns = {"x"};
  t.add_row({report::Cell(1.25)});
  const fs::path d = fresh_dir("emitjson");
  report::EmitOptions opt;
  opt.format = "json";
  const auto paths = report::write_reports(d, "demo", "", {t}, opt);
  CHECK(paths[0].extension() == ".json");
  const auto j = nlohmann::json::parse(slurp(paths[0]));
  CHECK(j["rows"][0][0].get<double>() == doctest::Approx(1.25));
  fs::remove_all(d);
}
