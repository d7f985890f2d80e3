#include "qpcocycle/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>

#include "qpcocycle/cocycle.hpp"
#include "qpcocycle/errors.hpp"

namespace qpc {

namespace {

constexpr std::array<std::string_view, 18> kKnownKeys = {
    "potential", "coeff", "h",       "alpha",  "rho",    "lambda",
    "energy",    "mu",    "n",       "M",      "t",      "y",
    "delta",     "stratum", "out_dir", "format", "precision", "workers"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> tokenize(const std::string& value) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : value) {
    if (c == ' ' || c == '\t' || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool parse_number(const std::string& tok, double& out) {
  if (tok.empty()) return false;
  char* end = nullptr;
  out = std::strtod(tok.c_str(), &end);
  return end == tok.c_str() + tok.size() && std::isfinite(out);
}

struct Builder {
  std::vector<ConfigViolation> violations;
  std::map<std::string, int> first_line;  // scalar keys already seen

  void violation(int line, const std::string& key, const std::string& message) {
    violations.push_back({line, key, message});
  }

  bool claim_scalar(int line, const std::string& key) {
    const auto [it, fresh] = first_line.emplace(key, line);
    if (!fresh) {
      violation(line, key, "duplicate key (first set on line " + std::to_string(it->second) + ")");
      return false;
    }
    return true;
  }
};

}  // namespace

int edit_distance(const std::string& a, const std::string& b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string to_string(const ConfigViolation& v) {
  std::string out;
  if (v.line > 0) out += "line " + std::to_string(v.line) + ": ";
  if (!v.key.empty()) out += v.key + ": ";
  out += v.message;
  return out;
}

ConfigParse parse_config(const std::string& text) {
  Builder b;
  CampaignConfig cfg;
  cfg.raw_text = text;
  cfg.alpha = golden_mean();

  std::optional<std::string> preset;
  std::vector<std::tuple<int, double, double>> coeffs;
  std::optional<double> h;
  std::vector<double> stratum_vals;
  int potential_line = 0, h_line = 0, rho_line = 0, stratum_line = 0;

  std::istringstream stream(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      b.violation(line_no, "", "expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      b.violation(line_no, "", "expected key = value");
      continue;
    }

    const auto list_key = [&](std::vector<double>& dest) {
      const auto toks = tokenize(value);
      if (toks.empty()) {
        b.violation(line_no, key, "needs at least one number");
        return;
      }
      for (const auto& tok : toks) {
        double v = 0.0;
        if (parse_number(tok, v)) {
          dest.push_back(v);
        } else {
          b.violation(line_no, key, "cannot parse '" + tok + "' as a number");
        }
      }
    };
    const auto scalar_number = [&](double& dest, int* where = nullptr) {
      if (!b.claim_scalar(line_no, key)) return false;
      if (where) *where = line_no;
      double v = 0.0;
      if (!parse_number(value, v)) {
        b.violation(line_no, key, "cannot parse '" + value + "' as a number");
        return false;
      }
      dest = v;
      return true;
    };

    if (key == "potential") {
      if (b.claim_scalar(line_no, key)) {
        preset = value;
        potential_line = line_no;
      }
    } else if (key == "coeff") {
      const auto toks = tokenize(value);
      double k = 0.0, re = 0.0, im = 0.0;
      const bool ok = (toks.size() == 2 || toks.size() == 3) && parse_number(toks[0], k) &&
                      parse_number(toks[1], re) &&
                      (toks.size() == 2 || parse_number(toks[2], im)) &&
                      k == std::floor(k) && std::abs(k) <= 1e6;
      if (!ok) {
        b.violation(line_no, key, "needs 'k re [im]' with integer k, got '" + value + "'");
      } else {
        coeffs.emplace_back(static_cast<int>(k), re, im);
      }
    } else if (key == "h") {
      double v = 0.0;
      if (scalar_number(v, &h_line)) h = v;
    } else if (key == "alpha") {
      if (b.claim_scalar(line_no, key)) {
        if (value == "golden") {
          cfg.alpha = golden_mean();
        } else if (double v = 0.0; parse_number(value, v)) {
          cfg.alpha = v;
        } else {
          b.violation(line_no, key, "cannot parse '" + value + "' as a number (or 'golden')");
        }
      }
    } else if (key == "rho") {
      double v = 0.0;
      if (scalar_number(v, &rho_line)) cfg.rho = v;
    } else if (key == "lambda") {
      list_key(cfg.lambdas);
    } else if (key == "energy") {
      list_key(cfg.energies);
    } else if (key == "mu") {
      list_key(cfg.mus);
    } else if (key == "n") {
      double v = 0.0;
      if (scalar_number(v)) {
        if (v == std::floor(v) && v >= 2 && v <= 1e9) {
          cfg.n = static_cast<long>(v);
        } else {
          b.violation(line_no, key, "must be an integer in [2, 1e9]");
        }
      }
    } else if (key == "M") {
      double v = 0.0;
      if (scalar_number(v)) {
        if (v == std::floor(v) && v >= 1 && v <= 1e7) {
          cfg.phases = static_cast<int>(v);
        } else {
          b.violation(line_no, key, "must be an integer in [1, 1e7]");
        }
      }
    } else if (key == "t") {
      double v = 0.0;
      if (scalar_number(v)) {
        if (v > 0.0 && v <= 1e-2) {
          cfg.t = v;
        } else {
          b.violation(line_no, key, "must satisfy 0 < t <= 0.01");
        }
      }
    } else if (key == "y") {
      list_key(cfg.heights);
    } else if (key == "delta") {
      list_key(cfg.deltas);
    } else if (key == "stratum") {
      if (b.claim_scalar(line_no, key)) {
        stratum_line = line_no;
        list_key(stratum_vals);
      }
    } else if (key == "out_dir") {
      if (b.claim_scalar(line_no, key)) {
        if (value.empty()) {
          b.violation(line_no, key, "needs a path");
        } else {
          cfg.out_dir = value;
        }
      }
    } else if (key == "format") {
      if (b.claim_scalar(line_no, key)) {
        if (value == "csv" || value == "json") {
          cfg.format = value;
        } else {
          b.violation(line_no, key, "must be csv or json, got '" + value + "'");
        }
      }
    } else if (key == "precision") {
      double v = 0.0;
      if (scalar_number(v)) {
        if (v == std::floor(v) && v >= 3 && v <= 17) {
          cfg.precision = static_cast<int>(v);
        } else {
          b.violation(line_no, key, "must be an integer in [3, 17]");
        }
      }
    } else if (key == "workers") {
      double v = 0.0;
      if (scalar_number(v)) {
        if (v == std::floor(v) && v >= 0 && v <= 4096) {
          cfg.workers = static_cast<int>(v);
        } else {
          b.violation(line_no, key, "must be an integer in [0, 4096]");
        }
      }
    } else {
      std::string message = "unknown key '" + key + "'";
      int best = 3;
      std::string_view suggestion;
      for (const auto known : kKnownKeys) {
        const int d = edit_distance(key, std::string(known));
        if (d < best) {
          best = d;
          suggestion = known;
        }
      }
      if (!suggestion.empty()) {
        message += " (did you mean '" + std::string(suggestion) + "'?)";
      }
      b.violation(line_no, key, message);
    }
  }

  // Cross-key validation.
  if (preset && (!coeffs.empty() || h)) {
    b.violation(potential_line, "potential", "preset and coeff/h lines are mutually exclusive");
  } else if (preset) {
    try {
      cfg.potential = FourierPotential::preset(*preset);
    } catch (const std::exception& e) {
      b.violation(potential_line, "potential", e.what());
    }
  } else if (!coeffs.empty()) {
    if (!h) {
      b.violation(0, "h", "coeff lines require h");
    } else if (!(*h > 0.0) || !(*h < 1.0)) {
      b.violation(h_line, "h", "must lie in (0, 1)");
    } else {
      try {
        cfg.potential = FourierPotential::from_triples(coeffs, *h);
      } catch (const std::exception& e) {
        b.violation(0, "coeff", e.what());
      }
    }
  } else {
    b.violation(0, "potential", "config must define a potential (preset or coeff lines)");
  }

  if (cfg.rho && cfg.potential) {
    const double bound = 0.5 * std::min(cfg.potential->strip_height(), 1.0);
    if (!(*cfg.rho > 0.0) || !(*cfg.rho < bound)) {
      b.violation(rho_line, "rho", "rho must satisfy 0 < rho < min(h,1)/2");
    }
  }
  if (!cfg.energies.empty() && !cfg.mus.empty()) {
    b.violation(0, "energy", "energy and mu are mutually exclusive");
  }
  if (!stratum_vals.empty()) {
    if (stratum_vals.size() != 2) {
      b.violation(stratum_line, "stratum", "needs exactly two numbers: mu1 mu2");
    } else if (!(stratum_vals[0] <= stratum_vals[1])) {
      b.violation(stratum_line, "stratum", "needs mu1 <= mu2");
    } else {
      cfg.stratum = std::make_pair(stratum_vals[0], stratum_vals[1]);
    }
  }

  ConfigParse out;
  out.violations = std::move(b.violations);
  std::stable_sort(out.violations.begin(), out.violations.end(),
                   [](const ConfigViolation& l, const ConfigViolation& r) {
                     // semantic (line 0) entries after everything line-tied
                     const int ll = l.line == 0 ? std::numeric_limits<int>::max() : l.line;
                     const int rl = r.line == 0 ? std::numeric_limits<int>::max() : r.line;
                     return ll < rl;
                   });
  if (out.violations.empty()) out.config = std::move(cfg);
  return out;
}

CampaignConfig parse_config_or_throw(const std::string& text) {
  ConfigParse parsed = parse_config(text);
  if (parsed.config) return std::move(*parsed.config);
  std::string joined = "invalid config:";
  for (const auto& v : parsed.violations) joined += "\n  " + to_string(v);
  throw ContractError(joined);
}

}  // namespace qpc
