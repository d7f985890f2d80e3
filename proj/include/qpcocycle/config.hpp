#pragma once
//
// Flat key = value campaign configs for the command-line tool.
//
//     # AMO at four couplings
//     potential = amo
//     alpha = golden
//     rho = 0.2
//     lambda = 40 80 160 320
//     energy = 0
//
// Lines are independent; '#' starts a comment.  List-valued keys (lambda,
// energy, mu, y, delta) accept whitespace- or comma-separated numbers and may
// be repeated (values append); scalar keys may appear once.  A potential is
// either a preset name or a set of `coeff = k re [im]` lines plus `h`.
// Validation reports every violation with its line number, not just the
// first, and unknown keys come with a nearest-known-key suggestion.

#include <optional>
#include <string>
#include <vector>

#include "qpcocycle/potential.hpp"

namespace qpc {

struct CampaignConfig {
  std::optional<FourierPotential> potential;
  double alpha = 0.0;              // defaults to the golden mean
  std::optional<double> rho;
  std::vector<double> lambdas;
  std::vector<double> energies;    // mutually exclusive with mus
  std::vector<double> mus;
  long n = 10000;                  // estimator depth
  int phases = 256;                // estimator phase count M
  double t = 5e-3;                 // finite-difference step
  std::vector<double> heights;     // y list for profile/jensen/accel
  std::vector<double> deltas;      // scale list for the bounds command
  std::optional<std::pair<double, double>> stratum;
  std::string out_dir = "out";
  std::string format = "csv";
  int precision = 12;
  int workers = 0;                 // 0 = auto
  std::string raw_text;            // exact config bytes, for the manifest hash
};

struct ConfigViolation {
  int line = 0;          // 1-based; 0 when not tied to a line
  std::string key;       // offending key when known
  std::string message;
};

std::string to_string(const ConfigViolation& v);

struct ConfigParse {
  std::optional<CampaignConfig> config;  // set iff violations is empty
  std::vector<ConfigViolation> violations;
};

// Never throws on bad input; every problem lands in `violations`.
ConfigParse parse_config(const std::string& text);

// Convenience: parse or throw ContractError with all violations joined.
CampaignConfig parse_config_or_throw(const std::string& text);

// Edit distance used for the unknown-key suggestions.
int edit_distance(const std::string& a, const std::string& b);

}  // namespace qpc
