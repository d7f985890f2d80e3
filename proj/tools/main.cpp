//
// cocycle: CLI front end for the quasi-periodic cocycle library.
//
// Every subcommand reads a flat key = value config, runs its campaign, prints
// one summary line per cell and writes CSV/JSON reports plus a manifest into
// the output directory.  Exit codes: 0 all pass, 1 failure present,
// 2 inconclusive present, 3 usage/config error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qpcocycle/commands.hpp"
#include "qpcocycle/errors.hpp"
#include "qpcocycle/version.hpp"

namespace {

const std::map<std::string, std::string>& command_help() {
  static const std::map<std::string, std::string> help = {
      {"le", "Lyapunov exponents on the axis (or at the configured heights)"},
      {"profile", "complexified Lyapunov profile over a height list, with convexity checks"},
      {"accel", "finite-difference acceleration with integer quantization"},
      {"zeros", "strip zeros of f - mu with the factorization data"},
      {"jensen", "closed-form averaged log-modulus I(y) and its slope counts"},
      {"verify-asymptotics", "large-coupling certificate with the explicit constant"},
      {"verify-stratified", "stratified certificate on a critical-value-free interval"},
      {"verify-constants", "re-derive the splitting envelope constants"},
      {"bounds", "brute-force height-floor and zero-set geometry checks"},
  };
  return help;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasi-periodic Schrodinger cocycle toolkit (library version " +
               std::string(qpc::version()) + ")"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::string format_override;
  int workers = -1;
  int precision = -1;

  for (const std::string& name : qpc::command_names()) {
    CLI::App* sub = app.add_subcommand(name, command_help().at(name));
    sub->add_option("--config", config_path, "campaign config file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out_override, "output directory (overrides config)");
    sub->add_option("--workers", workers, "worker pool size (overrides config and env)");
    sub->add_option("--format", format_override, "report format (overrides config)")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--precision", precision, "significant digits in reports")
        ->check(CLI::Range(3, 17));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read config file " << config_path << "\n";
    return 3;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();

  qpc::ConfigParse parsed = qpc::parse_config(buffer.str());
  if (!parsed.config) {
    std::cerr << "error: invalid config " << config_path << "\n";
    for (const auto& v : parsed.violations) {
      std::cerr << "  " << qpc::to_string(v) << "\n";
    }
    return 3;
  }
  qpc::CampaignConfig cfg = std::move(*parsed.config);
  if (!out_override.empty()) cfg.out_dir = out_override;
  if (!format_override.empty()) cfg.format = format_override;
  if (precision > 0) cfg.precision = precision;
  if (workers >= 0) cfg.workers = workers;

  try {
    const qpc::CommandResult res = qpc::run_and_emit(command, cfg);
    for (const std::string& line : res.summary) {
      std::cout << line << "\n";
    }
    std::cout << command << ": wrote " << res.tables.size() << " table(s) + manifest to "
              << cfg.out_dir << " [exit " << res.exit_code << "]\n";
    return res.exit_code;
  } catch (const qpc::ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const qpc::DegenerateInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const qpc::StripDomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const qpc::PrecisionError& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return 2;
  } catch (const qpc::NumericError& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
