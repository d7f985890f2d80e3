#include "qpcocycle/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qpcocycle/asymptotics.hpp"
#include "qpcocycle/constants.hpp"
#include "qpcocycle/cocycle.hpp"
#include "qpcocycle/errors.hpp"
#include "qpcocycle/jensen.hpp"
#include "qpcocycle/parallel.hpp"
#include "qpcocycle/zero_analysis.hpp"

namespace qpc {

namespace {

std::string fmt(double v) { return report::format_double(v, 6); }

struct EnergyCell {
  double lambda = 0.0;
  double energy = 0.0;
  double mu = 0.0;
};

std::vector<EnergyCell> energy_cells(const CampaignConfig& cfg, const std::string& cmd) {
  if (cfg.lambdas.empty()) throw ContractError(cmd + ": requires lambda");
  std::vector<EnergyCell> out;
  for (const double lambda : cfg.lambdas) {
    if (!cfg.energies.empty()) {
      for (const double e : cfg.energies) out.push_back({lambda, e, lambda != 0.0 ? e / lambda : 0.0});
    } else if (!cfg.mus.empty()) {
      for (const double mu : cfg.mus) out.push_back({lambda, mu * lambda, mu});
    } else {
      throw ContractError(cmd + ": requires energy or mu");
    }
  }
  return out;
}

std::vector<double> mu_values(const CampaignConfig& cfg, const std::string& cmd) {
  if (!cfg.mus.empty()) return cfg.mus;
  if (!cfg.energies.empty() && cfg.lambdas.size() == 1 && cfg.lambdas[0] != 0.0) {
    std::vector<double> out;
    for (const double e : cfg.energies) out.push_back(e / cfg.lambdas[0]);
    return out;
  }
  throw ContractError(cmd + ": requires mu (or energy with a single nonzero lambda)");
}

// fail dominates inconclusive; 0 only when nothing objected.
void absorb(int& code, CheckStatus s) {
  if (s == CheckStatus::fail) {
    code = 1;
  } else if (s == CheckStatus::inconclusive && code == 0) {
    code = 2;
  }
}

void absorb_flag(int& code, bool ok) {
  if (!ok) code = 1;
}

// ---------------------------------------------------------------------------

void cmd_le(const FourierPotential& p, const CampaignConfig& cfg, CommandResult& res) {
  const std::vector<double> heights = cfg.heights.empty() ? std::vector<double>{0.0} : cfg.heights;
  report::Table t;
  t.name = "lyapunov";
  t.columns = {"alpha", "lambda", "E", "y", "n", "M", "L", "spread"};
  for (const EnergyCell& cell : energy_cells(cfg, "le")) {
    for (const double y : heights) {
      const CocycleSpec spec(cfg.alpha, cell.lambda, cell.energy, p, y);
      const LyapunovEstimate est = lyapunov_exponent(spec, cfg.n, cfg.phases);
      t.add_row({cfg.alpha, cell.lambda, cell.energy, y, static_cast<long long>(cfg.n),
                 static_cast<long long>(cfg.phases), est.value, est.spread});
      res.summary.push_back("le lambda=" + fmt(cell.lambda) + " E=" + fmt(cell.energy) +
                            " y=" + fmt(y) + " L=" + fmt(est.value) +
                            " spread=" + fmt(est.spread));
    }
  }
  res.tables.push_back(std::move(t));
}

void cmd_profile(const FourierPotential& p, const CampaignConfig& cfg, CommandResult& res) {
  if (cfg.heights.empty()) throw ContractError("profile: requires y (a list of heights)");
  report::Table rows;
  rows.name = "profile";
  rows.columns = {"alpha", "lambda", "E", "y", "n", "M", "L", "spread"};
  report::Table checks;
  checks.name = "profile_checks";
  checks.columns = {"lambda", "E", "convexity_defect", "convex_ok", "evenness_checked",
                    "evenness_defect", "even_ok"};
  for (const EnergyCell& cell : energy_cells(cfg, "profile")) {
    const CocycleSpec spec(cfg.alpha, cell.lambda, cell.energy, p, 0.0);
    const CocycleProfile prof = complexified_profile(spec, cfg.heights, cfg.n, cfg.phases);
    for (const ProfileEntry& e : prof.entries) {
      rows.add_row({cfg.alpha, cell.lambda, cell.energy, e.y, static_cast<long long>(cfg.n),
                    static_cast<long long>(cfg.phases), e.le.value, e.le.spread});
    }
    const bool even_ok = !prof.evenness_checked || prof.evenness_defect <= 1e-4;
    checks.add_row({cell.lambda, cell.energy, prof.convexity_defect, prof.convex_ok,
                    prof.evenness_checked, prof.evenness_defect, even_ok});
    absorb_flag(res.exit_code, prof.convex_ok && even_ok);
    res.summary.push_back("profile lambda=" + fmt(cell.lambda) + " E=" + fmt(cell.energy) +
                          " points=" + std::to_string(prof.entries.size()) +
                          " convex_ok=" + (prof.convex_ok ? "true" : "false") +
                          " even_ok=" + (even_ok ? "true" : "false"));
  }
  res.tables.push_back(std::move(rows));
  res.tables.push_back(std::move(checks));
}

void cmd_accel(const FourierPotential& p, const CampaignConfig& cfg, CommandResult& res) {
  const std::vector<double> heights = cfg.heights.empty() ? std::vector<double>{0.0} : cfg.heights;
  report::Table t;
  t.name = "acceleration";
  t.columns = {"alpha", "lambda", "E", "y", "t", "n", "M", "raw", "quantized", "residual",
               "suspicious"};
  for (const EnergyCell& cell : energy_cells(cfg, "accel")) {
    for (const double y : heights) {
      const CocycleSpec spec(cfg.alpha, cell.lambda, cell.energy, p, 0.0);
      bool suspicious = true;
      double raw = std::numeric_limits<double>::quiet_NaN(), residual = raw;
      long long quantized = 0;
      try {
        const AccelerationEstimate est = acceleration(spec, y, cfg.t, cfg.n, cfg.phases);
        raw = est.raw;
        residual = est.residual;
        quantized = est.quantized;
        suspicious = est.suspicious;
      } catch (const PrecisionError&) {
        // row stays marked suspicious with nan diagnostics
      }
      t.add_row({cfg.alpha, cell.lambda, cell.energy, y, cfg.t, static_cast<long long>(cfg.n),
                 static_cast<long long>(cfg.phases), raw, quantized, residual, suspicious});
      if (suspicious && res.exit_code == 0) res.exit_code = 2;
      res.summary.push_back("accel lambda=" + fmt(cell.lambda) + " E=" + fmt(cell.energy) +
                            " y=" + fmt(y) + " omega=" + std::to_string(quantized) +
                            " residual=" + fmt(residual));
    }
  }
  res.tables.push_back(std::move(t));
}

void cmd_zeros(const FourierPotential& p, const CampaignConfig& cfg, CommandResult& res) {
  report::Table zt;
  zt.name = "zeros";
  zt.columns = {"mu", "re", "im", "multiplicity"};
  report::Table ft;
  ft.name = "zero_factorization";
  ft.columns = {"mu", "leading_re", "leading_im", "power_offset", "total_multiplicity",
                "n_axis", "n_strip", "max_residual"};
  for (const double mu : mu_values(cfg, "zeros")) {
    const ZeroSet zs = laurent_roots(p, Complex(mu, 0.0));
    for (const Zero& z : zs.zeros()) {
      zt.add_row({mu, z.z.real(), z.z.imag(), static_cast<long long>(z.multiplicity)});
    }
    const int n_axis = count_zeros_closed(zs, -1e-8, 1e-8);
    const double strip = cfg.rho ? 2.0 * *cfg.rho : p.strip_height();
    const int n_strip = count_zeros_closed(zs, -strip, strip);
    ft.add_row({mu, zs.leading_coeff().real(), zs.leading_coeff().imag(),
                static_cast<long long>(zs.power_offset()),
                static_cast<long long>(zs.total_multiplicity()), static_cast<long long>(n_axis),
                static_cast<long long>(n_strip), zs.max_residual()});
    res.summary.push_back("zeros mu=" + fmt(mu) + " total=" +
                          std::to_string(zs.total_multiplicity()) + " on_axis=" +
                          std::to_string(n_axis) + " in_strip=" + std::to_string(n_strip));
  }
  res.tables.push_back(std::move(zt));
  res.tables.push_back(std::move(ft));
}

void cmd_jensen(const FourierPotential& p, const CampaignConfig& cfg, CommandResult& res) {
  const std::vector<double> heights = cfg.heights.empty() ? std::vector<double>{0.0} : cfg.heights;
  report::Table t;
  t.name = "jensen";
  t.columns = {"mu", "y", "I", "two_omega", "method"};
  for (const double mu : mu_values(cfg, "jensen")) {
    const JensenProfile prof = jensen_profile(p, mu, heights);
    for (const ProfilePoint& pt : prof.points) {
      t.add_row({mu, pt.y, pt.value, static_cast<long long>(pt.two_omega), pt.method});
    }
    res.summary.push_back("jensen mu=" + fmt(mu) + " I(" + fmt(heights.front()) + ")=" +
                          fmt(prof.points.front().value) + " points=" +
                          std::to_string(prof.points.size()));
  }
  res.tables.push_back(std::move(t));
}

void cmd_verify_asymptotics(const FourierPotential& p, const CampaignConfig& cfg,
                            CommandResult& res) {
  if (!cfg.rho) throw ContractError("verify-asymptotics: requires rho");
  const EnvelopeConstants constants = envelope_constants(p, *cfg.rho);

  report::Table ct;
  ct.name = "constants";
  ct.columns = {"rho", "N", "lambda0", "K1", "beta_hat", "C"};
  ct.add_row({constants.rho, static_cast<long long>(constants.n), constants.lambda0, constants.k1,
              constants.beta_hat, constants.big_c});

  report::Table cert;
  cert.name = "certificates";
  cert.columns = {"lambda", "E", "predicted", "measured", "residual", "bound", "status"};
  report::Table pipe;
  pipe.name = "pipeline";
  pipe.columns = {"lambda", "E", "delta", "y_star", "min_modulus", "floor_ok", "dominated",
                  "le_d", "factorization_gap", "factorization_ok", "two_omega", "omega_match",
                  "extrapolation_ok", "all_ok"};

  CertificateOptions opt;
  opt.n = cfg.n;
  opt.phases = cfg.phases;
  for (const EnergyCell& cell : energy_cells(cfg, "verify-asymptotics")) {
    const AsymptoticsCertificate c =
        verify_asymptotics(p, cfg.alpha, cell.lambda, cell.energy, constants, opt);
    cert.add_row({c.lambda, c.energy, c.predicted, c.measured, c.residual, c.bound,
                  std::string(to_string(c.status))});
    const PipelineChecks& pl = c.pipeline;
    pipe.add_row({c.lambda, c.energy, pl.delta_effective, pl.height.y_star,
                  pl.height.min_modulus, pl.floor_ok, pl.splitting.dominated, pl.d_value,
                  pl.factorization_gap, pl.factorization_ok,
                  static_cast<long long>(pl.two_omega_height), pl.omega_match,
                  pl.extrapolation_ok, pl.all_ok});
    absorb(res.exit_code, c.status);
    absorb_flag(res.exit_code, pl.all_ok);
    res.summary.push_back("verify-asymptotics lambda=" + fmt(c.lambda) + " E=" + fmt(c.energy) +
                          " residual=" + fmt(c.residual) + " bound=" + fmt(c.bound) +
                          " status=" + std::string(to_string(c.status)) +
                          " pipeline=" + (pl.all_ok ? "ok" : "failed"));
  }
  res.tables.push_back(std::move(ct));
  res.tables.push_back(std::move(cert));
  res.tables.push_back(std::move(pipe));
}

void cmd_verify_stratified(const FourierPotential& p, const CampaignConfig& cfg,
                           CommandResult& res) {
  if (!cfg.stratum) throw ContractError("verify-stratified: requires stratum");
  if (cfg.lambdas.empty()) throw ContractError("verify-stratified: requires lambda");
  const auto [mu1, mu2] = *cfg.stratum;
  std::vector<double> mus = cfg.mus;
  if (mus.empty()) mus = {mu1, 0.5 * (mu1 + mu2), mu2};

  report::Table st;
  st.name = "stratum";
  st.columns = {"mu1", "mu2", "N0", "count_constant", "tau0", "M0", "beta0", "zeta0", "gamma0",
                "R0", "beta_hat", "lambda_tilde", "floor_ok"};
  report::Table bt;
  bt.name = "stratified_bands";
  bt.columns = {"lambda", "delta", "band_lo", "band_hi", "band_nonempty",
                "lambda_above_threshold"};
  report::Table cells;
  cells.name = "stratified";
  cells.columns = {"lambda", "mu", "E", "predicted", "measured", "residual", "bound", "status",
                   "two_omega", "omega_ok"};

  StratifiedOptions opt;
  opt.n = cfg.n;
  opt.phases = cfg.phases;
  opt.allow_below_threshold = true;  // the report states the hypothesis honestly
  bool first = true;
  for (const double lambda : cfg.lambdas) {
    const StratifiedReport rep = verify_stratified(p, cfg.alpha, lambda, mu1, mu2, mus, opt);
    if (first) {
      const StratumQuantities& q = rep.stratum;
      st.add_row({q.mu1, q.mu2, static_cast<long long>(q.n0), q.count_constant, q.tau0, q.m0,
                  q.beta0, q.zeta0, q.gamma0, q.r0, q.beta_hat, q.lambda_tilde, q.floor_ok});
      first = false;
    }
    bt.add_row({rep.lambda, rep.delta, rep.band_lo, rep.band_hi, rep.band_nonempty,
                rep.lambda_above_threshold});
    for (const StratifiedCell& cell : rep.cells) {
      cells.add_row({rep.lambda, cell.mu, cell.energy, cell.predicted, cell.measured,
                     cell.residual, cell.bound, std::string(to_string(cell.status)),
                     static_cast<long long>(cell.measured_two_omega), cell.omega_ok});
      absorb(res.exit_code, cell.status);
      absorb_flag(res.exit_code, cell.omega_ok);
      res.summary.push_back("verify-stratified lambda=" + fmt(rep.lambda) + " mu=" +
                            fmt(cell.mu) + " residual=" + fmt(cell.residual) + " bound=" +
                            fmt(cell.bound) + " status=" + std::string(to_string(cell.status)));
    }
    absorb_flag(res.exit_code, rep.band_nonempty && rep.stratum.count_constant &&
                                   rep.stratum.floor_ok && rep.lambda_above_threshold);
    res.summary.push_back(
        "verify-stratified lambda=" + fmt(rep.lambda) + " band=[" + fmt(rep.band_lo) + ", " +
        fmt(rep.band_hi) + "] above_threshold=" + (rep.lambda_above_threshold ? "true" : "false") +
        " (lambda_tilde=" + fmt(rep.stratum.lambda_tilde) + ")");
  }
  res.tables.push_back(std::move(st));
  res.tables.push_back(std::move(bt));
  res.tables.push_back(std::move(cells));
}

void cmd_verify_constants(const FourierPotential&, const CampaignConfig&, CommandResult& res) {
  const ConstantRederivation red = rederive_envelope_constants();
  report::Table t;
  t.name = "constants_check";
  t.columns = {"K1", "case1_c", "case1_argmax", "d_minus", "d_plus", "K2", "K3",
               "envelope_verified", "worst_margin", "matches_closed_forms"};
  t.add_row({constants::k1(), red.case1_c, red.case1_argmax, red.case2_d_minus, red.case2_d_plus,
             red.k2, red.k3, red.envelope_verified, red.worst_margin, red.matches_closed_forms});
  absorb_flag(res.exit_code, red.envelope_verified && red.matches_closed_forms);
  res.summary.push_back("verify-constants K2=" + fmt(red.k2) + " K3=" + fmt(red.k3) +
                        " envelope=" + (red.envelope_verified ? "ok" : "violated") +
                        " closed_forms=" + (red.matches_closed_forms ? "match" : "mismatch"));
  res.tables.push_back(std::move(t));
}

void cmd_bounds(const FourierPotential& p, const CampaignConfig& cfg, CommandResult& res) {
  if (!cfg.rho) throw ContractError("bounds: requires rho");
  const std::vector<double> deltas =
      cfg.deltas.empty() ? std::vector<double>{*cfg.rho / 4.0, *cfg.rho / 2.0} : cfg.deltas;

  report::Table hf;
  hf.name = "height_floor";
  hf.columns = {"rho", "delta", "bound", "worst_margin", "worst_mu", "mu_grid", "verified"};
  for (const double delta : deltas) {
    const HeightFloorCheck chk = height_floor_check(p, *cfg.rho, delta);
    hf.add_row({*cfg.rho, delta, chk.bound, chk.worst_margin, chk.worst_mu,
                static_cast<long long>(chk.mu_grid), chk.verified});
    absorb_flag(res.exit_code, chk.verified || chk.degenerate);
    res.summary.push_back("bounds height-floor delta=" + fmt(delta) + " bound=" + fmt(chk.bound) +
                          " worst_margin=" + fmt(chk.worst_margin) + " verified=" +
                          (chk.verified ? "true" : "false"));
  }

  const ZeroSetGeometry geo = zero_set_geometry(p);
  report::Table gt;
  gt.name = "geometry";
  gt.columns = {"applicable", "N", "tau", "sup_norm", "zeta", "beta", "gamma", "R", "eta_ok"};
  gt.add_row({geo.applicable, static_cast<long long>(geo.n_real), geo.tau, geo.sup_norm, geo.zeta,
              geo.beta, geo.gamma, geo.radius, geo.eta_ok});
  report::Table et;
  et.name = "geometry_eta";
  et.columns = {"delta", "eta", "grid_min", "ok"};
  for (const EtaCheck& chk : geo.eta_checks) {
    et.add_row({chk.delta, chk.eta, chk.grid_min, chk.ok});
  }
  if (geo.applicable) {
    absorb_flag(res.exit_code, geo.eta_ok);
    res.summary.push_back("bounds geometry N=" + std::to_string(geo.n_real) + " R=" +
                          fmt(geo.radius) + " eta_ok=" + (geo.eta_ok ? "true" : "false"));
  } else {
    res.summary.push_back("bounds geometry: no real zeros, radius checks skipped");
  }
  res.tables.push_back(std::move(hf));
  res.tables.push_back(std::move(gt));
  res.tables.push_back(std::move(et));
}

}  // namespace

CommandResult run_command(const std::string& name, const CampaignConfig& cfg) {
  if (!cfg.potential) throw ContractError("run_command: config carries no potential");
  if (cfg.workers > 0) parallel::set_worker_count(cfg.workers);
  const FourierPotential& p = *cfg.potential;
  CommandResult res;
  if (name == "le") {
    cmd_le(p, cfg, res);
  } else if (name == "profile") {
    cmd_profile(p, cfg, res);
  } else if (name == "accel") {
    cmd_accel(p, cfg, res);
  } else if (name == "zeros") {
    cmd_zeros(p, cfg, res);
  } else if (name == "jensen") {
    cmd_jensen(p, cfg, res);
  } else if (name == "verify-asymptotics") {
    cmd_verify_asymptotics(p, cfg, res);
  } else if (name == "verify-stratified") {
    cmd_verify_stratified(p, cfg, res);
  } else if (name == "verify-constants") {
    cmd_verify_constants(p, cfg, res);
  } else if (name == "bounds") {
    cmd_bounds(p, cfg, res);
  } else {
    throw ContractError("run_command: unknown command '" + name + "'");
  }
  return res;
}

CommandResult run_and_emit(const std::string& name, const CampaignConfig& cfg) {
  CommandResult res = run_command(name, cfg);
  report::EmitOptions opt;
  opt.format = cfg.format;
  opt.precision = cfg.precision;
  report::write_reports(cfg.out_dir, name, cfg.raw_text, res.tables, opt);
  return res;
}

}  // namespace qpc
