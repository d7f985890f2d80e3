#include "qpcocycle/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "qpcocycle/constants.hpp"
#include "qpcocycle/errors.hpp"
#include "qpcocycle/parallel.hpp"

namespace qpc {

namespace {

constexpr double kPi = 3.14159265358979323846;

double ternary_min(const std::function<double(double)>& fn, double lo, double hi, int iters = 48) {
  for (int i = 0; i < iters; ++i) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (fn(m1) < fn(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return fn(0.5 * (lo + hi));
}

// min over the torus of a scalar function, dense grid plus refinement of
// every local minimum near the global one.
double torus_min(const std::function<double(double)>& fn, int grid = 1024) {
  std::vector<double> vals(static_cast<std::size_t>(grid));
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    vals[static_cast<std::size_t>(i)] = fn(static_cast<double>(i) / grid);
    best = std::min(best, vals[static_cast<std::size_t>(i)]);
  }
  for (int i = 0; i < grid; ++i) {
    const double v = vals[static_cast<std::size_t>(i)];
    const double prev = vals[static_cast<std::size_t>((i + grid - 1) % grid)];
    const double next = vals[static_cast<std::size_t>((i + 1) % grid)];
    if (v <= prev && v <= next && v <= 1.25 * best + 1e-300) {
      best = std::min(best, ternary_min(fn, (i - 1.0) / grid, (i + 1.0) / grid));
    }
  }
  return best;
}

Complex ipow(Complex w, int q) {
  if (q == 0) return Complex(1.0, 0.0);
  Complex base = q > 0 ? w : 1.0 / w;
  int e = q > 0 ? q : -q;
  Complex out(1.0, 0.0);
  while (e > 0) {
    if (e & 1) out *= base;
    base *= base;
    e >>= 1;
  }
  return out;
}

// (e^u - 1) / u, stable at u = 0.
Complex expm1_over(Complex u) {
  if (std::abs(u) < 1e-3) {
    return 1.0 + u * (0.5 + u * (1.0 / 6.0 + u * (1.0 / 24.0 + u / 120.0)));
  }
  return (std::exp(u) - 1.0) / u;
}

// Monomial factorization of f - mu on a fundamental domain:
//     f(z) - mu = g(z) * prod_j (z - x_j)^{n_j},
// x_j the real zeros.  The domain origin is placed in the middle of the
// largest gap between real zeros so that their period images stay outside,
// keeping g zero-free off the nonreal zero heights.
struct MonomialSplit {
  std::vector<double> xs;        // distinct real zeros in [origin, origin + 1)
  std::vector<int> orders;
  std::vector<std::size_t> idx;  // positions of the real zeros in zs.zeros()
  int n_real = 0;
  double origin = 0.0;
  ZeroSet zs;

  Complex g(Complex z) const {
    const double shift = std::floor(z.real() - origin);
    const Complex zf = z - shift;
    const Complex w = std::exp(Complex(0.0, 2.0 * kPi) * zf);
    Complex out = zs.leading_coeff() * ipow(w, zs.power_offset());
    std::size_t real_cursor = 0;
    const auto& zeros = zs.zeros();
    for (std::size_t j = 0; j < zeros.size(); ++j) {
      const bool is_real = real_cursor < idx.size() && idx[real_cursor] == j;
      Complex factor;
      if (is_real) {
        const double xj = xs[real_cursor];
        const Complex wj = std::exp(Complex(0.0, 2.0 * kPi * xj));
        const Complex u = Complex(0.0, 2.0 * kPi) * (zf - xj);
        factor = wj * Complex(0.0, 2.0 * kPi) * expm1_over(u);
        ++real_cursor;
      } else {
        factor = w - std::exp(Complex(0.0, 2.0 * kPi) * zeros[j].z);
      }
      out *= ipow(factor, zeros[j].multiplicity);
    }
    return out;
  }
};

constexpr double kRealZeroTol = 1e-8;

MonomialSplit monomial_split(const FourierPotential& p, double mu) {
  MonomialSplit out{{}, {}, {}, 0, 0.0, laurent_roots(p, Complex(mu, 0.0))};
  std::vector<double> raw;
  const auto& zeros = out.zs.zeros();
  for (std::size_t j = 0; j < zeros.size(); ++j) {
    if (std::abs(zeros[j].z.imag()) <= kRealZeroTol) {
      raw.push_back(zeros[j].z.real());
      out.idx.push_back(j);
      out.orders.push_back(zeros[j].multiplicity);
      out.n_real += zeros[j].multiplicity;
    }
  }
  if (raw.empty()) return out;

  // Origin at the midpoint of the largest cyclic gap between real zeros.
  std::vector<double> sorted = raw;
  std::sort(sorted.begin(), sorted.end());
  double gap = sorted.front() + 1.0 - sorted.back();
  double origin = sorted.back() + 0.5 * gap;
  for (std::size_t j = 0; j + 1 < sorted.size(); ++j) {
    const double g = sorted[j + 1] - sorted[j];
    if (g > gap) {
      gap = g;
      origin = sorted[j] + 0.5 * g;
    }
  }
  out.origin = origin - std::floor(origin);
  for (double& x : raw) {
    x -= std::floor(x - out.origin);
  }
  out.xs = raw;
  return out;
}

double theta(double c, double x) { return x / (c + x); }

// min over the closed strip |Im z| <= height of |split.g|.
double strip_min_g(const MonomialSplit& split, double height, int phase_grid = 2048,
                   int height_grid = 33) {
  double best = std::numeric_limits<double>::infinity();
  for (int iy = 0; iy < height_grid; ++iy) {
    const double y =
        height_grid == 1 ? 0.0 : -height + 2.0 * height * iy / (height_grid - 1.0);
    for (int ix = 0; ix < phase_grid; ++ix) {
      const double x = split.origin + static_cast<double>(ix) / phase_grid;
      best = std::min(best, std::abs(split.g(Complex(x, y))));
    }
  }
  return best;
}

double band_min_abs_f(const FourierPotential& p, double mu, double delta, int phase_grid,
                      int height_grid) {
  double best = std::numeric_limits<double>::infinity();
  for (int iy = 0; iy < height_grid; ++iy) {
    const double y = height_grid == 1
                         ? delta
                         : 0.5 * delta + 0.5 * delta * iy / (height_grid - 1.0);
    for (int ix = 0; ix < phase_grid; ++ix) {
      const double x = static_cast<double>(ix) / phase_grid;
      best = std::min(best, std::abs(p.eval(Complex(x, y)) - mu));
    }
  }
  return best;
}

// estimator ladder for the finite-difference slope at a height; retries with
// doubled depth when the precision gate trips.
struct SlopeMeasurement {
  bool ok = false;
  AccelerationEstimate estimate;
  long depth = 0;
};

SlopeMeasurement measure_slope(const CocycleSpec& spec, double y, double t, long n, int phases) {
  SlopeMeasurement out;
  for (long depth = n; depth <= 4 * n; depth *= 2) {
    try {
      out.estimate = acceleration(spec, y, t, depth, phases);
      out.ok = true;
      out.depth = depth;
      return out;
    } catch (const PrecisionError&) {
      out.depth = depth;
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::inconclusive: return "inconclusive";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// envelope constants
// ---------------------------------------------------------------------------

double EnvelopeConstants::rate(double lambda) const {
  return std::pow(std::abs(lambda), -2.0 / (2.0 * n + 1.0));
}

double EnvelopeConstants::delta_of(double lambda) const {
  return n * (1.0 / k1) * std::pow(beta_hat, -1.0 / n) * rate(lambda);
}

EnvelopeConstants envelope_constants(const FourierPotential& p, double rho,
                                     const HatScanOptions& scan) {
  if (!p.real_analytic() || p.is_constant())
    throw ContractError("envelope_constants: requires a nonconstant real-analytic potential");
  if (!(rho > 0.0) || rho >= 0.5 * std::min(p.strip_height(), 1.0))
    throw ContractError("envelope_constants: need 0 < rho < min(h,1)/2");
  const HatQuantities hat = hat_quantities(p, rho, scan);
  EnvelopeConstants out;
  out.rho = rho;
  out.n = hat.n_hat;
  out.lambda0 = std::exp2(2.0 * hat.n_hat + 1.0);
  out.k1 = constants::k1();
  out.beta_hat = hat.beta_hat;
  out.big_c = 2.0 * hat.n_hat * hat.n_hat * (1.0 / out.k1) *
                  std::pow(hat.beta_hat, -1.0 / hat.n_hat) * kPi +
              constants::k2();
  return out;
}

// ---------------------------------------------------------------------------
// uniform height floor
// ---------------------------------------------------------------------------

HeightFloorCheck height_floor_check(const FourierPotential& p, double rho, double delta,
                                    int mu_grid, int height_grid, int phase_grid) {
  if (!(delta > 0.0) || !(delta < rho))
    throw ContractError("height_floor_check: need 0 < delta < rho");
  if (!(rho < 0.5 * std::min(p.strip_height(), 1.0)))
    throw ContractError("height_floor_check: need rho < min(h,1)/2");
  HeightFloorCheck out;
  out.mu_grid = mu_grid;
  if (p.is_constant()) {
    out.degenerate = true;
    return out;
  }

  const EnvelopeConstants c = envelope_constants(p, rho);
  out.bound = c.beta_hat * std::pow(c.k1 * delta / c.n, c.n);

  // Scan range: beyond +-sup over the 2 rho strip, f - mu is zero-free on the
  // strip and the left side is >= |mu| - sup |f|, far above the bound.
  const double reach = p.coeff_bound(2.0 * rho);
  const PotentialStats st = stats(p);
  const double lo = std::min(st.min_torus - 1.0, -reach);
  const double hi = std::max(st.max_torus + 1.0, reach);

  out.worst_margin = std::numeric_limits<double>::infinity();
  std::vector<double> margins(static_cast<std::size_t>(mu_grid));
  parallel::parallel_for(static_cast<std::size_t>(mu_grid), [&](std::size_t i) {
    const double mu = lo + (hi - lo) * static_cast<double>(i) / (mu_grid - 1.0);
    double lhs = 0.0;
    for (int iy = 0; iy < height_grid; ++iy) {
      const double y = 0.5 * delta + 0.5 * delta * iy / (height_grid - 1.0);
      double mn = std::numeric_limits<double>::infinity();
      for (int ix = 0; ix < phase_grid; ++ix) {
        const double x = static_cast<double>(ix) / phase_grid;
        mn = std::min(mn, std::abs(p.eval(Complex(x, y)) - mu));
      }
      lhs = std::max(lhs, mn);
    }
    margins[i] = lhs - out.bound;
  });
  for (int i = 0; i < mu_grid; ++i) {
    if (margins[static_cast<std::size_t>(i)] < out.worst_margin) {
      out.worst_margin = margins[static_cast<std::size_t>(i)];
      out.worst_mu = lo + (hi - lo) * i / (mu_grid - 1.0);
    }
  }
  out.verified = out.worst_margin >= 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// working height
// ---------------------------------------------------------------------------

namespace {

double min_modulus_at(const FourierPotential& p, double lambda, double energy, double y) {
  return torus_min(
      [&](double x) { return std::abs(lambda * p.eval(Complex(x, y)) - energy); });
}

}  // namespace

WorkingHeight find_working_height(const EnvelopeConstants& constants, const FourierPotential& p,
                                  double lambda, double energy, double delta) {
  if (!(std::abs(lambda) > constants.lambda0))
    throw ContractError("find_working_height: requires |lambda| > lambda0 = " +
                        std::to_string(constants.lambda0));
  if (!(delta > 0.0) || delta > p.strip_height())
    throw ContractError("find_working_height: delta outside (0, h]");

  const int grid = 65;
  std::vector<double> ys(grid), md(grid);
  for (int i = 0; i < grid; ++i) {
    ys[static_cast<std::size_t>(i)] = 0.5 * delta + 0.5 * delta * i / (grid - 1.0);
    md[static_cast<std::size_t>(i)] =
        min_modulus_at(p, lambda, energy, ys[static_cast<std::size_t>(i)]);
  }

  int best_lo = -1, best_hi = -1;
  for (int i = 0; i < grid;) {
    if (md[static_cast<std::size_t>(i)] > 2.0) {
      int j = i;
      while (j + 1 < grid && md[static_cast<std::size_t>(j + 1)] > 2.0) ++j;
      if (best_lo < 0 || j - i > best_hi - best_lo) {
        best_lo = i;
        best_hi = j;
      }
      i = j + 1;
    } else {
      ++i;
    }
  }
  if (best_lo < 0) {
    double mx = 0.0, arg = ys[0];
    for (int i = 0; i < grid; ++i) {
      if (md[static_cast<std::size_t>(i)] > mx) {
        mx = md[static_cast<std::size_t>(i)];
        arg = ys[static_cast<std::size_t>(i)];
      }
    }
    std::ostringstream os;
    os << "find_working_height: no height in [" << 0.5 * delta << ", " << delta
       << "] reaches min-modulus > 2 (best " << mx << " at y = " << arg
       << "); the guaranteed floor was " << constants.beta_hat * std::abs(lambda) *
              std::pow(constants.k1 * delta / constants.n, constants.n);
    throw NumericError(os.str());
  }

  // Bisect the band edges between qualifying and non-qualifying neighbors.
  double lo = ys[static_cast<std::size_t>(best_lo)];
  double hi = ys[static_cast<std::size_t>(best_hi)];
  if (best_lo > 0) {
    double a = ys[static_cast<std::size_t>(best_lo - 1)], b = lo;
    for (int it = 0; it < 25; ++it) {
      const double m = 0.5 * (a + b);
      (min_modulus_at(p, lambda, energy, m) > 2.0 ? b : a) = m;
    }
    lo = b;
  }
  if (best_hi + 1 < grid) {
    double a = hi, b = ys[static_cast<std::size_t>(best_hi + 1)];
    for (int it = 0; it < 25; ++it) {
      const double m = 0.5 * (a + b);
      (min_modulus_at(p, lambda, energy, m) > 2.0 ? a : b) = m;
    }
    hi = a;
  }

  WorkingHeight out;
  out.band_lo = lo;
  out.band_hi = hi;
  out.y_star = 0.5 * (lo + hi);
  out.min_modulus = min_modulus_at(p, lambda, energy, out.y_star);
  return out;
}

// ---------------------------------------------------------------------------
// envelope certificate
// ---------------------------------------------------------------------------

AsymptoticsCertificate verify_asymptotics(const FourierPotential& p, double alpha, double lambda,
                                          double energy, const EnvelopeConstants& constants,
                                          const CertificateOptions& opt) {
  if (!(std::abs(lambda) > constants.lambda0))
    throw ContractError("verify_asymptotics: requires |lambda| > lambda0 = " +
                        std::to_string(constants.lambda0));
  AsymptoticsCertificate cert;
  cert.constants = constants;
  cert.lambda = lambda;
  cert.energy = energy;

  const double mu = energy / lambda;
  const CocycleSpec spec(alpha, lambda, energy, p, 0.0);
  const LyapunovEstimate axis = lyapunov_exponent(spec, opt.n, opt.phases);

  cert.measured = axis.value;
  cert.spread = axis.spread;
  cert.predicted = std::log(std::abs(lambda)) + jensen_integral(p, Complex(mu, 0.0), 0.0);
  cert.residual = std::abs(cert.measured - cert.predicted);
  cert.bound = constants.big_c * constants.rate(lambda);
  if (cert.bound < 3.0 * cert.spread) {
    cert.status = CheckStatus::inconclusive;
  } else {
    cert.status = cert.residual <= cert.bound + 2.0 * cert.spread ? CheckStatus::pass
                                                                  : CheckStatus::fail;
  }
  cert.pass = cert.status == CheckStatus::pass;
  if (!opt.run_pipeline) return cert;

  PipelineChecks& pl = cert.pipeline;
  pl.delta_theoretical = constants.delta_of(lambda);
  pl.delta_effective = std::min(pl.delta_theoretical, 0.75 * constants.rho);
  pl.delta_clamped = pl.delta_effective < pl.delta_theoretical;

  pl.height = find_working_height(constants, p, lambda, energy, pl.delta_effective);
  pl.floor_bound = std::abs(lambda) * constants.beta_hat *
                   std::pow(constants.k1 * pl.delta_effective / constants.n, constants.n);
  pl.floor_ok = pl.height.min_modulus >= pl.floor_bound * (1.0 - 1e-9);
  pl.rate_floor_ok =
      pl.height.min_modulus >= std::pow(std::abs(lambda), 1.0 / (2.0 * constants.n + 1.0));

  const CocycleSpec at_height = spec.with_height(pl.height.y_star);
  pl.splitting = dominated_splitting_check(at_height, true);

  const LyapunovEstimate le_h = lyapunov_exponent(at_height, opt.n, opt.phases);
  pl.le_axis = axis.value;
  pl.le_axis_spread = axis.spread;
  pl.le_height = le_h.value;
  pl.le_height_spread = le_h.spread;
  pl.jensen_height = jensen_integral(p, Complex(mu, 0.0), pl.height.y_star);

  pl.d_value = pl.splitting.le_antisym.value;
  pl.d_spread = pl.splitting.le_antisym.spread;
  pl.factorization_gap = std::abs(
      pl.le_height - (std::log(std::abs(lambda)) + pl.jensen_height + pl.d_value));
  pl.factorization_tol = 3.0 * (pl.le_height_spread + pl.d_spread) + 1e-6;
  pl.factorization_ok = pl.factorization_gap <= pl.factorization_tol;

  const double m = pl.height.min_modulus;
  pl.d_envelope = std::max(constants::k2(), constants::k3()) / (m * m);
  pl.d_bound_ok = std::abs(pl.d_value) <= pl.d_envelope + 2.0 * pl.d_spread + 1e-6;
  pl.d_rate_envelope = constants::k2() * constants.rate(lambda);
  pl.d_rate_ok = std::abs(pl.d_value) <= pl.d_rate_envelope + 2.0 * pl.d_spread + 1e-6;

  pl.two_omega_height = acceleration_functional(p, mu, pl.height.y_star).two_omega;
  if (opt.measure_omega) {
    const double t =
        std::min(5e-3, std::max(1e-4, 0.45 * (pl.height.band_hi - pl.height.y_star)));
    const SlopeMeasurement sm = measure_slope(spec, pl.height.y_star, t, opt.n, opt.phases);
    pl.omega_attempted = sm.ok;
    if (sm.ok) {
      pl.omega_match =
          2 * sm.estimate.quantized == pl.two_omega_height && sm.estimate.residual < 0.05;
    }
  }

  pl.extrapolation_gap = std::abs(pl.le_axis - pl.le_height);
  pl.extrapolation_bound = kPi * pl.two_omega_height * pl.height.y_star +
                           2.0 * (pl.le_axis_spread + pl.le_height_spread) + 1e-6;
  pl.extrapolation_ok = pl.extrapolation_gap <= pl.extrapolation_bound;

  pl.all_ok = pl.floor_ok && pl.splitting.dominated && pl.splitting.bounds_ok_antisym &&
              pl.splitting.bounds_ok_sym && pl.splitting.k_bound_ok && pl.factorization_ok &&
              pl.d_bound_ok && pl.d_rate_ok && pl.extrapolation_ok &&
              (!pl.omega_attempted || pl.omega_match);
  return cert;
}

// ---------------------------------------------------------------------------
// acceleration upper bound
// ---------------------------------------------------------------------------

AccelerationBoundReport acceleration_bound_check(const FourierPotential& p, double alpha,
                                                 double lambda, double energy,
                                                 const EnvelopeConstants& constants,
                                                 long n, int phases, double t) {
  AccelerationBoundReport out;
  out.n = constants.n;
  if (p.is_constant() || lambda == 0.0) {
    out.skipped = true;
    return out;
  }
  if (!(std::abs(lambda) >= constants.lambda0))
    throw ContractError("acceleration_bound_check: requires |lambda| >= lambda0");

  const CocycleSpec spec(alpha, lambda, energy, p, 0.0);
  const SlopeMeasurement sm = measure_slope(spec, 0.0, t, n, phases);
  if (!sm.ok)
    throw PrecisionError(
        "acceleration_bound_check: slope estimator spread too large even after depth retries");
  out.measured_two_omega = 2 * sm.estimate.quantized;
  out.measured_residual = sm.estimate.residual;
  out.depth_used = sm.depth;

  out.sup_two_omega = acceleration_functional(p, energy / lambda, constants.rho).two_omega;
  out.measured_ok = out.measured_two_omega <= out.n;
  out.sup_ok = out.sup_two_omega <= out.n;
  out.chain_ok = out.measured_two_omega <= out.sup_two_omega && out.sup_ok;
  return out;
}

// ---------------------------------------------------------------------------
// zero-set geometry
// ---------------------------------------------------------------------------

ZeroSetGeometry zero_set_geometry(const FourierPotential& p) {
  if (!p.real_analytic())
    throw ContractError("zero_set_geometry: requires a real-analytic potential");
  if (p.is_constant() && std::abs(p.coeff(0)) == 0.0)
    throw DegenerateInputError("zero_set_geometry: potential is identically zero");

  ZeroSetGeometry out;
  if (p.is_constant()) return out;  // no zeros on the axis
  const MonomialSplit split = monomial_split(p, 0.0);
  if (split.xs.empty()) return out;

  out.applicable = true;
  // canonical ascending order for the reported representatives; the internal
  // split keeps zero-set order because its factorization is index-aligned
  std::vector<std::pair<double, int>> reps;
  for (std::size_t j = 0; j < split.xs.size(); ++j) reps.emplace_back(split.xs[j], split.orders[j]);
  std::sort(reps.begin(), reps.end());
  for (const auto& [x, order] : reps) {
    out.real_zeros.push_back(x);
    out.zero_orders.push_back(order);
  }
  out.n_real = split.n_real;
  out.domain_origin = split.origin;

  out.tau = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < split.xs.size(); ++j) {
    FourierPotential der = p;
    double fact = 1.0;
    for (int k = 0; k < split.orders[j]; ++k) {
      der = der.derivative();
      fact *= k + 1.0;
    }
    out.tau = std::min(out.tau, std::abs(der.eval_real(split.xs[j])) / fact);
  }

  const double h = p.strip_height();
  out.sup_norm = sup_norm_at(p, h);
  out.zeta = h * theta(out.sup_norm, out.tau * std::pow(h, out.n_real));
  out.beta = torus_min([&](double x) { return std::abs(split.g(Complex(x, 0.0))); }, 4096);
  out.gamma = h * theta(out.sup_norm, out.beta * std::pow(out.zeta, out.n_real));
  out.radius = out.zeta * out.gamma / std::hypot(out.zeta, out.gamma);

  out.eta_ok = true;
  for (const double delta : {0.25 * out.radius, 0.5 * out.radius, out.radius}) {
    EtaCheck chk;
    chk.delta = delta;
    chk.eta = std::pow(0.5 * delta, out.n_real) * strip_min_g(split, delta);
    chk.grid_min = band_min_abs_f(p, 0.0, delta, 1024, 64);
    chk.ok = chk.grid_min >= chk.eta;
    out.eta_ok = out.eta_ok && chk.ok;
    out.eta_checks.push_back(chk);
  }
  return out;
}

// ---------------------------------------------------------------------------
// stratified quantities
// ---------------------------------------------------------------------------

StratumQuantities stratum_quantities(const FourierPotential& p, double mu1, double mu2) {
  if (!p.real_analytic() || p.is_constant())
    throw ContractError("stratum_quantities: requires a nonconstant real-analytic potential");
  if (!(mu1 <= mu2)) throw ContractError("stratum_quantities: need mu1 <= mu2");

  const PotentialStats st = stats(p);
  if (mu1 < st.min_torus - 1e-12 || mu2 > st.max_torus + 1e-12)
    throw ContractError("stratum_quantities: [mu1, mu2] must lie inside the range of f");
  for (const double cv : st.critical_values) {
    const double dist = cv < mu1 ? mu1 - cv : (cv > mu2 ? cv - mu2 : 0.0);
    if (dist <= 1e-9)
      throw ContractError("stratum_quantities: interval touches the critical value " +
                          std::to_string(cv));
  }

  StratumQuantities out;
  out.mu1 = mu1;
  out.mu2 = mu2;

  const int samples = 11;
  std::vector<MonomialSplit> splits;
  splits.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const double mu = mu1 + (mu2 - mu1) * i / (samples - 1.0);
    splits.push_back(monomial_split(p, mu));
    out.sampled_counts.push_back(splits.back().n_real);
  }
  out.n0 = out.sampled_counts.front();
  out.count_constant = std::all_of(out.sampled_counts.begin(), out.sampled_counts.end(),
                                   [&](int c) { return c == out.n0; });
  if (out.n0 == 0)
    throw ContractError("stratum_quantities: f - mu1 has no zeros on the axis");

  // tau0 = min |f'| over the preimage of [mu1, mu2]: attained on the region
  // boundary (f = mu1 or mu2) or at an interior critical point of f'.
  const FourierPotential fp = p.derivative();
  out.tau0 = std::numeric_limits<double>::infinity();
  for (const double x : splits.front().xs)
    out.tau0 = std::min(out.tau0, std::abs(fp.eval_real(x)));
  for (const double x : splits.back().xs)
    out.tau0 = std::min(out.tau0, std::abs(fp.eval_real(x)));
  const MonomialSplit inflect = monomial_split(p.derivative().derivative(), 0.0);
  for (const double x : inflect.xs) {
    const double v = p.eval_real(x);
    if (v >= mu1 - 1e-12 && v <= mu2 + 1e-12)
      out.tau0 = std::min(out.tau0, std::abs(fp.eval_real(x)));
  }

  const double h = p.strip_height();
  out.m0 = std::max(sup_norm_at(p.shifted(Complex(mu1, 0.0)), h),
                    sup_norm_at(p.shifted(Complex(mu2, 0.0)), h));

  const int mu_grid = 21;
  out.beta0 = std::numeric_limits<double>::infinity();
  std::vector<MonomialSplit> grid_splits;
  grid_splits.reserve(mu_grid);
  for (int i = 0; i < mu_grid; ++i) {
    const double mu = mu1 + (mu2 - mu1) * i / (mu_grid - 1.0);
    grid_splits.push_back(monomial_split(p, mu));
    const MonomialSplit& sp = grid_splits.back();
    out.beta0 = std::min(
        out.beta0, torus_min([&](double x) { return std::abs(sp.g(Complex(x, 0.0))); }, 2048));
  }

  out.zeta0 = h * theta(out.m0, out.tau0 * std::pow(h, out.n0));
  out.gamma0 = h * theta(out.m0, out.beta0 * std::pow(out.zeta0, out.n0));
  out.r0 = out.zeta0 * out.gamma0 / std::hypot(out.zeta0, out.gamma0);

  out.beta_hat = std::numeric_limits<double>::infinity();
  for (const MonomialSplit& sp : grid_splits) {
    out.beta_hat = std::min(out.beta_hat, strip_min_g(sp, out.r0, 1024, 17));
  }
  out.eta_at_r0 = out.beta_hat * std::pow(0.5 * out.r0, out.n0);
  out.lambda_tilde = std::pow(
      std::max(std::exp2(static_cast<double>(out.n0)) * out.beta_hat, 1.0 / std::sqrt(out.r0)),
      2.0 * out.n0 + 1.0);

  out.floor_ok = true;
  for (int i = 0; i < samples; ++i) {
    const double mu = mu1 + (mu2 - mu1) * i / (samples - 1.0);
    EtaCheck chk;
    chk.delta = out.r0;
    chk.eta = out.beta_hat * std::pow(0.5 * out.r0, out.n0);
    chk.grid_min = band_min_abs_f(p, mu, out.r0, 1024, 33);
    chk.ok = chk.grid_min >= chk.eta;
    out.floor_ok = out.floor_ok && chk.ok;
    out.floor_checks.push_back(chk);
  }
  return out;
}

// ---------------------------------------------------------------------------
// stratified verification
// ---------------------------------------------------------------------------

StratifiedReport verify_stratified(const FourierPotential& p, double alpha, double lambda,
                                   double mu1, double mu2, std::span<const double> mu_list,
                                   const StratifiedOptions& opt) {
  if (!(lambda > 0.0)) throw ContractError("verify_stratified: requires lambda > 0");
  StratifiedReport rep;
  rep.stratum = stratum_quantities(p, mu1, mu2);
  rep.lambda = lambda;
  rep.lambda_above_threshold = lambda > rep.stratum.lambda_tilde;
  if (!rep.lambda_above_threshold && !opt.allow_below_threshold)
    throw ContractError("verify_stratified: lambda " + std::to_string(lambda) +
                        " is below the stratified threshold " +
                        std::to_string(rep.stratum.lambda_tilde));
  for (const double mu : mu_list) {
    if (mu < mu1 - 1e-12 || mu > mu2 + 1e-12)
      throw ContractError("verify_stratified: mu = " + std::to_string(mu) +
                          " lies outside the stratum");
  }

  const int n0 = rep.stratum.n0;
  rep.delta = std::pow(lambda, -2.0 / (2.0 * n0 + 1.0));
  if (rep.delta > p.strip_height())
    throw ContractError("verify_stratified: lambda too small, the working scale exceeds the strip");

  // Joint working band over all requested cells.
  const int grid = 65;
  std::vector<double> ys(grid), qs(grid);
  for (int i = 0; i < grid; ++i) {
    const double y = 0.5 * rep.delta + 0.5 * rep.delta * i / (grid - 1.0);
    ys[static_cast<std::size_t>(i)] = y;
    double q = std::numeric_limits<double>::infinity();
    for (const double mu : mu_list) {
      q = std::min(q, torus_min([&](double x) {
                     return lambda * std::abs(p.eval(Complex(x, y)) - mu);
                   }));
    }
    qs[static_cast<std::size_t>(i)] = q;
  }
  int best_lo = -1, best_hi = -1;
  for (int i = 0; i < grid;) {
    if (qs[static_cast<std::size_t>(i)] > 2.0) {
      int j = i;
      while (j + 1 < grid && qs[static_cast<std::size_t>(j + 1)] > 2.0) ++j;
      if (best_lo < 0 || j - i > best_hi - best_lo) {
        best_lo = i;
        best_hi = j;
      }
      i = j + 1;
    } else {
      ++i;
    }
  }
  rep.band_nonempty = best_lo >= 0;
  if (rep.band_nonempty) {
    rep.band_lo = ys[static_cast<std::size_t>(best_lo)];
    rep.band_hi = ys[static_cast<std::size_t>(best_hi)];
  }

  const double bound_const = 2.0 * n0 * kPi + constants::k2();
  bool cells_ok = true;
  for (const double mu : mu_list) {
    StratifiedCell cell;
    cell.mu = mu;
    cell.energy = mu * lambda;
    const CocycleSpec spec(alpha, lambda, cell.energy, p, 0.0);
    const LyapunovEstimate axis = lyapunov_exponent(spec, opt.n, opt.phases);
    cell.measured = axis.value;
    cell.spread = axis.spread;
    cell.predicted = std::log(lambda) + jensen_integral(p, Complex(mu, 0.0), 0.0);
    cell.residual = std::abs(cell.measured - cell.predicted);
    cell.bound = bound_const * rep.delta;
    if (cell.bound < 3.0 * cell.spread) {
      cell.status = CheckStatus::inconclusive;
    } else {
      cell.status = cell.residual <= cell.bound + 2.0 * cell.spread ? CheckStatus::pass
                                                                    : CheckStatus::fail;
    }
    const SlopeMeasurement sm = measure_slope(spec, 0.0, 1e-2, opt.n, opt.phases);
    if (sm.ok) {
      cell.measured_two_omega = 2 * sm.estimate.quantized;
      cell.omega_ok = cell.measured_two_omega <= n0;
    }
    cells_ok = cells_ok && cell.status == CheckStatus::pass && cell.omega_ok;
    rep.cells.push_back(cell);
  }
  rep.conclusions_pass = cells_ok && rep.band_nonempty && rep.stratum.count_constant &&
                         rep.stratum.floor_ok;
  rep.all_pass = rep.conclusions_pass && rep.lambda_above_threshold;
  return rep;
}

// ---------------------------------------------------------------------------
// constant re-derivation
// ---------------------------------------------------------------------------

ConstantRederivation rederive_envelope_constants(int grid, double m_max) {
  if (grid < 100 || !(m_max > 3.0))
    throw ContractError("rederive_envelope_constants: need grid >= 100 and m_max > 3");
  const double k = 0.5 * (std::sqrt(5.0) + 3.0);
  const double cp = (std::sqrt(5.0) + 1.0) / (std::sqrt(5.0) - 1.0);

  const auto case1_expr = [](double m) {
    return m * m * (m - 1.0) / (m * m - 2.0 * (m - 1.0)) + 0.5 * std::log(2.0) * m * m;
  };
  const auto case2_f = [cp](double m) {
    const double m2 = m * m, m4 = m2 * m2;
    return ((2.0 * cp - 1.0) * m4 - m2) / (m4 - (2.0 * cp - 1.0) * m2 + 1.0);
  };

  ConstantRederivation out;
  out.case1_c = 0.0;
  double sup_f = 0.0;

  std::vector<double> ms;
  ms.reserve(static_cast<std::size_t>(grid) + 4103);
  for (int i = 1; i <= grid; ++i)
    ms.push_back(2.0 + (m_max - 2.0) * static_cast<double>(i) / grid);
  for (int i = 0; i <= 4000; ++i)  // refinement around the case pivot
    ms.push_back(k - 2e-3 + 4e-3 * static_cast<double>(i) / 4000.0);
  ms.push_back(k);

  for (const double m : ms) {
    if (m <= 2.0 || m > m_max) continue;
    if (m <= k) {
      const double v = case1_expr(m);
      if (v > out.case1_c) {
        out.case1_c = v;
        out.case1_argmax = m;
      }
    }
    if (m >= k) sup_f = std::max(sup_f, case2_f(m));
  }
  out.case2_d_minus = 0.5 * (cp * cp + sup_f);
  out.case2_d_plus = 0.5 * (cp + 1.0) * (cp + 1.0);
  out.k2 = std::max(out.case2_d_minus, out.case1_c);
  out.k3 = std::max(out.case2_d_plus, 2.0);

  out.worst_margin = std::numeric_limits<double>::infinity();
  for (const double m : ms) {
    if (m <= 2.0 || m > m_max) continue;
    const double sigma = std::min(1.0, (m - 1.0) / (m * (m - 2.0)));
    const double lower =
        0.5 * std::log(((1.0 - sigma / m) * (1.0 - sigma / m) + 1.0 / (m * m)) /
                       (1.0 + sigma * sigma));
    const double upper = 0.5 * std::log((1.0 + sigma / m) * (1.0 + sigma / m) + 1.0 / (m * m));
    out.worst_margin = std::min(out.worst_margin, lower - (-out.k2 / (m * m)));
    out.worst_margin = std::min(out.worst_margin, out.k3 / (m * m) - upper);
  }
  out.envelope_verified = out.worst_margin >= -1e-12;

  out.matches_closed_forms = std::abs(out.case1_c - constants::case1_c()) <= 5e-4 &&
                             std::abs(out.case2_d_minus - constants::case2_d_minus()) <= 5e-4 &&
                             std::abs(out.k2 - constants::k2()) <= 5e-4 &&
                             std::abs(out.k3 - constants::k3()) <= 5e-4;
  return out;
}

}  // namespace qpc
