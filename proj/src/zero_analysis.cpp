#include "qpcocycle/zero_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "poly_roots.hpp"
#include "qpcocycle/constants.hpp"
#include "qpcocycle/parallel.hpp"

namespace qpc {

namespace {

double wrap01(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r -= 1.0;
  return r;
}

Complex w_of(Complex z) { return std::exp(Complex(0.0, 2.0 * M_PI) * z); }

}  // namespace

ZeroSet::ZeroSet(FourierPotential potential, Complex mu, std::vector<Zero> zeros,
                 Complex leading_coeff, int power_offset, double max_residual)
    : potential_(std::move(potential)),
      mu_(mu),
      zeros_(std::move(zeros)),
      leading_coeff_(leading_coeff),
      power_offset_(power_offset),
      max_residual_(max_residual) {}

int ZeroSet::total_multiplicity() const {
  int sum = 0;
  for (const auto& zr : zeros_) sum += zr.multiplicity;
  return sum;
}

std::vector<Zero> ZeroSet::zeros_in_strip(double height) const {
  std::vector<Zero> out;
  for (const auto& zr : zeros_) {
    if (std::abs(zr.z.imag()) <= height) out.push_back(zr);
  }
  return out;
}

Complex ZeroSet::eval_from_factorization(Complex z) const {
  const Complex w = w_of(z);
  Complex value = leading_coeff_ * std::pow(w, power_offset_);
  for (const auto& zr : zeros_) {
    const Complex wj = w_of(zr.z);
    for (int m = 0; m < zr.multiplicity; ++m) value *= (w - wj);
  }
  return value;
}

ZeroSet laurent_roots(const FourierPotential& p, Complex mu) {
  const FourierPotential shifted = p.shifted(mu);
  if (shifted.is_constant() && shifted.coeff(0) == Complex(0.0, 0.0))
    throw DegenerateInputError("laurent_roots: f - mu vanishes identically");

  const int d = shifted.degree();
  std::vector<Complex> poly(static_cast<std::size_t>(2 * d + 1));
  for (int k = -d; k <= d; ++k) poly[static_cast<std::size_t>(k + d)] = shifted.coeff(k);
  const detail::PolyRoots pr = detail::polynomial_roots(poly);

  std::vector<Zero> zeros;
  double max_residual = 0.0;
  const double h = p.strip_height();
  const double norm_scale = 1.0 + p.coeff_bound(h);
  for (std::size_t i = 0; i < pr.roots.size(); ++i) {
    const Complex w = pr.roots[i];
    const double y = -std::log(std::abs(w)) / (2.0 * M_PI);
    const double x = wrap01(std::arg(w) / (2.0 * M_PI));
    zeros.push_back(Zero{Complex(x, y), pr.multiplicities[i]});
    if (std::abs(y) <= h) {
      const double res = std::abs(p.eval(Complex(x, y)) - mu);
      max_residual = std::max(max_residual, res);
      if (res > 1e-8 * norm_scale)
        throw NumericError("laurent_roots: residual " + std::to_string(res) +
                           " exceeds certification threshold at a strip zero");
    }
  }
  std::sort(zeros.begin(), zeros.end(),
            [](const Zero& a, const Zero& b) { return a.z.imag() < b.z.imag(); });
  return ZeroSet(p, mu, std::move(zeros), pr.leading, pr.zero_multiplicity - d, max_residual);
}

int count_zeros(const ZeroSet& zs, const HeightInterval& band) {
  const double h = zs.potential().strip_height();
  if (band.lo > band.hi) throw ContractError("count_zeros: interval endpoints out of order");
  if (band.lo < -h - 1e-12 || band.hi > h + 1e-12)
    throw ContractError("count_zeros: interval must stay inside the analyticity strip");
  int count = 0;
  for (const auto& zr : zs.zeros()) {
    const double y = zr.z.imag();
    const bool above_lo = band.lo_closed ? (y >= band.lo) : (y > band.lo);
    const bool below_hi = band.hi_closed ? (y <= band.hi) : (y < band.hi);
    if (above_lo && below_hi) count += zr.multiplicity;
  }
  return count;
}

int count_zeros_closed(const ZeroSet& zs, double lo, double hi) {
  return count_zeros(zs, HeightInterval{lo, hi, true, true});
}

int removed_zero_count(const ZeroSet& zs, double epsilon) {
  int n = 0;
  for (const auto& zr : zs.zeros()) {
    if (std::abs(zr.z.imag()) < 2.0 * epsilon) n += zr.multiplicity;
  }
  return n;
}

Complex zero_free_part_eval(const ZeroSet& zs, double epsilon, Complex z) {
  if (!(epsilon > 0.0))
    throw ContractError("zero_free_part_eval: epsilon must be positive");
  if (2.0 * epsilon > zs.potential().strip_height() + 1e-12)
    throw ContractError("zero_free_part_eval: 2*epsilon exceeds the analyticity strip");
  const Complex w = w_of(z);
  const double norm = constants::zero_factor_norm();
  Complex value = zs.leading_coeff() * std::pow(w, zs.power_offset());
  for (const auto& zr : zs.zeros()) {
    if (std::abs(zr.z.imag()) < 2.0 * epsilon) {
      // Removed factor; contributes the normalization weight instead.
      for (int m = 0; m < zr.multiplicity; ++m) value *= norm;
    } else {
      const Complex wj = w_of(zr.z);
      for (int m = 0; m < zr.multiplicity; ++m) value *= (w - wj);
    }
  }
  return value;
}

double beta(const FourierPotential& p, Complex mu, double rho, const BetaOptions& opt) {
  if (!(rho > 0.0)) throw ContractError("beta: rho must be positive");
  if (2.0 * rho > p.strip_height() + 1e-12)
    throw ContractError("beta: 2*rho exceeds the analyticity strip");
  const ZeroSet zs = laurent_roots(p, mu);

  const int nx = opt.phase_grid, ny = opt.height_grid;
  double best = std::numeric_limits<double>::infinity();
  double bx = 0.0, by = 0.0;
  for (int iy = 0; iy < ny; ++iy) {
    const double y = ny == 1 ? 0.0 : -rho + 2.0 * rho * iy / (ny - 1);
    for (int ix = 0; ix < nx; ++ix) {
      const double x = static_cast<double>(ix) / nx;
      const double v = std::abs(zero_free_part_eval(zs, rho, Complex(x, y)));
      if (v < best) {
        best = v;
        bx = x;
        by = y;
      }
    }
  }
  // One refinement pass on the surrounding cell.
  const double dx = 1.0 / nx;
  const double dy = ny == 1 ? 0.0 : 2.0 * rho / (ny - 1);
  const int rf = std::max(2, opt.refine_factor);
  for (int iy = -rf; iy <= rf; ++iy) {
    const double y = std::clamp(by + dy * iy / rf, -rho, rho);
    for (int ix = -rf; ix <= rf; ++ix) {
      const double x = bx + dx * ix / rf;
      const double v = std::abs(zero_free_part_eval(zs, rho, Complex(x, y)));
      best = std::min(best, v);
    }
  }
  return best;
}

HatQuantities hat_quantities(const FourierPotential& p, double rho, const HatScanOptions& opt) {
  if (!p.real_analytic())
    throw ContractError("hat_quantities: mu scan requires a real-analytic potential");
  if (p.is_constant())
    throw DegenerateInputError("hat_quantities: constant potential (f - mu degenerates at mu = c_0)");
  if (!(rho > 0.0) || 2.0 * rho > p.strip_height() + 1e-12)
    throw ContractError("hat_quantities: need 0 < 2*rho <= strip height");

  const PotentialStats st = stats(p);
  const double wide = sup_norm_at(p, 2.0 * rho);
  const double lo = std::min(st.min_torus - 1.0, -wide);
  const double hi = std::max(st.max_torus + 1.0, wide);

  // Scan points: uniform grid, critical values, and the certified range ends.
  std::vector<double> mus;
  const int grid = std::max(2, opt.grid);
  for (int i = 0; i < grid; ++i) mus.push_back(lo + (hi - lo) * i / (grid - 1));
  for (double cv : st.critical_values) {
    if (cv >= lo && cv <= hi) mus.push_back(cv);
  }
  std::sort(mus.begin(), mus.end());
  mus.erase(std::unique(mus.begin(), mus.end()), mus.end());

  auto count_at = [&](double mu) {
    return count_zeros_closed(laurent_roots(p, Complex(mu, 0.0)), -2.0 * rho, 2.0 * rho);
  };

  std::vector<MuScanPoint> pts(mus.size());
  parallel::parallel_for(mus.size(), [&](std::size_t i) {
    pts[i] = MuScanPoint{mus[i], count_at(mus[i]), beta(p, Complex(mus[i], 0.0), rho, opt.beta_options)};
  });

  // Bisection refinement at count jumps: locates the transition to jump_tol
  // and records beta on both sides so minima hiding at transitions are seen.
  std::vector<MuScanPoint> extra;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i].count == pts[i + 1].count) continue;
    double a = pts[i].mu, b = pts[i + 1].mu;
    int ca = pts[i].count;
    while (b - a > opt.jump_tol) {
      const double m = 0.5 * (a + b);
      const int cm = count_at(m);
      extra.push_back(MuScanPoint{m, cm, beta(p, Complex(m, 0.0), rho, opt.beta_options)});
      if (cm == ca) {
        a = m;
      } else {
        b = m;
      }
    }
  }
  pts.insert(pts.end(), extra.begin(), extra.end());
  std::sort(pts.begin(), pts.end(), [](const MuScanPoint& a, const MuScanPoint& b) { return a.mu < b.mu; });

  HatQuantities out;
  out.rho = rho;
  out.scan = std::move(pts);
  out.n_hat = 0;
  out.beta_hat = std::numeric_limits<double>::infinity();
  for (const auto& pt : out.scan) {
    if (pt.count > out.n_hat) {
      out.n_hat = pt.count;
      out.witness_mu_count = pt.mu;
    }
    if (pt.beta < out.beta_hat) {
      out.beta_hat = pt.beta;
      out.witness_mu_beta = pt.mu;
    }
  }
  return out;
}

int winding_number(const std::function<Complex(double)>& curve, WindingDiagnostics* diag,
                   int initial_samples, int max_samples) {
  for (int n = initial_samples; n <= max_samples; n *= 2) {
    double total = 0.0;
    double min_abs = std::numeric_limits<double>::infinity();
    bool ok = true;
    Complex prev = curve(0.0);
    min_abs = std::min(min_abs, std::abs(prev));
    for (int i = 1; i <= n; ++i) {
      const Complex cur = curve(static_cast<double>(i % n) / n);
      const double a = std::abs(cur);
      min_abs = std::min(min_abs, a);
      if (a == 0.0) throw NumericError("winding_number: curve passes through 0");
      const double inc = std::arg(cur / prev);
      if (std::abs(inc) >= M_PI / 2.0) {
        ok = false;
        break;
      }
      total += inc;
      prev = cur;
    }
    if (!ok) continue;
    const double turns = total / (2.0 * M_PI);
    const int rounded = static_cast<int>(std::lround(turns));
    const double residue = std::abs(turns - rounded);
    if (diag) *diag = WindingDiagnostics{n, residue, min_abs};
    if (residue >= 0.05)
      throw NumericError("winding_number: residue " + std::to_string(residue) +
                         " exceeds tolerance 0.05");
    return rounded;
  }
  throw NumericError("winding_number: argument increments stayed above pi/2 at the sample limit");
}

}  // namespace qpc
