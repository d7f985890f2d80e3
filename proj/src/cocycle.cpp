#include "qpcocycle/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qpcocycle/constants.hpp"
#include "qpcocycle/errors.hpp"

namespace qpc {

namespace {

constexpr double kRenormSq = 1e200;  // squared Frobenius trigger, i.e. norm 1e100

struct TwoDepth {
  double at_n = 0.0;
  double at_2n = 0.0;
};

// Shared evaluation state: the unit phase u = e^{2 pi i (x0 + j alpha)} is
// advanced by one complex multiplication per step (negative Fourier modes use
// conj(u), so no divisions appear), and the strip offset is folded into the
// per-mode weights c_k e^{-2 pi k y} once.
struct ModeWeights {
  int degree = 0;
  std::vector<Complex> pos;  // index k-1 -> c_k e^{-2 pi k y}
  std::vector<Complex> neg;  // index k-1 -> c_{-k} e^{+2 pi k y}
  Complex c0;

  ModeWeights(const FourierPotential& p, double y) {
    degree = p.degree();
    c0 = p.coeff(0);
    for (int k = 1; k <= degree; ++k) {
      pos.push_back(p.coeff(k) * std::exp(-2.0 * M_PI * k * y));
      neg.push_back(p.coeff(-k) * std::exp(2.0 * M_PI * k * y));
    }
  }

  Complex eval(Complex u) const {
    Complex f = c0;
    Complex up(1.0, 0.0), un(1.0, 0.0);
    const Complex ub = std::conj(u);
    for (int k = 1; k <= degree; ++k) {
      up *= u;
      un *= ub;
      f += pos[static_cast<std::size_t>(k - 1)] * up + neg[static_cast<std::size_t>(k - 1)] * un;
    }
    return f;
  }
};

double norm_of_real(double a, double b, double c, double d) {
  return Matrix2c{Complex(a, 0.0), Complex(b, 0.0), Complex(c, 0.0), Complex(d, 0.0)}.operator_norm();
}

// Real-axis fast path: real-analytic potential at y = 0 keeps the whole
// product in SL(2, R) with real arithmetic.
TwoDepth run_real(const CocycleSpec& spec, double x0, long record_at, long total) {
  const ModeWeights modes(spec.potential, 0.0);
  const Complex rot = std::exp(Complex(0.0, 2.0 * M_PI * spec.alpha));
  Complex u = std::exp(Complex(0.0, 2.0 * M_PI * x0));
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
  double acc = 0.0;
  TwoDepth out;
  for (long j = 0; j < total; ++j) {
    const double t = spec.energy - spec.lambda * modes.eval(u).real();
    const double na = t * a - c, nb = t * b - d;
    c = a;
    d = b;
    a = na;
    b = nb;
    u *= rot;
    if ((j & 4095) == 4095) u /= std::abs(u);
    const double fro = a * a + b * b + c * c + d * d;
    if (fro > kRenormSq) {
      const double s = std::sqrt(fro);
      a /= s;
      b /= s;
      c /= s;
      d /= s;
      acc += std::log(s);
    }
    if (j + 1 == record_at) out.at_n = acc + std::log(norm_of_real(a, b, c, d));
  }
  out.at_2n = acc + std::log(norm_of_real(a, b, c, d));
  return out;
}

TwoDepth run_complex(const CocycleSpec& spec, double x0, long record_at, long total) {
  const ModeWeights modes(spec.potential, spec.y);
  const Complex rot = std::exp(Complex(0.0, 2.0 * M_PI * spec.alpha));
  Complex u = std::exp(Complex(0.0, 2.0 * M_PI * x0));
  Matrix2c m{Complex(1.0, 0.0), Complex(0.0, 0.0), Complex(0.0, 0.0), Complex(1.0, 0.0)};
  double acc = 0.0;
  TwoDepth out;
  for (long j = 0; j < total; ++j) {
    const Complex t = spec.energy - spec.lambda * modes.eval(u);
    const Complex na = t * m.a - m.c, nb = t * m.b - m.d;
    m.c = m.a;
    m.d = m.b;
    m.a = na;
    m.b = nb;
    u *= rot;
    if ((j & 4095) == 4095) u /= std::abs(u);
    if (m.frobenius_sq() > kRenormSq) {
      const double s = std::sqrt(m.frobenius_sq());
      m.a /= s;
      m.b /= s;
      m.c /= s;
      m.d /= s;
      acc += std::log(s);
    }
    if (j + 1 == record_at) out.at_n = acc + std::log(m.operator_norm());
  }
  out.at_2n = acc + std::log(m.operator_norm());
  return out;
}

TwoDepth run(const CocycleSpec& spec, double x0, long record_at, long total) {
  if (spec.y == 0.0 && spec.potential.real_analytic())
    return run_real(spec, x0, record_at, total);
  return run_complex(spec, x0, record_at, total);
}

}  // namespace

FrequencyGuard frequency_guard(double alpha, double tol, long long threshold) {
  FrequencyGuard out;
  double x = alpha - std::floor(alpha);
  long long p2 = 0, p1 = 1;  // numerators shifted so p1/q1 tracks the convergent
  long long q2 = 1, q1 = 0;
  double frac = x;
  // Convergents of the fractional part; alpha and its fractional part have the
  // same approximation denominators.
  for (int it = 0; it < 64; ++it) {
    long long a;
    if (it == 0) {
      a = 0;
    } else {
      if (frac <= 0.0) {  // exact rational reached
        out.denominator = q1;
        out.near_rational_warning = q1 <= threshold;
        return out;
      }
      const double inv = 1.0 / frac;
      if (inv > 9e17) {
        out.denominator = q1;
        out.near_rational_warning = q1 <= threshold;
        return out;
      }
      a = static_cast<long long>(std::floor(inv));
      frac = inv - std::floor(inv);
    }
    const long long p = a * p1 + p2;
    const long long q = a * q1 + q2;
    p2 = p1;
    p1 = p;
    q2 = q1;
    q1 = q;
    if (q1 > 0 && std::abs(x - static_cast<double>(p1) / static_cast<double>(q1)) <= tol) {
      out.denominator = q1;
      out.near_rational_warning = q1 <= threshold;
      return out;
    }
    if (q1 > (1LL << 50)) break;
  }
  out.denominator = q1;
  out.near_rational_warning = false;
  return out;
}

CocycleSpec::CocycleSpec(double alpha_, double lambda_, double energy_, FourierPotential potential_,
                         double y_)
    : alpha(alpha_), lambda(lambda_), energy(energy_), y(y_), potential(std::move(potential_)) {
  if (!std::isfinite(alpha) || !std::isfinite(lambda) || !std::isfinite(energy) || !std::isfinite(y))
    throw ContractError("CocycleSpec: parameters must be finite");
  if (std::abs(y) > potential.strip_height() + 1e-12)
    throw ContractError("CocycleSpec: strip offset exceeds the potential's analyticity strip");
  guard = frequency_guard(alpha);
}

CocycleSpec CocycleSpec::with_height(double new_y) const {
  CocycleSpec copy = *this;
  copy.y = new_y;
  if (std::abs(new_y) > potential.strip_height() + 1e-12)
    throw ContractError("CocycleSpec::with_height: strip offset exceeds the analyticity strip");
  return copy;
}

Matrix2c transfer_matrix(const CocycleSpec& spec, double x) {
  const Complex fz = spec.potential.eval(Complex(x, spec.y));
  return Matrix2c{spec.energy - spec.lambda * fz, Complex(-1.0, 0.0), Complex(1.0, 0.0),
                  Complex(0.0, 0.0)};
}

double cocycle_product_lognorm(const CocycleSpec& spec, double x, long n) {
  if (n < 1) throw ContractError("cocycle_product_lognorm: need n >= 1");
  return run(spec, x, n, n).at_n;
}

LyapunovEstimate lyapunov_exponent(const CocycleSpec& spec, long n, int phases) {
  if (n < 1 || phases < 1) throw ContractError("lyapunov_exponent: need n >= 1 and phases >= 1");
  std::vector<TwoDepth> slots(static_cast<std::size_t>(phases));
  parallel::parallel_for(static_cast<std::size_t>(phases), [&](std::size_t i) {
    slots[i] = run(spec, static_cast<double>(i) / phases, n, 2 * n);
  });
  LyapunovEstimate est;
  est.n = n;
  est.phases = phases;
  double sn = 0.0, s2n = 0.0;
  for (const auto& s : slots) {
    sn += s.at_n;
    s2n += s.at_2n;
  }
  est.l_n = sn / (static_cast<double>(phases) * static_cast<double>(n));
  est.l_2n = s2n / (static_cast<double>(phases) * 2.0 * static_cast<double>(n));
  est.value = 2.0 * est.l_2n - est.l_n;
  est.spread = std::abs(est.l_n - est.l_2n);
  return est;
}

CocycleProfile complexified_profile(const CocycleSpec& spec, std::span<const double> heights,
                                    long n, int phases) {
  CocycleProfile prof;
  for (double y : heights) {
    prof.entries.push_back(ProfileEntry{y, lyapunov_exponent(spec.with_height(y), n, phases)});
  }
  std::sort(prof.entries.begin(), prof.entries.end(),
            [](const ProfileEntry& a, const ProfileEntry& b) { return a.y < b.y; });

  prof.convexity_defect = 0.0;
  for (std::size_t i = 1; i + 1 < prof.entries.size(); ++i) {
    const auto& a = prof.entries[i - 1];
    const auto& b = prof.entries[i];
    const auto& c = prof.entries[i + 1];
    const double left = (b.le.value - a.le.value) / (b.y - a.y);
    const double right = (c.le.value - b.le.value) / (c.y - b.y);
    prof.convexity_defect = std::min(prof.convexity_defect, right - left);
  }
  prof.convex_ok = prof.convexity_defect >= -1e-3;

  for (const auto& e : prof.entries) {
    if (e.y <= 0.0) continue;
    for (const auto& m : prof.entries) {
      if (std::abs(m.y + e.y) < 1e-15) {
        prof.evenness_checked = true;
        prof.evenness_defect = std::max(prof.evenness_defect, std::abs(m.le.value - e.le.value));
      }
    }
  }
  return prof;
}

AccelerationEstimate acceleration(const CocycleSpec& spec, double y, double t, long n, int phases) {
  if (!(t > 0.0) || t > 1e-2)
    throw ContractError("acceleration: step t must lie in (0, 1e-2]");
  AccelerationEstimate est;
  est.t = t;
  est.at_y = lyapunov_exponent(spec.with_height(y), n, phases);
  est.at_y_plus_t = lyapunov_exponent(spec.with_height(y + t), n, phases);
  const double spread = std::max(est.at_y.spread, est.at_y_plus_t.spread);
  if (spread > 0.1 * 2.0 * M_PI * t)
    throw PrecisionError("acceleration: estimator spread " + std::to_string(spread) +
                         " too large for step " + std::to_string(t));
  est.raw = (est.at_y_plus_t.value - est.at_y.value) / (2.0 * M_PI * t);
  est.quantized = static_cast<int>(std::lround(est.raw));
  est.residual = std::abs(est.raw - est.quantized);
  est.suspicious = est.residual > 0.1;
  return est;
}

DominatedSplittingReport dominated_splitting_check(const CocycleSpec& spec, bool with_measurement,
                                                   long n, int phases, double tol) {
  if (spec.lambda == 0.0)
    throw ContractError("dominated_splitting_check: lambda must be nonzero (g = E - lambda f)");
  DominatedSplittingReport rep;

  const auto g_abs = [&](double x) {
    return std::abs(spec.energy - spec.lambda * spec.potential.eval(Complex(x, spec.y)));
  };
  const int grid = 4096;
  double best = std::numeric_limits<double>::infinity();
  int best_i = 0;
  std::vector<double> vals(grid);
  for (int i = 0; i < grid; ++i) {
    vals[static_cast<std::size_t>(i)] = g_abs(static_cast<double>(i) / grid);
    if (vals[static_cast<std::size_t>(i)] < best) {
      best = vals[static_cast<std::size_t>(i)];
      best_i = i;
    }
  }
  // Refine every local minimum within 10% of the global one; |g| may have
  // several competing valleys.
  for (int i = 0; i < grid; ++i) {
    const double v = vals[static_cast<std::size_t>(i)];
    const double prev = vals[static_cast<std::size_t>((i + grid - 1) % grid)];
    const double next = vals[static_cast<std::size_t>((i + 1) % grid)];
    if ((v <= prev && v <= next && v <= 1.1 * best) || i == best_i) {
      double lo = (i - 1.0) / grid, hi = (i + 1.0) / grid;
      for (int it = 0; it < 60; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (g_abs(m1) < g_abs(m2)) {
          hi = m2;
        } else {
          lo = m1;
        }
      }
      best = std::min(best, g_abs(0.5 * (lo + hi)));
    }
  }
  rep.m_g = best;
  rep.dominated = rep.m_g > 2.0;
  if (!rep.dominated) return rep;

  const double m = rep.m_g;
  rep.sigma = std::min(1.0, (m - 1.0) / (m * (m - 2.0)));
  const double s = rep.sigma;
  rep.le_lower = 0.5 * std::log(((1.0 - s / m) * (1.0 - s / m) + 1.0 / (m * m)) / (1.0 + s * s));
  rep.le_upper = 0.5 * std::log((1.0 + s / m) * (1.0 + s / m) + 1.0 / (m * m));
  rep.k_envelope = std::max(constants::k2(), constants::k3()) / (m * m);

  if (with_measurement) {
    rep.measured = true;
    const auto make_map = [&](double sign) {
      return [&spec, sign](double x) {
        const Complex g = spec.energy - spec.lambda * spec.potential.eval(Complex(x, spec.y));
        const Complex inv = 1.0 / g;
        return Matrix2c{Complex(1.0, 0.0), sign * inv, inv, Complex(0.0, 0.0)};
      };
    };
    rep.le_antisym = generic_lyapunov(make_map(-1.0), spec.alpha, n, phases);
    rep.le_sym = generic_lyapunov(make_map(1.0), spec.alpha, n, phases);
    const auto inside = [&](const LyapunovEstimate& e) {
      return e.value >= rep.le_lower - tol && e.value <= rep.le_upper + tol;
    };
    rep.bounds_ok_antisym = inside(rep.le_antisym);
    rep.bounds_ok_sym = inside(rep.le_sym);
    rep.k_bound_ok = std::abs(rep.le_antisym.value) <= rep.k_envelope + tol &&
                     std::abs(rep.le_sym.value) <= rep.k_envelope + tol;
  }
  return rep;
}

}  // namespace qpc
