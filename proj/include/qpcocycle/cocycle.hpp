#pragma once
//
// Transfer-matrix cocycles over the irrational rotation x -> x + alpha and
// their Lyapunov exponents.
//
// The Schrodinger cocycle of a potential f at coupling lambda and energy E is
//     A(x) = [[E - lambda f(x + iy), -1], [1, 0]],
// iterated as A^{(n)}(x) = A(x + (n-1) alpha) ... A(x).  The engine measures
//     L(y) = lim (1/n) integral log || A^{(n)}(x + iy) || dx
// by phase averaging at two depths n and 2n and extrapolating the subadditive
// tail: value = 2 L_{2n} - L_n, with the spread |L_n - L_{2n}| reported as the
// estimator's own uncertainty.  Products renormalize at norm 1e100; the final
// norm is the exact 2x2 operator norm (largest singular value).

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "qpcocycle/parallel.hpp"
#include "qpcocycle/potential.hpp"

namespace qpc {

struct Matrix2c {
  Complex a{0.0, 0.0}, b{0.0, 0.0}, c{0.0, 0.0}, d{0.0, 0.0};  // [[a, b], [c, d]]

  friend Matrix2c operator*(const Matrix2c& l, const Matrix2c& r) {
    return Matrix2c{l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d, l.c * r.a + l.d * r.c,
                    l.c * r.b + l.d * r.d};
  }
  Complex det() const { return a * d - b * c; }
  double frobenius_sq() const {
    return std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
  }
  // Largest singular value: s1^2 = (t + sqrt(t^2 - 4 |det|^2)) / 2, t = ||.||_F^2.
  // Entries are rescaled by the largest magnitude first so that t^2 cannot
  // overflow even for products renormalized only at norm 1e100.
  double operator_norm() const {
    const double s = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
    if (s == 0.0 || !std::isfinite(s)) return s;
    const Matrix2c scaled{a / s, b / s, c / s, d / s};
    const double t = scaled.frobenius_sq();
    const double dd = std::norm(scaled.det());
    const double disc = std::max(0.0, t * t - 4.0 * dd);
    return s * std::sqrt(0.5 * (t + std::sqrt(disc)));
  }
};

struct FrequencyGuard {
  long long denominator = 0;        // smallest q with |alpha - p/q| <= tol
  bool near_rational_warning = false;  // q <= threshold
};

// Continued-fraction scan for the best rational approximation within tol.
// The warning threshold is matched to the default estimator depths: a
// denominator at or below it means the orbit is effectively periodic within
// the run, which silently biases phase averages.  The golden mean first
// reaches 1e-12 at q = 832040, safely above it.
FrequencyGuard frequency_guard(double alpha, double tol = 1e-12, long long threshold = 100000);

inline double golden_mean() { return (std::sqrt(5.0) - 1.0) / 2.0; }

struct CocycleSpec {
  double alpha;
  double lambda;
  double energy;
  double y;  // strip offset of the phase
  FourierPotential potential;
  FrequencyGuard guard;

  CocycleSpec(double alpha_, double lambda_, double energy_, FourierPotential potential_,
              double y_ = 0.0);
  CocycleSpec with_height(double new_y) const;
};

Matrix2c transfer_matrix(const CocycleSpec& spec, double x);

// log || A^{(n)}(x + iy) || for a single phase.
double cocycle_product_lognorm(const CocycleSpec& spec, double x, long n);

struct LyapunovEstimate {
  double value = 0.0;   // 2 L_{2n} - L_n
  double l_n = 0.0;
  double l_2n = 0.0;
  long n = 0;
  int phases = 0;
  double spread = 0.0;  // |L_n - L_{2n}|
};

// Phase-averaged two-depth estimate over M uniform phases.  Parallel over
// phases; the reduction is a fixed-order sequential sum, so results are
// byte-identical for every worker count.
LyapunovEstimate lyapunov_exponent(const CocycleSpec& spec, long n = 10000, int phases = 256);

struct ProfileEntry {
  double y = 0.0;
  LyapunovEstimate le;
};

struct CocycleProfile {
  std::vector<ProfileEntry> entries;       // ordered by y
  double convexity_defect = 0.0;           // most negative normalized 2nd difference
  bool convex_ok = true;                   // defect >= -1e-3
  bool evenness_checked = false;           // some +-y pair was present
  double evenness_defect = 0.0;            // max |L(y) - L(-y)| over pairs
};

CocycleProfile complexified_profile(const CocycleSpec& spec, std::span<const double> heights,
                                    long n = 10000, int phases = 256);

struct AccelerationEstimate {
  double raw = 0.0;        // (L(y + t) - L(y)) / (2 pi t)
  int quantized = 0;       // nearest integer
  double residual = 0.0;   // |raw - quantized|
  bool suspicious = false; // residual > 0.1
  double t = 0.0;
  LyapunovEstimate at_y, at_y_plus_t;
};

// Finite-difference acceleration.  Requires 0 < t <= 1e-2; throws
// PrecisionError when the estimator spread exceeds 0.1 * 2 pi t, i.e. when the
// Lyapunov uncertainty would contaminate the quantized value.
AccelerationEstimate acceleration(const CocycleSpec& spec, double y, double t = 5e-3,
                                  long n = 10000, int phases = 256);

struct DominatedSplittingReport {
  double m_g = 0.0;        // inf_x |E - lambda f(x + iy)|
  bool dominated = false;  // m_g > 2
  double sigma = 0.0;      // min(1, (m-1)/(m(m-2)))
  double le_lower = 0.0;   // bounds on L(alpha, D) when dominated
  double le_upper = 0.0;
  double k_envelope = 0.0;  // max(k2, k3) / m_g^2
  bool measured = false;
  LyapunovEstimate le_antisym;  // D = [[1, -1/g], [1/g, 0]]  (factorized cocycle)
  LyapunovEstimate le_sym;      // D = [[1,  1/g], [1/g, 0]]  (symmetric variant)
  bool bounds_ok_antisym = false;
  bool bounds_ok_sym = false;
  bool k_bound_ok = false;
};

// Checks m(g) = inf |g| for g(x) = E - lambda f(x + iy) on a dense phase grid
// with local refinement.  When m > 2 the one-step cocycle D = A / g admits a
// dominated splitting and L(alpha, D) obeys two-sided bounds; both sign
// conventions of the off-diagonal entries are measured because they are
// conjugate (via diag(1, -i) and g -> ig) and must satisfy the same bounds.
// m <= 2 yields a not-dominated report, not an error.  Requires lambda != 0.
DominatedSplittingReport dominated_splitting_check(const CocycleSpec& spec,
                                                   bool with_measurement = true, long n = 4096,
                                                   int phases = 128, double tol = 1e-3);

// Lyapunov estimate of an arbitrary continuous 2x2 cocycle over the rotation,
// same estimator contract as lyapunov_exponent.
template <class MatrixFn>
LyapunovEstimate generic_lyapunov(MatrixFn&& map, double alpha, long n, int phases) {
  std::vector<double> at_n(static_cast<std::size_t>(phases));
  std::vector<double> at_2n(static_cast<std::size_t>(phases));
  parallel::parallel_for(static_cast<std::size_t>(phases), [&](std::size_t i) {
    const double x0 = static_cast<double>(i) / phases;
    Matrix2c prod{Complex(1.0, 0.0), Complex(0.0, 0.0), Complex(0.0, 0.0), Complex(1.0, 0.0)};
    double acc = 0.0;
    double x = x0;
    for (long j = 0; j < 2 * n; ++j) {
      prod = map(x) * prod;
      x += alpha;
      if (x >= 1.0) x -= 1.0;
      if (prod.frobenius_sq() > 1e200) {
        const double s = std::sqrt(prod.frobenius_sq());
        prod.a /= s;
        prod.b /= s;
        prod.c /= s;
        prod.d /= s;
        acc += std::log(s);
      }
      if (j + 1 == n) at_n[i] = acc + std::log(prod.operator_norm());
    }
    at_2n[i] = acc + std::log(prod.operator_norm());
  });
  LyapunovEstimate est;
  est.n = n;
  est.phases = phases;
  double sn = 0.0, s2n = 0.0;
  for (int i = 0; i < phases; ++i) {
    sn += at_n[static_cast<std::size_t>(i)];
    s2n += at_2n[static_cast<std::size_t>(i)];
  }
  est.l_n = sn / (static_cast<double>(phases) * static_cast<double>(n));
  est.l_2n = s2n / (static_cast<double>(phases) * 2.0 * static_cast<double>(n));
  est.value = 2.0 * est.l_2n - est.l_n;
  est.spread = std::abs(est.l_n - est.l_2n);
  return est;
}

}  // namespace qpc
