#pragma once
//
// Closed-form constants used by the quantitative Lyapunov-exponent bounds.
//
// k1(): the strip constant in the lower bound
//     min_mu max_{delta/2<=y<=delta} min_x |f(x+iy) - mu|
//         >= beta_hat * (k1() * delta / N)^N,
// namely k1 = e^{-2pi} / (2 e^{2pi} + 2).  The denominator 2e^{2pi}+2 is the
// same normalization that appears in the zero-free factorization, and the
// e^{-2pi} accounts for the worst-case drift of a zero across a unit strip.
//
// k2()/k3(): envelope constants for the Lyapunov exponent of the dominated
// cocycle D = [[1, -1/g], [1/g, 0]] with m = inf|g| > 2:
//     -k2()/m^2 <= L(alpha, D) <= k3()/m^2.
// They come from a two-case analysis split at m = pivot_m() = (sqrt5+3)/2
// with cone constant cone_cplus() = (sqrt5+1)/(sqrt5-1):
//   * small m in (2, pivot]:  |lower| <= case1_c()/m^2, derived from the
//     sigma = 1 branch; the supremum is attained at m = pivot.
//   * large m >= pivot: lower envelope case2_d_minus() = (cplus^2 + F(pivot))/2
//     with F(m) = ((2c+ - 1) m^4 - m^2) / (m^4 - (2c+ - 1) m^2 + 1)
//     decreasing in m, and upper envelope case2_d_plus() = (c+ + 1)^2 / 2.
// Then k2 = max(case2_d_minus, case1_c) and k3 = max(case2_d_plus, 2).
//
// Everything is computed, not hard-coded, so the re-derivation check in the
// asymptotics component can compare an independent grid scan against these
// exact expressions.

#include <cmath>

namespace qpc::constants {

inline double k1() {
  const double e2pi = std::exp(2.0 * M_PI);
  return std::exp(-2.0 * M_PI) / (2.0 * e2pi + 2.0);
}

// Normalization constant of the zero-free factorization: each removed factor
// (e^{2pi i z} - e^{2pi i z_k}) is bounded by 2e^{2pi} + 2 on a unit strip,
// which is why the factorization carries this weight per zero.  Strip heights
// are restricted to (0, 1) throughout the library so the bound applies.
inline double zero_factor_norm() { return 2.0 * std::exp(2.0 * M_PI) + 2.0; }

inline double cone_cplus() {
  const double s5 = std::sqrt(5.0);
  return (s5 + 1.0) / (s5 - 1.0);
}

inline double pivot_m() { return (std::sqrt(5.0) + 3.0) / 2.0; }

// sup over 2 < m <= pivot of  m^2 (m-1) / (m^2 - 2(m-1)) + (log 2 / 2) m^2,
// attained at the pivot (the expression is increasing on the interval).
inline double case1_c_at(double m) {
  return m * m * (m - 1.0) / (m * m - 2.0 * (m - 1.0)) + 0.5 * std::log(2.0) * m * m;
}
inline double case1_c() { return case1_c_at(pivot_m()); }

inline double case2_F(double m) {
  const double cp = cone_cplus();
  const double m2 = m * m, m4 = m2 * m2;
  return ((2.0 * cp - 1.0) * m4 - m2) / (m4 - (2.0 * cp - 1.0) * m2 + 1.0);
}
inline double case2_d_minus_at(double m) {
  const double cp = cone_cplus();
  return 0.5 * (cp * cp + case2_F(m));
}
inline double case2_d_minus() { return case2_d_minus_at(pivot_m()); }

inline double case2_d_plus() {
  const double cp = cone_cplus();
  return 0.5 * (cp + 1.0) * (cp + 1.0);
}

inline double k2() { return std::max(case2_d_minus(), case1_c()); }
inline double k3() { return std::max(case2_d_plus(), 2.0); }

}  // namespace qpc::constants
