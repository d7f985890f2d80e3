#pragma once
//
// Height profile of the averaged log-modulus
//     I[f - mu](y) = integral over x in [0,1) of log|f(x + iy) - mu| dx
// and its normalized right slope, the acceleration
//     omega(y) = (1/(2 pi)) * d^+/dy I(y).
//
// I is piecewise affine in y with breakpoints exactly at the zero heights:
// from the product representation f - mu = a w^q prod (w - w_j)^{m_j} and the
// circle average  integral log|r e^{2 pi i x} - w_j| dx = log max(r, |w_j|),
//     I(y) = log|a| - 2 pi y q + sum_j m_j log max(e^{-2 pi y}, |w_j|).
// Consequently omega takes half-integer values, is nondecreasing and
// right-continuous, and for real-analytic data equals half the zero count of
// the symmetric band (-y, y].  Values of 2*omega are stored as exact integers.

#include <span>
#include <string>
#include <vector>

#include "qpcocycle/zero_analysis.hpp"

namespace qpc {

// Closed-form I[f - mu](y) from the Laurent roots.  The sign conventions are
// validated once per process against the quadrature oracle on three fixed
// cases and then frozen; a mismatch aborts with NumericError.
double jensen_integral(const FourierPotential& p, Complex mu, double y);
double jensen_integral(const ZeroSet& zs, double y);

// Periodic-trapezoid oracle (default 512 points).  Refuses heights closer
// than margin to any zero height, where the integrand loses analyticity.
double jensen_integral_quadrature(const FourierPotential& p, Complex mu, double y, int points = 512,
                                  double margin = 1e-3);

struct AccelerationValue {
  int two_omega = 0;           // 2 * omega(y), exact integer
  bool at_breakpoint = false;  // y coincides with a zero height (right limit taken)
  double finite_difference = 0.0;  // (I(y + t) - I(y)) / (2 pi t) diagnostic
};

// Acceleration via the zero count:  2 omega(y) = N_{(-y, y]} for real-analytic
// f - mu and y >= 0; at y = 0 right-continuity gives the axis zero count.
// Negative y uses oddness.  The finite-difference diagnostic (t = 1e-4) must
// agree within 1e-6 whenever y + t stays below the next zero height.
AccelerationValue acceleration_functional(const FourierPotential& p, double mu, double y);

// General route, valid for complex shifts: 2 omega(y) = 2 * (-ind - N_(y, h])
// where ind is the winding number about 0 of the level-h zero-free part along
// the real axis, and N counts zeros strictly above height y up to h.
int two_omega_general(const FourierPotential& p, Complex mu, double y);

// Winding route at a specific height: 2 omega(y) = -2 * ind of (f - mu) along
// Im z = y, valid inside any zero-height-free band containing y.
int two_omega_winding_at(const FourierPotential& p, Complex mu, double y);

struct ProfilePoint {
  double y = 0.0;
  double value = 0.0;        // I(y)
  int two_omega = 0;
  std::string method;        // "roots" or "quadrature"
};

struct JensenProfile {
  std::vector<ProfilePoint> points;  // ordered by y
};

// Profile over the supplied heights using the closed form.  Checks convexity
// (second differences >= -1e-9 after width normalization) and, for
// real-analytic data, evenness of I.
JensenProfile jensen_profile(const FourierPotential& p, double mu, std::span<const double> heights);

struct SlopeQuantizationReport {
  struct Row {
    double y = 0.0;
    int two_omega_count = 0;      // zero-count route
    int two_omega_general = 0;    // zero-free winding + band count route
    int two_omega_winding = 0;    // direct winding at height y
    double finite_difference = 0.0;
    bool agree = false;
  };
  std::vector<Row> rows;
  bool all_agree = false;
};

// Three-way agreement of the acceleration routes plus the finite-difference
// slope on the supplied heights (each must avoid zero heights).
SlopeQuantizationReport verify_slope_quantization(const FourierPotential& p, double mu,
                                                  std::span<const double> heights);

}  // namespace qpc
