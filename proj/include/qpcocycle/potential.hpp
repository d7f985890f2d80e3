#pragma once
//
// Trigonometric polynomials f(z) = sum_{k=-d}^{d} c_k e^{2 pi i k z} viewed as
// analytic functions on the closed strip  T_h = { x + iy : x in R/Z, |y| <= h }.
//
// This is the input type for everything else in the library: potentials of
// quasi-periodic Schrodinger cocycles, shifted copies f - mu handed to the
// zero analysis, and derivative series used for critical points.  Strip
// heights are restricted to (0, 1); the zero-free factorization used
// downstream normalizes each removed factor on a unit strip, so taller strips
// would need a different normalization.

#include <complex>
#include <string_view>
#include <tuple>
#include <vector>

#include "qpcocycle/errors.hpp"

namespace qpc {

using Complex = std::complex<double>;

class FourierPotential {
 public:
  // coeffs has size 2*degree + 1 and is indexed by k + degree.
  FourierPotential(int degree, std::vector<Complex> coeffs, double strip_height);

  // Named presets: "amo" (c_{+-1} = 1, h = 0.5, i.e. f = 2 cos 2 pi z) and
  // "bichromatic" (c_{+-1} = 1, c_{+-2} = 0.5, h = 0.5).
  static FourierPotential preset(std::string_view name);

  // Builds from (k, Re c_k, Im c_k) triples as accepted by config files.
  // Duplicate k entries are a contract violation.
  static FourierPotential from_triples(const std::vector<std::tuple<int, double, double>>& triples,
                                       double strip_height);

  int degree() const { return degree_; }
  double strip_height() const { return strip_height_; }
  Complex coeff(int k) const;                      // 0 outside [-degree, degree]
  const std::vector<Complex>& coeffs() const { return coeffs_; }

  // True when c_{-k} = conj(c_k) for all k, i.e. f is real on the real axis.
  bool real_analytic(double tol = 1e-13) const;

  // True when all coefficients with k != 0 vanish (f identically constant).
  bool is_constant() const;

  Complex eval(Complex z) const;                   // throws StripDomainError outside T_h
  double eval_real(double x) const;                // real-analytic fast path on the axis

  FourierPotential derivative() const;             // coefficients 2 pi i k c_k
  FourierPotential shifted(Complex mu) const;      // f - mu
  FourierPotential negated() const;                // -f

  // sum_k |c_k| e^{2 pi |k| height}: cheap upper bound for sup_{T_height} |f|.
  double coeff_bound(double height) const;

 private:
  int degree_;
  std::vector<Complex> coeffs_;
  double strip_height_;
};

struct PotentialStats {
  double min_torus = 0.0;                 // min of f on the real axis
  double max_torus = 0.0;                 // max of f on the real axis
  double probe_height = 0.0;
  double sup_norm = 0.0;                  // sup |f| on T_{probe_height}
  std::vector<double> critical_points;    // in [0, 1), sorted
  std::vector<double> critical_values;    // f at critical points, deduplicated, sorted
};

// Torus extrema via critical points of the derivative series (grid-validated),
// plus the sup-norm of |f| on the requested strip via boundary-line scan with
// one local refinement pass.  Requires a real-analytic potential for the
// min/max/critical-value part.
PotentialStats stats(const FourierPotential& p, double probe_height = 0.0);

// Sup of |f| on the boundary lines Im z = +-height (equals sup over the whole
// sub-strip by the maximum principle).  Works for arbitrary coefficients.
double sup_norm_at(const FourierPotential& p, double height);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Energies outside this window (in units of mu = E / lambda) are spectrum-free
// for coupling lambda: mu in [-2/|lambda| + min f, 2/|lambda| + max f].
Interval admissible_energy_interval(const FourierPotential& p, double lambda);

}  // namespace qpc
