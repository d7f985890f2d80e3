#pragma once
//
// Zeros of f - mu on the strip, zero-free factorization, and the scan-derived
// quantities N_hat / beta_hat that drive the asymptotic constants.
//
// The substitution w = e^{2 pi i z} turns f(z) - mu into w^{-d} P(w) with
// P a polynomial of degree <= 2d.  Every nonzero root w_j of P corresponds to
// one zero z_j of f - mu per period, with Im z_j = -log|w_j| / (2 pi).  A
// ZeroSet keeps the full cylinder root list (any height), the leading
// coefficient and the w-power offset, which together give the exact product
// representation
//     f(z) - mu = a * w^{q} * prod_j (w - w_j)^{m_j},   q = s - d,
// used by the zero-free part, the height-resolved counting and the closed-form
// log-integrals downstream.

#include <complex>
#include <functional>
#include <vector>

#include "qpcocycle/potential.hpp"

namespace qpc {

struct Zero {
  Complex z;         // fundamental domain: 0 <= Re z < 1
  int multiplicity;  // >= 1
};

class ZeroSet {
 public:
  ZeroSet(FourierPotential potential, Complex mu, std::vector<Zero> zeros, Complex leading_coeff,
          int power_offset, double max_residual);

  const FourierPotential& potential() const { return potential_; }
  Complex mu() const { return mu_; }
  const std::vector<Zero>& zeros() const { return zeros_; }  // all heights, sorted by Im z
  Complex leading_coeff() const { return leading_coeff_; }
  int power_offset() const { return power_offset_; }         // exponent q of the w^q prefactor
  int total_multiplicity() const;                            // sum of multiplicities
  double max_residual() const { return max_residual_; }      // max |f(z_j) - mu|

  std::vector<Zero> zeros_in_strip(double height) const;     // |Im z| <= height

  // Product-form evaluation of f(z) - mu from the stored factorization; used
  // for reconstruction checks against the coefficient evaluation.
  Complex eval_from_factorization(Complex z) const;

 private:
  FourierPotential potential_;
  Complex mu_;
  std::vector<Zero> zeros_;
  Complex leading_coeff_;
  int power_offset_;
  double max_residual_;
};

// Companion-matrix roots of w^d (f - mu) with Newton polish and multiplicity
// clustering (radius 1e-7).  Residuals are certified against
// 1e-8 * (1 + sup|f| on the strip); f identically equal to mu is degenerate.
ZeroSet laurent_roots(const FourierPotential& p, Complex mu);

struct HeightInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;
};

// Multiplicity-weighted count of zeros with Im z in the interval.  The
// interval must stay inside [-h, h]; endpoint membership follows the closure
// flags so that N_[a,b], the open variant and half-open bands (y, h] are all
// expressible.
int count_zeros(const ZeroSet& zs, const HeightInterval& band);
int count_zeros_closed(const ZeroSet& zs, double lo, double hi);

// Zero-free part at level 2*epsilon:
//     g(z) = (2 e^{2 pi} + 2)^{n_tilde} * (f(z) - mu) / prod_in (w - w_j)^{m_j},
// the product running over zeros with |Im z_j| < 2 epsilon ("n_tilde" of
// them).  Evaluation uses the deflated product form, so it is finite and
// stable at and near the removed zeros.
Complex zero_free_part_eval(const ZeroSet& zs, double epsilon, Complex z);

// Multiplicity count of the zeros removed at level 2*epsilon (open strip).
int removed_zero_count(const ZeroSet& zs, double epsilon);

struct BetaOptions {
  int phase_grid = 1024;
  int height_grid = 65;
  int refine_factor = 32;  // refinement multiplier around the best grid cell
};

// beta_rho(f - mu) = min over the closed strip T_rho of |g_{2 rho}(f - mu)|.
// Requires 2 rho <= h.  Grid minimization with one refinement pass.
double beta(const FourierPotential& p, Complex mu, double rho, const BetaOptions& opt = {});

struct MuScanPoint {
  double mu = 0.0;
  int count = 0;       // N_{2 rho}(f - mu), closed strip
  double beta = 0.0;   // beta_rho(f - mu)
};

struct HatQuantities {
  double rho = 0.0;
  int n_hat = 0;               // max over mu of N_{2 rho}(f - mu)
  double beta_hat = 0.0;       // min over mu of beta_rho(f - mu)
  double witness_mu_count = 0.0;
  double witness_mu_beta = 0.0;
  std::vector<MuScanPoint> scan;  // ordered by mu; includes refinement points
};

struct HatScanOptions {
  int grid = 401;            // uniform scan points across the certified range
  double jump_tol = 1e-6;    // bisection width at count discontinuities
  BetaOptions beta_options{};
};

// Scans mu over [min f - 1, max f + 1] widened to +-sup_{T_{2 rho}}|f| (beyond
// which f - mu cannot vanish on the closed 2 rho strip, so the scan range is
// certified), augmented by all critical values of f, with bisection refinement
// at every count jump.  Parallel over mu with deterministic reduction.
HatQuantities hat_quantities(const FourierPotential& p, double rho, const HatScanOptions& opt = {});

struct WindingDiagnostics {
  int samples = 0;
  double residue = 0.0;   // distance of the raw winding sum from the integer
  double min_abs = 0.0;   // smallest |curve| sample seen
};

// Winding number of a closed curve t in [0,1) -> C about 0, by adaptive
// refinement until all consecutive argument increments are below pi/2.
// Throws NumericError when the curve approaches 0 or the residue exceeds 0.05.
int winding_number(const std::function<Complex(double)>& curve, WindingDiagnostics* diag = nullptr,
                   int initial_samples = 256, int max_samples = 1 << 20);

}  // namespace qpc
