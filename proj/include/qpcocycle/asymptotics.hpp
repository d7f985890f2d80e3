#pragma once
//
// Large-coupling envelope for the Lyapunov exponent of Schrodinger cocycles,
//     L(alpha, lambda, E) = log|lambda| + I[E/lambda - f](0) + error,
//     |error| <= C(f, rho) * |lambda|^{-2/(2N+1)},
// with every constant explicit and checkable:
//   N      = max over real shifts mu of the zero count of f - mu on the
//            closed strip of half-width 2 rho (from the mu scan),
//   lambda0 = 2^{2N+1}   (validity threshold),
//   K1     = e^{-2 pi} / (2 e^{2 pi} + 2)   (uniform-height-floor constant),
//   C      = 2 N^2 K1^{-1} beta_hat^{-1/N} pi + K2.
// The proof pipeline behind the envelope is executed verbatim as cross-checks:
// a working height y* with min_x |lambda f(x+iy*) - E| > 2, the factorization
// L(A; y*) = log|lambda| + I(y*) + L(D; y*), two-sided dominated-splitting
// bounds on L(D), and the convexity extrapolation back to the axis.  A second
// family of checks covers the stratified variant (mu confined to an interval
// avoiding critical values of f) and the geometric radii that control the
// zero set of a real-analytic function near the axis.

#include <string_view>
#include <vector>

#include "qpcocycle/cocycle.hpp"
#include "qpcocycle/jensen.hpp"
#include "qpcocycle/zero_analysis.hpp"

namespace qpc {

enum class CheckStatus { pass, fail, inconclusive };
std::string_view to_string(CheckStatus s);

// ---------------------------------------------------------------------------
// envelope constants
// ---------------------------------------------------------------------------

struct EnvelopeConstants {
  double rho = 0.0;
  int n = 0;              // strip-zero bound N (closed strip, half-width 2 rho)
  double lambda0 = 0.0;   // 2^{2N+1}, exact
  double k1 = 0.0;        // e^{-2 pi} / (2 e^{2 pi} + 2)
  double beta_hat = 0.0;  // min over mu of the zero-free-part floor at rho
  double big_c = 0.0;     // 2 N^2 k1^{-1} beta_hat^{-1/N} pi + K2, exact from parts

  double rate(double lambda) const;      // |lambda|^{-2/(2N+1)}
  double delta_of(double lambda) const;  // N k1^{-1} beta_hat^{-1/N} rate(lambda)
};

// Requires a nonconstant real-analytic potential and 0 < rho < min(h,1)/2.
EnvelopeConstants envelope_constants(const FourierPotential& p, double rho,
                                     const HatScanOptions& scan = {});

// ---------------------------------------------------------------------------
// uniform height floor (the lower bound behind the working-height search)
// ---------------------------------------------------------------------------

struct HeightFloorCheck {
  double bound = 0.0;         // beta_hat * (K1 delta / N)^N
  bool verified = false;      // brute-force LHS >= bound for every scanned mu
  double worst_margin = 0.0;  // min over mu of (LHS - bound)
  double worst_mu = 0.0;
  int mu_grid = 0;
  bool degenerate = false;    // constant potential: vacuous, skipped
};

// For every mu on a grid over the admissible range, the best height
// y in [delta/2, delta] must satisfy min_x |f(x+iy) - mu| >= bound.
// Requires 0 < delta < rho < min(h,1)/2.
HeightFloorCheck height_floor_check(const FourierPotential& p, double rho, double delta,
                                    int mu_grid = 101, int height_grid = 33,
                                    int phase_grid = 1024);

// ---------------------------------------------------------------------------
// working height
// ---------------------------------------------------------------------------

struct WorkingHeight {
  double y_star = 0.0;       // midpoint of the maximal admissible sub-band
  double band_lo = 0.0;      // maximal sub-band of [delta/2, delta] with
  double band_hi = 0.0;      //   min_x |lambda f(x+iy) - E| > 2 throughout
  double min_modulus = 0.0;  // min_x |lambda f(x + i y_star) - E|
};

// Scans y in [delta/2, delta] (65 points, refined at the edges) and returns
// the maximal sub-band where min_x |lambda f(x+iy) - E| > 2.  Requires
// |lambda| > constants.lambda0; an empty band throws NumericError with
// diagnostics, since the height-floor bound guarantees existence.
WorkingHeight find_working_height(const EnvelopeConstants& constants, const FourierPotential& p,
                                  double lambda, double energy, double delta);

// ---------------------------------------------------------------------------
// envelope certificate
// ---------------------------------------------------------------------------

struct PipelineChecks {
  double delta_theoretical = 0.0;  // delta_of(lambda)
  double delta_effective = 0.0;    // min(delta_theoretical, 3 rho / 4): scale used
  bool delta_clamped = false;

  WorkingHeight height;
  double floor_bound = 0.0;  // |lambda| * beta_hat * (K1 delta_eff / N)^N
  bool floor_ok = false;     // min_modulus >= floor_bound
  bool rate_floor_ok = false;  // min_modulus >= |lambda|^{1/(2N+1)}

  DominatedSplittingReport splitting;  // at y*, both sign conventions measured

  double le_axis = 0.0, le_axis_spread = 0.0;          // L(0)
  double le_height = 0.0, le_height_spread = 0.0;      // L(y*)
  double jensen_height = 0.0;                          // I[E/lambda - f](y*)
  double d_value = 0.0, d_spread = 0.0;                // L(D; y*), factorized cocycle
  double factorization_gap = 0.0;                      // |L(y*) - log lambda - I - L(D)|
  double factorization_tol = 0.0;
  bool factorization_ok = false;

  double d_envelope = 0.0;       // max(K2, K3) / min_modulus^2
  bool d_bound_ok = false;       // |L(D)| <= d_envelope + tol
  double d_rate_envelope = 0.0;  // K2 * rate(lambda)
  bool d_rate_ok = false;

  int two_omega_height = 0;   // exact slope count at y*
  bool omega_attempted = false;
  bool omega_match = false;   // cocycle finite-difference slope at y* agrees

  double extrapolation_gap = 0.0;    // |L(0) - L(y*)|
  double extrapolation_bound = 0.0;  // pi * two_omega * y* + spreads + slack
  bool extrapolation_ok = false;

  bool all_ok = false;
};

struct AsymptoticsCertificate {
  EnvelopeConstants constants;
  double lambda = 0.0;
  double energy = 0.0;
  double predicted = 0.0;  // log|lambda| + I[E/lambda - f](0)
  double measured = 0.0;   // L at y = 0
  double residual = 0.0;
  double bound = 0.0;      // big_c * rate(lambda)
  double spread = 0.0;     // axis estimator spread
  CheckStatus status = CheckStatus::fail;  // pass / fail / inconclusive
  bool pass = false;
  PipelineChecks pipeline;
};

struct CertificateOptions {
  long n = 10000;
  int phases = 256;
  bool run_pipeline = true;
  bool measure_omega = true;  // finite-difference slope match at y* (two extra LE runs)
};

// The full certificate: predicted vs measured with the explicit bound, plus
// the proof-pipeline cross-checks at the effective working scale
// min(delta_of(lambda), 3 rho / 4), clamped so the height-floor hypothesis
// delta < rho stays satisfied at desk-scale couplings.  Requires
// |lambda| > lambda0.  "inconclusive" means the bound is smaller than 3x the
// estimator spread.
AsymptoticsCertificate verify_asymptotics(const FourierPotential& p, double alpha, double lambda,
                                          double energy, const EnvelopeConstants& constants,
                                          const CertificateOptions& opt = {});

// ---------------------------------------------------------------------------
// acceleration upper bound
// ---------------------------------------------------------------------------

struct AccelerationBoundReport {
  bool skipped = false;          // constant potential: vacuous
  int n = 0;                     // strip-zero bound N
  int measured_two_omega = 0;    // quantized 2 omega at y = 0 (right difference)
  double measured_residual = 0.0;
  long depth_used = 0;           // estimator depth after precision retries
  int sup_two_omega = 0;         // exact count: 2 * sup over y in [0, rho] of omega
  bool measured_ok = false;      // measured_two_omega <= n
  bool sup_ok = false;           // sup_two_omega <= n
  bool chain_ok = false;         // measured <= sup <= n
};

// Checks the chain  omega(0) <= sup_y omega[E/lambda - f](y) <= N/2: the first
// term measured from the cocycle, the middle term from exact zero counts.
// Requires |lambda| >= lambda0.
AccelerationBoundReport acceleration_bound_check(const FourierPotential& p, double alpha,
                                                 double lambda, double energy,
                                                 const EnvelopeConstants& constants,
                                                 long n = 10000, int phases = 256,
                                                 double t = 1e-2);

// ---------------------------------------------------------------------------
// zero-set geometry (single function)
// ---------------------------------------------------------------------------

struct EtaCheck {
  double delta = 0.0;
  double eta = 0.0;       // (delta/2)^{N} * min over the delta-strip of |g|
  double grid_min = 0.0;  // brute-force min |f| over {x, delta/2 <= y <= delta}
  bool ok = false;        // grid_min >= eta
};

struct ZeroSetGeometry {
  bool applicable = false;           // f has zeros on the axis
  std::vector<double> real_zeros;    // distinct representatives, ascending
  std::vector<int> zero_orders;      // multiplicities n_j
  int n_real = 0;                    // N = sum n_j
  double tau = 0.0;                  // min_j |f^{(n_j)}(x_j)| / n_j!
  double sup_norm = 0.0;             // sup |f| on the full strip
  double zeta = 0.0;                 // h theta(tau h^N): zero-free punctured disks
  double beta = 0.0;                 // axis floor of the monomial-free factor g
  double gamma = 0.0;                // h theta(beta zeta^N): off-zero disks
  double radius = 0.0;               // zeta gamma / sqrt(zeta^2 + gamma^2)
  double domain_origin = 0.0;        // fundamental-domain shift for the factorization
  std::vector<EtaCheck> eta_checks;  // delta in {R/4, R/2, R}
  bool eta_ok = false;               // all grid checks hold
};

// Quantifies how far the zero set of f reaches into the strip: punctured-disk
// radius zeta around each real zero from the transversality modulus tau, disk
// radius gamma elsewhere from the axis floor beta of the zero-free factor in
//     f(z) = g(z) * prod_j (z - x_j)^{n_j}
// (monomial factorization on a fundamental domain), their overlap radius R,
// and the resulting floor eta(delta) = (delta/2)^N min_{|Im z| <= delta} |g|,
// verified by brute force on a 1024 x 64 grid for delta in {R/4, R/2, R}.
// Requires a nonzero real-analytic potential; no real zeros => inapplicable.
ZeroSetGeometry zero_set_geometry(const FourierPotential& p);

// ---------------------------------------------------------------------------
// stratified variant: mu confined to an interval avoiding critical values
// ---------------------------------------------------------------------------

struct StratumQuantities {
  double mu1 = 0.0, mu2 = 0.0;
  int n0 = 0;                       // axis zero count of f - mu, constant on the stratum
  std::vector<int> sampled_counts;  // 11 sampled mu values
  bool count_constant = false;
  double tau0 = 0.0;      // min |f'| over the preimage f^{-1}([mu1, mu2])
  double m0 = 0.0;        // max over mu of the strip sup-norm of f - mu
  double beta0 = 0.0;     // min over mu of the axis floor of g_mu
  double zeta0 = 0.0;     // h theta_{M0}(tau0 h^{N0})
  double gamma0 = 0.0;    // h theta_{M0}(beta0 zeta0^{N0})
  double r0 = 0.0;        // zeta0 gamma0 / sqrt(zeta0^2 + gamma0^2)
  double beta_hat = 0.0;  // min over mu of min over the R0-strip of |g_mu|
  double eta_at_r0 = 0.0;           // beta_hat * (R0/2)^{N0}
  double lambda_tilde = 0.0;        // max(2^{N0} beta_hat, R0^{-1/2})^{2N0+1}
  std::vector<EtaCheck> floor_checks;  // per sampled mu at delta = R0
  bool floor_ok = false;
};

// Requires [mu1, mu2] inside the closed range of f with distance > 1e-9 from
// every critical value of f; violations are contract errors.
StratumQuantities stratum_quantities(const FourierPotential& p, double mu1, double mu2);

struct StratifiedCell {
  double mu = 0.0;
  double energy = 0.0;
  double predicted = 0.0;   // log lambda + I[mu](0)
  double measured = 0.0;    // L at y = 0
  double residual = 0.0;
  double bound = 0.0;       // (2 N0 pi + K2) * lambda^{-2/(2N0+1)}
  double spread = 0.0;
  CheckStatus status = CheckStatus::fail;
  int measured_two_omega = 0;       // quantized at y = 0
  bool omega_ok = false;            // measured_two_omega <= n0
};

struct StratifiedReport {
  StratumQuantities stratum;
  double lambda = 0.0;
  double delta = 0.0;               // lambda^{-2/(2N0+1)}
  bool lambda_above_threshold = false;  // lambda > lambda_tilde
  double band_lo = 0.0, band_hi = 0.0;  // joint band over all requested cells
  bool band_nonempty = false;
  std::vector<StratifiedCell> cells;
  bool conclusions_pass = false;    // all cells pass and the band is nonempty
  bool all_pass = false;            // conclusions + threshold hypothesis
};

struct StratifiedOptions {
  long n = 10000;
  int phases = 256;
  bool allow_below_threshold = false;  // run conclusions even when
                                       // lambda <= lambda_tilde (reported honestly)
};

// Envelope with the stratified constants: for each mu in the list, residual of
// L = log lambda + I[mu](0) against (2 N0 pi + K2) lambda^{-2/(2N0+1)}, the
// measured slope bound 2 omega(0) <= N0, and one joint working band
// (delta/2, delta), delta = lambda^{-2/(2N0+1)}, valid for every cell at once.
// lambda <= lambda_tilde throws ContractError unless allow_below_threshold.
StratifiedReport verify_stratified(const FourierPotential& p, double alpha, double lambda,
                                   double mu1, double mu2, std::span<const double> mu_list,
                                   const StratifiedOptions& opt = {});

// ---------------------------------------------------------------------------
// numerical re-derivation of the splitting-envelope constants
// ---------------------------------------------------------------------------

struct ConstantRederivation {
  double case1_c = 0.0;        // sup over (2, k] of the sigma = 1 envelope
  double case1_argmax = 0.0;   // attained at m = k = (sqrt 5 + 3)/2
  double case2_d_minus = 0.0;  // (c_+^2 + sup F) / 2 over [k, m_max]
  double case2_d_plus = 0.0;   // (c_+ + 1)^2 / 2
  double k2 = 0.0;             // max(d_-, c)
  double k3 = 0.0;             // max(d_+, 2)
  bool envelope_verified = false;  // -K2/m^2 <= exact bounds <= K3/m^2 on the grid
  double worst_margin = 0.0;
  bool matches_closed_forms = false;  // vs the closed forms in constants.hpp, 5e-4
};

// Reproduces the two-case optimization behind K2 and K3 on a dense grid
// m in (2, m_max] (default 1e5 points, extra refinement near the case pivot)
// and verifies that the resulting +-K/m^2 envelopes really contain the exact
// exact two-sided dominated-splitting bounds at every grid point.
ConstantRederivation rederive_envelope_constants(int grid = 100000, double m_max = 50.0);

}  // namespace qpc
