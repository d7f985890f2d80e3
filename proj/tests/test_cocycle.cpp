//
// Transfer-matrix engine: invariants of the products (unit determinant,
// overflow-safe norms), closed-form Lyapunov values, estimator behavior,
// finite-difference acceleration, and the dominated-splitting checks.

#include <cmath>
#include <complex>

#include "doctest.h"
#include "qpcocycle/cocycle.hpp"

using namespace qpc;

namespace {
const double kConstantLe = std::log((3.0 + std::sqrt(5.0)) / 2.0);
}

TEST_CASE("transfer matrices have unit determinant") {
  const CocycleSpec spec(golden_mean(), 2.0, 0.7, FourierPotential::preset("amo"), 0.1);
  for (double x : {0.0, 0.21, 0.55, 0.93}) {
    const Matrix2c a = transfer_matrix(spec, x);
    CHECK(std::abs(a.det() - Complex(1.0, 0.0)) < 1e-12);
  }
}

TEST_CASE("operator norm survives entries near the renormalization ceiling") {
  // rank-one matrix with Frobenius norm 1.6e154: the naive formula squares it
  // and overflows; the rescaled evaluation must return the exact value.
  const Complex big(8e153, 0.0);
  const Matrix2c m{big, big, big, big};
  CHECK(std::isfinite(m.operator_norm()));
  CHECK(m.operator_norm() == doctest::Approx(1.6e154).epsilon(1e-12));

  const Matrix2c d{Complex(1e150, 0.0), Complex(0, 0), Complex(0, 0), Complex(1e-150, 0.0)};
  CHECK(d.operator_norm() == doctest::Approx(1e150).epsilon(1e-12));

  const Matrix2c id{Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(1, 0)};
  CHECK(id.operator_norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(Matrix2c{}.operator_norm() == 0.0);
}

TEST_CASE("frequency guard flags shallow rationals and clears the golden mean") {
  const FrequencyGuard golden = frequency_guard(golden_mean());
  CHECK(golden.denominator == 832040);
  CHECK_FALSE(golden.near_rational_warning);

  const FrequencyGuard half = frequency_guard(0.5);
  CHECK(half.denominator == 2);
  CHECK(half.near_rational_warning);
}

TEST_CASE("spec construction validates the strip offset and fills the guard") {
  const FourierPotential p = FourierPotential::preset("amo");
  const CocycleSpec spec(golden_mean(), 3.0, 1.0, p, 0.0);
  CHECK_FALSE(spec.guard.near_rational_warning);
  const CocycleSpec lifted = spec.with_height(0.1);
  CHECK(lifted.y == doctest::Approx(0.1));
  CHECK(lifted.lambda == doctest::Approx(3.0));
  CHECK_THROWS_AS(CocycleSpec(golden_mean(), 1.0, 0.0, p, 0.7), ContractError);
  CHECK_THROWS_AS(spec.with_height(0.7), ContractError);
}

TEST_CASE("single-step log-norm matches the direct matrix norm") {
  const CocycleSpec spec(golden_mean(), 5.0, 1.3, FourierPotential::preset("amo"), 0.0);
  const double x = 0.37;
  CHECK(cocycle_product_lognorm(spec, x, 1) ==
        doctest::Approx(std::log(transfer_matrix(spec, x).operator_norm())).epsilon(1e-12));
}

TEST_CASE("zero coupling at E = 3 gives the constant-matrix exponent") {
  const CocycleSpec spec(golden_mean(), 0.0, 3.0, FourierPotential::preset("amo"), 0.0);
  const LyapunovEstimate est = lyapunov_exponent(spec, 2000, 16);
  CHECK(est.value == doctest::Approx(kConstantLe).epsilon(1e-6));
  CHECK(est.spread < 1e-3);
}

TEST_CASE("free cocycle has exactly zero exponent") {
  const CocycleSpec spec(golden_mean(), 0.0, 0.0, FourierPotential::preset("amo"), 0.0);
  const LyapunovEstimate est = lyapunov_exponent(spec, 500, 4);
  CHECK(std::abs(est.value) < 1e-12);
  CHECK(est.spread < 1e-12);
}

TEST_CASE("cosine exponent at large coupling approaches log lambda") {
  const CocycleSpec spec(golden_mean(), 40.0, 0.0, FourierPotential::preset("amo"), 0.0);
  const LyapunovEstimate est = lyapunov_exponent(spec, 4000, 64);
  CHECK(std::abs(est.value - std::log(40.0)) < 1e-3);
}

TEST_CASE("cosine exponent inside the spectrum at lambda = 2 is log 2") {
  const CocycleSpec spec(golden_mean(), 2.0, 0.5, FourierPotential::preset("amo"), 0.0);
  const LyapunovEstimate est = lyapunov_exponent(spec, 2000, 32);
  CHECK(std::abs(est.value - std::log(2.0)) < 5e-3);
  CHECK(est.value > -1e-4);
}

TEST_CASE("two-depth averages are subadditive") {
  const LyapunovEstimate noisy =
      lyapunov_exponent(CocycleSpec(golden_mean(), 40.0, 0.0, FourierPotential::preset("amo"), 0.0),
                        2000, 64);
  CHECK(noisy.l_2n <= noisy.l_n + 1e-6);
  const LyapunovEstimate constant =
      lyapunov_exponent(CocycleSpec(golden_mean(), 0.0, 3.0, FourierPotential::preset("amo"), 0.0),
                        2000, 16);
  CHECK(constant.l_2n <= constant.l_n + 1e-9);
}

TEST_CASE("complexified profile is convex and exactly even") {
  const CocycleSpec spec(golden_mean(), 40.0, 0.0, FourierPotential::preset("amo"), 0.0);
  const double heights[] = {-0.12, -0.06, 0.0, 0.06, 0.12};
  const CocycleProfile prof = complexified_profile(spec, heights, 4000, 64);
  REQUIRE(prof.entries.size() == 5);
  CHECK(prof.convex_ok);
  CHECK(prof.convexity_defect > -5e-4);
  CHECK(prof.evenness_checked);
  // conjugation symmetry of the products makes L(y) and L(-y) bit-identical
  CHECK(prof.evenness_defect == 0.0);
}

TEST_CASE("acceleration at a safe height quantizes to the band zero count") {
  const CocycleSpec spec(golden_mean(), 100.0, 0.0, FourierPotential::preset("amo"), 0.0);
  const AccelerationEstimate acc = acceleration(spec, 0.05, 5e-3, 1000, 32);
  CHECK(acc.quantized == 1);
  CHECK(acc.residual < 1e-6);
  CHECK_FALSE(acc.suspicious);
}

TEST_CASE("acceleration rejects oversized steps and uncertifiable estimates") {
  const CocycleSpec spec(golden_mean(), 40.0, 0.7, FourierPotential::preset("amo"), 0.0);
  CHECK_THROWS_AS(acceleration(spec, 0.05, 0.02, 500, 8), ContractError);
  // depth 64 leaves the estimator spread far above 0.1 * 2 pi t at t = 1e-4
  CHECK_THROWS_AS(acceleration(spec, 0.0, 1e-4, 64, 4), PrecisionError);
}

TEST_CASE("dominated splitting at m = 8 certifies the two-sided bounds") {
  const CocycleSpec spec(golden_mean(), 1.0, 10.0, FourierPotential::preset("amo"), 0.0);
  const DominatedSplittingReport rep = dominated_splitting_check(spec, true, 2048, 32);
  CHECK(rep.dominated);
  CHECK(rep.m_g == doctest::Approx(8.0).epsilon(1e-6));
  CHECK(rep.measured);
  CHECK(rep.bounds_ok_antisym);
  CHECK(rep.bounds_ok_sym);
  CHECK(rep.k_bound_ok);
  CHECK(rep.le_lower <= rep.le_antisym.value + 1e-3);
  CHECK(rep.le_antisym.value <= rep.le_upper + 1e-3);
}

TEST_CASE("dominated splitting is honest about m <= 2 and rejects lambda = 0") {
  const DominatedSplittingReport rep = dominated_splitting_check(
      CocycleSpec(golden_mean(), 1.0, 0.0, FourierPotential::preset("amo"), 0.0), false);
  CHECK_FALSE(rep.dominated);
  CHECK(rep.m_g < 1e-4);
  CHECK_THROWS_AS(dominated_splitting_check(
                      CocycleSpec(golden_mean(), 0.0, 5.0, FourierPotential::preset("amo"), 0.0)),
                  ContractError);
}

TEST_CASE("generic cocycle estimator is exact for a constant diagonal map") {
  const auto est = generic_lyapunov(
      [](double) {
        return Matrix2c{Complex(2.0, 0.0), Complex(0.0, 0.0), Complex(0.0, 0.0),
                        Complex(0.5, 0.0)};
      },
      golden_mean(), 100, 2);
  CHECK(est.value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}
