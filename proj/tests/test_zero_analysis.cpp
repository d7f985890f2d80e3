//
// Strip zeros and factorization: root finding against hand-solved cases,
// reconstruction from the product form, height-resolved counting, the
// zero-free floor beta, and the mu-scan quantities.

#include <cmath>
#include <complex>

#include "doctest.h"
#include "qpcocycle/zero_analysis.hpp"

using namespace qpc;

namespace {
constexpr double kPi = 3.14159265358979323846;
const double kGoldenZeroHeight = std::log((3.0 + std::sqrt(5.0)) / 2.0) / (2.0 * kPi);
}  // namespace

TEST_CASE("cosine zeros at mu = 0 sit on the axis at x = 1/4, 3/4") {
  const FourierPotential p = FourierPotential::preset("amo");
  const ZeroSet zs = laurent_roots(p, Complex(0.0, 0.0));
  REQUIRE(zs.zeros().size() == 2);
  CHECK(zs.total_multiplicity() == 2);
  CHECK(zs.power_offset() == -1);  // w + 1/w = w^{-1}(w^2 + 1)
  CHECK(std::abs(zs.leading_coeff() - Complex(1.0, 0.0)) < 1e-9);
  CHECK(zs.max_residual() < 1e-10);

  double re_lo = zs.zeros()[0].z.real(), re_hi = zs.zeros()[1].z.real();
  if (re_lo > re_hi) std::swap(re_lo, re_hi);
  CHECK(re_lo == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(re_hi == doctest::Approx(0.75).epsilon(1e-9));
  for (const Zero& z : zs.zeros()) {
    CHECK(std::abs(z.z.imag()) < 1e-9);
    CHECK(z.multiplicity == 1);
  }
}

TEST_CASE("cosine zeros at mu = 3 form a conjugate pair at the golden height") {
  const FourierPotential p = FourierPotential::preset("amo");
  const ZeroSet zs = laurent_roots(p, Complex(3.0, 0.0));
  // w + 1/w = 3  =>  w = (3 +- sqrt 5)/2, real positive: Re z = 0,
  // Im z = -+ log((3 + sqrt 5)/2) / (2 pi).
  REQUIRE(zs.zeros().size() == 2);
  for (const Zero& z : zs.zeros()) {
    CHECK(std::abs(z.z.real()) < 1e-9);
    CHECK(std::abs(std::abs(z.z.imag()) - kGoldenZeroHeight) < 1e-9);
  }
  CHECK(zs.zeros()[0].z.imag() < 0.0);  // sorted by height
  CHECK(zs.zeros()[1].z.imag() > 0.0);
  CHECK(kGoldenZeroHeight == doctest::Approx(0.15317448).epsilon(1e-7));
}

TEST_CASE("bichromatic zeros at mu = 0: two on the axis, two off") {
  const ZeroSet zs = laurent_roots(FourierPotential::preset("bichromatic"), Complex(0.0, 0.0));
  CHECK(zs.total_multiplicity() == 4);
  CHECK(zs.power_offset() == -2);
  CHECK(std::abs(zs.leading_coeff()) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(count_zeros_closed(zs, -1e-8, 1e-8) == 2);
  CHECK(count_zeros_closed(zs, -0.2, 0.2) == 4);
  int axis = 0, off = 0;
  for (const Zero& z : zs.zeros()) {
    if (std::abs(z.z.imag()) < 1e-9)
      ++axis;
    else {
      ++off;
      CHECK(std::abs(std::abs(z.z.imag()) - 0.132328) < 1e-5);
      CHECK(z.z.real() == doctest::Approx(0.5).epsilon(1e-6));
    }
  }
  CHECK(axis == 2);
  CHECK(off == 2);
}

TEST_CASE("factorized evaluation reconstructs f - mu on the strip") {
  for (const char* name : {"amo", "bichromatic"}) {
    const FourierPotential p = FourierPotential::preset(name);
    const Complex mu(0.7, 0.3);
    const ZeroSet zs = laurent_roots(p, mu);
    for (const Complex z : {Complex(0.1, 0.0), Complex(0.37, 0.2), Complex(0.9, -0.45)}) {
      const Complex direct = p.eval(z) - mu;
      const Complex product = zs.eval_from_factorization(z);
      CHECK(std::abs(direct - product) < 1e-9 * (1.0 + std::abs(direct)));
    }
  }
}

TEST_CASE("height-resolved zero counting respects closure flags") {
  const ZeroSet zs = laurent_roots(FourierPotential::preset("amo"), Complex(3.0, 0.0));
  const double yh = kGoldenZeroHeight;
  CHECK(count_zeros_closed(zs, -1e-8, 1e-8) == 0);
  CHECK(count_zeros_closed(zs, -0.2, 0.2) == 2);
  CHECK(count_zeros_closed(zs, 0.0, yh + 1e-9) == 1);
  // half-open band (y, h] just below/above the zero height
  CHECK(count_zeros(zs, HeightInterval{yh - 1e-6, 0.5, false, true}) == 1);
  CHECK(count_zeros(zs, HeightInterval{yh + 1e-6, 0.5, false, true}) == 0);
  CHECK(count_zeros(zs, HeightInterval{yh, 0.5, false, true}) == 0);  // open at the zero
  CHECK_THROWS_AS(count_zeros(zs, HeightInterval{0.2, 0.1}), ContractError);
  CHECK_THROWS_AS(count_zeros_closed(zs, -0.6, 0.0), ContractError);  // outside the strip

  const std::vector<Zero> inner = zs.zeros_in_strip(0.1);
  CHECK(inner.empty());
  CHECK(zs.zeros_in_strip(0.2).size() == 2);
}

TEST_CASE("degenerate shift is rejected") {
  const FourierPotential c = FourierPotential::from_triples({{0, 2.5, 0.0}}, 0.3);
  CHECK_THROWS_AS(laurent_roots(c, Complex(2.5, 0.0)), DegenerateInputError);
  CHECK_NOTHROW(laurent_roots(c, Complex(1.0, 0.0)));  // constant minus 1: no zeros
}

TEST_CASE("zero-free part stays finite at removed zeros and rebuilds f - mu") {
  const FourierPotential p = FourierPotential::preset("amo");
  const ZeroSet zs = laurent_roots(p, Complex(0.0, 0.0));
  const double eps = 0.1;
  const Complex at_zero = zero_free_part_eval(zs, eps, Complex(0.25, 0.0));
  CHECK(std::isfinite(std::abs(at_zero)));
  CHECK(std::abs(at_zero) > 1e-6);

  // g * prod_removed (w - w_j)^m / norm^{n_tilde} == f - mu away from zeros
  const Complex z(0.4, 0.05);
  const Complex g = zero_free_part_eval(zs, eps, z);
  const Complex w = std::exp(Complex(0.0, 2.0 * kPi) * z);
  Complex prod(1.0, 0.0);
  int removed = 0;
  for (const Zero& zr : zs.zeros())
    if (std::abs(zr.z.imag()) < 2.0 * eps) {
      removed += zr.multiplicity;
      const Complex wj = std::exp(Complex(0.0, 2.0 * kPi) * zr.z);
      for (int m = 0; m < zr.multiplicity; ++m) prod *= (w - wj);
    }
  CHECK(removed == removed_zero_count(zs, eps));
  const double norm = 2.0 * std::exp(2.0 * kPi) + 2.0;
  const Complex rebuilt = g * prod / std::pow(norm, removed);
  CHECK(std::abs(rebuilt - (p.eval(z) - 0.0)) < 1e-9);
}

TEST_CASE("beta floor is positive and 2 rho must fit inside the strip") {
  const FourierPotential p = FourierPotential::preset("amo");
  CHECK(beta(p, Complex(0.0, 0.0), 0.2) > 0.0);
  CHECK_THROWS_AS(beta(p, Complex(0.0, 0.0), 0.3), ContractError);
  CHECK_THROWS_AS(beta(p, Complex(0.0, 0.0), -0.1), ContractError);
}

TEST_CASE("mu scan for the cosine potential at rho = 0.2") {
  const HatQuantities hat = hat_quantities(FourierPotential::preset("amo"), 0.2);
  CHECK(hat.n_hat == 2);
  CHECK(hat.beta_hat == doctest::Approx(8.62809136372).epsilon(1e-7));
  CHECK(hat.scan.size() > 400);
  // the witness recomputes to the reported minimum
  const double recheck = beta(FourierPotential::preset("amo"),
                              Complex(hat.witness_mu_beta, 0.0), 0.2);
  CHECK(recheck == doctest::Approx(hat.beta_hat).epsilon(1e-9));
}

TEST_CASE("mu scan for the bichromatic potential at rho = 0.2") {
  const HatQuantities hat = hat_quantities(FourierPotential::preset("bichromatic"), 0.2);
  CHECK(hat.n_hat == 4);
  CHECK(hat.beta_hat == doctest::Approx(69.7276884562).epsilon(1e-7));
}

TEST_CASE("mu scan contract and degeneracy guards") {
  CHECK_THROWS_AS(hat_quantities(FourierPotential::from_triples({{0, 1.0, 0.0}}, 0.4), 0.1),
                  DegenerateInputError);
  CHECK_THROWS_AS(hat_quantities(FourierPotential::preset("amo"), 0.3), ContractError);
}

TEST_CASE("winding numbers of explicit curves") {
  WindingDiagnostics diag;
  CHECK(winding_number([](double t) { return std::polar(1.0, 2.0 * kPi * t); }, &diag) == 1);
  CHECK(diag.residue < 0.05);
  CHECK(winding_number([](double t) { return std::polar(1.0, 6.0 * kPi * t); }) == 3);
  CHECK(winding_number([](double t) {
          return Complex(3.0, 0.0) + std::polar(1.0, 2.0 * kPi * t);
        }) == 0);
  CHECK_THROWS_AS(winding_number([](double t) {
                    return std::polar(1.0, 2.0 * kPi * t) - Complex(1.0, 0.0);
                  }),
                  NumericError);
}
