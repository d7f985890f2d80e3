//
// Averaged log-modulus I(y) and its quantized slope: closed form vs
// quadrature, piecewise-affine structure, breakpoint conventions, and the
// three-route agreement of the acceleration.

#include <cmath>
#include <complex>

#include "doctest.h"
#include "qpcocycle/jensen.hpp"

using namespace qpc;

namespace {
constexpr double kPi = 3.14159265358979323846;
const double kGoldenLog = std::log((3.0 + std::sqrt(5.0)) / 2.0);
const double kGoldenZeroHeight = kGoldenLog / (2.0 * kPi);
}  // namespace

TEST_CASE("I at the axis for mu = 3 equals log((3 + sqrt 5)/2)") {
  const FourierPotential p = FourierPotential::preset("amo");
  CHECK(jensen_integral(p, Complex(3.0, 0.0), 0.0) == doctest::Approx(kGoldenLog).epsilon(1e-12));
}

TEST_CASE("closed form agrees with the quadrature oracle at safe heights") {
  const FourierPotential p = FourierPotential::preset("amo");
  for (double y : {0.0, 0.1, -0.1, 0.3, -0.3}) {
    const double cf = jensen_integral(p, Complex(3.0, 0.0), y);
    const double quad = jensen_integral_quadrature(p, Complex(3.0, 0.0), y);
    CHECK(std::abs(cf - quad) < 1e-12);
  }
  // heights within the margin of a zero height are refused, not mis-integrated
  CHECK_THROWS_AS(jensen_integral_quadrature(p, Complex(3.0, 0.0), kGoldenZeroHeight + 1e-4),
                  PrecisionError);
}

TEST_CASE("axis zeros give the exact linear profile I(y) = 2 pi |y|") {
  const FourierPotential p = FourierPotential::preset("amo");
  CHECK(jensen_integral(p, Complex(0.0, 0.0), 0.1) ==
        doctest::Approx(2.0 * kPi * 0.1).epsilon(1e-12));
  CHECK(jensen_integral(p, Complex(0.0, 0.0), -0.1) ==
        doctest::Approx(2.0 * kPi * 0.1).epsilon(1e-12));
  CHECK(jensen_integral(p, Complex(0.0, 0.0), 0.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("acceleration functional counts band zeros with right continuity") {
  const FourierPotential p = FourierPotential::preset("amo");

  AccelerationValue v = acceleration_functional(p, 0.0, 0.0);
  CHECK(v.two_omega == 2);  // both axis zeros enter at y = 0+
  CHECK(v.at_breakpoint);

  v = acceleration_functional(p, 0.0, 0.05);
  CHECK(v.two_omega == 2);
  CHECK_FALSE(v.at_breakpoint);
  CHECK(v.finite_difference == doctest::Approx(1.0).epsilon(1e-9));

  CHECK(acceleration_functional(p, 3.0, 0.0).two_omega == 0);
  CHECK(acceleration_functional(p, 3.0, 0.15).two_omega == 0);   // below the zero pair
  CHECK(acceleration_functional(p, 3.0, 0.16).two_omega == 2);   // above it
  CHECK(acceleration_functional(p, 3.0, -0.16).two_omega == -2); // odd in y
}

TEST_CASE("general and direct winding routes agree for complex shifts") {
  const Complex mu(0.3, 0.4);
  const FourierPotential amo = FourierPotential::preset("amo");
  CHECK(two_omega_general(amo, mu, 0.2) == two_omega_winding_at(amo, mu, 0.2));
  const FourierPotential bi = FourierPotential::preset("bichromatic");
  CHECK(two_omega_general(bi, mu, 0.1) == two_omega_winding_at(bi, mu, 0.1));
}

TEST_CASE("profile over symmetric heights is convex, even, and root-based") {
  const FourierPotential p = FourierPotential::preset("amo");
  const double heights[] = {-0.3, -0.2, -0.1, 0.0, 0.1, 0.2, 0.3};
  const JensenProfile prof = jensen_profile(p, 3.0, heights);
  REQUIRE(prof.points.size() == 7);
  for (std::size_t i = 0; i + 1 < prof.points.size(); ++i)
    CHECK(prof.points[i].y < prof.points[i + 1].y);
  for (const ProfilePoint& pt : prof.points) CHECK(pt.method == "roots");
  // evenness: the same closed form evaluated at -y
  for (int i = 0; i < 3; ++i)
    CHECK(prof.points[static_cast<std::size_t>(i)].value ==
          doctest::Approx(prof.points[static_cast<std::size_t>(6 - i)].value).epsilon(1e-12));
}

TEST_CASE("slope quantization routes agree on the cosine potential at mu = 3") {
  const FourierPotential p = FourierPotential::preset("amo");
  const double heights[] = {0.05, 0.1, 0.2, 0.3};
  const SlopeQuantizationReport rep = verify_slope_quantization(p, 3.0, heights);
  CHECK(rep.all_agree);
  REQUIRE(rep.rows.size() == 4);
  CHECK(rep.rows[0].two_omega_count == 0);
  CHECK(rep.rows[1].two_omega_count == 0);
  CHECK(rep.rows[2].two_omega_count == 2);
  CHECK(rep.rows[3].two_omega_count == 2);
  for (const auto& r : rep.rows) {
    CHECK(r.agree);
    CHECK(std::abs(r.finite_difference - 0.5 * r.two_omega_count) < 1e-6);
  }
}

TEST_CASE("zero-count route requires real-analytic data") {
  const FourierPotential asym = FourierPotential::from_triples({{1, 1.0, 0.5}}, 0.3);
  CHECK_THROWS_AS(acceleration_functional(asym, 0.0, 0.1), ContractError);
}
