//
// Envelope constants, certificates, and the geometric/stratified quantities.
// Numeric targets here were frozen from independent closed-form evaluations
// and brute-force grid scans of the same quantities.

#include <cmath>

#include "doctest.h"
#include "qpcocycle/asymptotics.hpp"
#include "qpcocycle/constants.hpp"

using namespace qpc;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("envelope constants for the cosine potential at rho = 0.2") {
  const EnvelopeConstants c = envelope_constants(FourierPotential::preset("amo"), 0.2);
  CHECK(c.rho == doctest::Approx(0.2));
  CHECK(c.n == 2);
  CHECK(c.lambda0 == 32.0);  // 2^{2N+1}, exact in floating point
  CHECK(c.k1 == doctest::Approx(1.74042104148e-06).epsilon(1e-9));
  CHECK(c.beta_hat == doctest::Approx(8.62809136372).epsilon(1e-7));
  CHECK(c.big_c == doctest::Approx(4916192.92655).epsilon(1e-7));
  // rate and scale helpers
  CHECK(c.rate(32.0) == doctest::Approx(std::pow(32.0, -0.4)).epsilon(1e-12));
  CHECK(c.delta_of(100.0) > c.delta_of(1000.0));
}

TEST_CASE("envelope constants for the bichromatic potential at rho = 0.2") {
  const EnvelopeConstants c = envelope_constants(FourierPotential::preset("bichromatic"), 0.2);
  CHECK(c.n == 4);
  CHECK(c.lambda0 == 512.0);
  CHECK(c.beta_hat == doctest::Approx(69.7276884562).epsilon(1e-7));
  CHECK(c.big_c == doctest::Approx(19989153.0574).epsilon(1e-7));
}

TEST_CASE("envelope constants contract checks") {
  CHECK_THROWS_AS(envelope_constants(FourierPotential::preset("amo"), 0.4), ContractError);
  CHECK_THROWS_AS(envelope_constants(FourierPotential::preset("amo"), 0.0), ContractError);
  CHECK_THROWS_AS(envelope_constants(FourierPotential::from_triples({{0, 1.0, 0.0}}, 0.4), 0.1),
                  ContractError);
  CHECK_THROWS_AS(envelope_constants(FourierPotential::from_triples({{1, 1.0, 0.5}}, 0.4), 0.1),
                  ContractError);
}

TEST_CASE("working height for lambda = 40 sits in the clamped band") {
  const FourierPotential p = FourierPotential::preset("amo");
  const EnvelopeConstants c = envelope_constants(p, 0.2);
  const WorkingHeight wh = find_working_height(c, p, 40.0, 0.0, 0.15);
  CHECK(wh.band_lo == doctest::Approx(0.075).epsilon(1e-6));
  CHECK(wh.band_hi == doctest::Approx(0.15).epsilon(1e-6));
  CHECK(wh.y_star == doctest::Approx(0.1125).epsilon(1e-6));
  // min_x |40 * 2 cos(2 pi (x + i y*))| = 80 sinh(2 pi y*)
  CHECK(wh.min_modulus == doctest::Approx(80.0 * std::sinh(2.0 * kPi * 0.1125)).epsilon(1e-4));
  CHECK_THROWS_AS(find_working_height(c, p, 20.0, 0.0, 0.15), ContractError);  // below lambda0
}

TEST_CASE("full certificate at lambda = 40 passes with every pipeline check") {
  const FourierPotential p = FourierPotential::preset("amo");
  const EnvelopeConstants c = envelope_constants(p, 0.2);
  const AsymptoticsCertificate cert = verify_asymptotics(p, golden_mean(), 40.0, 0.0, c);
  CHECK(cert.status == CheckStatus::pass);
  CHECK(cert.pass);
  CHECK(cert.residual <= cert.bound);
  CHECK(cert.predicted == doctest::Approx(std::log(40.0)).epsilon(1e-9));  // I[0](0) = 0
  CHECK(cert.residual < 5e-4);

  const PipelineChecks& pl = cert.pipeline;
  CHECK(pl.delta_clamped);  // desk-scale coupling: theoretical delta exceeds 3 rho / 4
  CHECK(pl.delta_effective == doctest::Approx(0.15).epsilon(1e-9));
  CHECK(pl.floor_ok);
  CHECK(pl.rate_floor_ok);
  CHECK(pl.splitting.dominated);
  CHECK(pl.splitting.bounds_ok_antisym);
  CHECK(pl.splitting.bounds_ok_sym);
  CHECK(pl.factorization_ok);
  CHECK(pl.d_bound_ok);
  CHECK(pl.d_rate_ok);
  CHECK(pl.two_omega_height == 2);
  CHECK(pl.omega_attempted);
  CHECK(pl.omega_match);
  CHECK(pl.extrapolation_ok);
  CHECK(pl.all_ok);
}

TEST_CASE("certificate rejects couplings at or below the threshold") {
  const FourierPotential p = FourierPotential::preset("amo");
  const EnvelopeConstants c = envelope_constants(p, 0.2);
  CHECK_THROWS_AS(verify_asymptotics(p, golden_mean(), 32.0, 0.0, c), ContractError);
}

TEST_CASE("acceleration chain at lambda = 100: measured <= exact sup <= N") {
  const FourierPotential p = FourierPotential::preset("amo");
  const EnvelopeConstants c = envelope_constants(p, 0.2);
  const AccelerationBoundReport rep =
      acceleration_bound_check(p, golden_mean(), 100.0, 0.0, c);
  CHECK_FALSE(rep.skipped);
  CHECK(rep.n == 2);
  CHECK(rep.measured_two_omega == 2);
  CHECK(rep.measured_residual < 0.05);
  CHECK(rep.sup_two_omega == 2);
  CHECK(rep.measured_ok);
  CHECK(rep.sup_ok);
  CHECK(rep.chain_ok);
}

TEST_CASE("zero-set geometry of the cosine potential") {
  const ZeroSetGeometry g = zero_set_geometry(FourierPotential::preset("amo"));
  CHECK(g.applicable);
  REQUIRE(g.real_zeros.size() == 2);
  CHECK(g.real_zeros[0] == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(g.real_zeros[1] == doctest::Approx(0.75).epsilon(1e-8));
  CHECK(g.zero_orders == std::vector<int>{1, 1});
  CHECK(g.n_real == 2);
  CHECK(g.tau == doctest::Approx(4.0 * kPi).epsilon(1e-6));  // |f'| = 4 pi at simple zeros
  CHECK(g.sup_norm == doctest::Approx(2.0 * std::cosh(kPi)).epsilon(1e-6));
  CHECK(g.zeta == doctest::Approx(0.0596682).epsilon(1e-4));
  CHECK(g.beta == doctest::Approx(10.6667).epsilon(1e-4));
  CHECK(g.gamma == doctest::Approx(8.17688e-4).epsilon(1e-4));
  CHECK(g.radius == doctest::Approx(8.17612e-4).epsilon(1e-4));
  CHECK(g.radius <= g.zeta);
  CHECK(g.radius <= g.gamma);
  REQUIRE(g.eta_checks.size() == 3);
  for (const EtaCheck& e : g.eta_checks) {
    CHECK(e.ok);
    CHECK(e.grid_min >= e.eta);
  }
  CHECK(g.eta_ok);
}

TEST_CASE("zero-set geometry of the bichromatic potential") {
  const ZeroSetGeometry g = zero_set_geometry(FourierPotential::preset("bichromatic"));
  CHECK(g.applicable);
  CHECK(g.n_real == 2);
  REQUIRE(g.real_zeros.size() == 2);
  // fundamental domain starts at the largest zero gap, so one zero is
  // represented beyond x = 1
  CHECK(g.real_zeros[0] == doctest::Approx(0.80964084).epsilon(1e-6));
  CHECK(g.real_zeros[1] == doctest::Approx(1.19035916).epsilon(1e-6));
  CHECK(g.tau == doctest::Approx(20.2552).epsilon(1e-4));
  CHECK(g.sup_norm == doctest::Approx(290.931).epsilon(1e-4));
  CHECK(g.zeta == doctest::Approx(0.00855386).epsilon(1e-4));
  CHECK(g.beta == doctest::Approx(4.67807).epsilon(1e-4));
  CHECK(g.radius == doctest::Approx(5.88262e-7).epsilon(1e-4));
  CHECK(g.eta_ok);
}

TEST_CASE("zero-set geometry is inapplicable without axis zeros") {
  const FourierPotential p =
      FourierPotential::from_triples({{0, 3.0, 0.0}, {1, 1.0, 0.0}, {-1, 1.0, 0.0}}, 0.5);
  const ZeroSetGeometry g = zero_set_geometry(p);
  CHECK_FALSE(g.applicable);
}

TEST_CASE("stratum quantities on [-1, 1] for the cosine potential") {
  const StratumQuantities s = stratum_quantities(FourierPotential::preset("amo"), -1.0, 1.0);
  CHECK(s.n0 == 2);
  CHECK(s.count_constant);
  for (int cnt : s.sampled_counts) CHECK(cnt == 2);
  // min |f'| over f^{-1}([-1,1]): attained where f = +-1, |f'| = 2 sqrt(3) pi
  CHECK(s.tau0 == doctest::Approx(2.0 * std::sqrt(3.0) * kPi).epsilon(1e-6));
  CHECK(s.m0 == doctest::Approx(2.0 * std::cosh(kPi) + 1.0).epsilon(1e-6));
  CHECK(s.beta0 == doctest::Approx(10.6667).epsilon(1e-4));
  CHECK(s.zeta0 == doctest::Approx(0.050562).epsilon(1e-4));
  CHECK(s.gamma0 == doctest::Approx(5.63158e-4).epsilon(1e-4));
  CHECK(s.r0 == doctest::Approx(5.63124e-4).epsilon(1e-4));
  CHECK(s.beta_hat == doctest::Approx(10.6667).epsilon(1e-4));
  CHECK(s.lambda_tilde == doctest::Approx(1.41398e8).epsilon(1e-4));
  CHECK(s.floor_ok);
}

TEST_CASE("stratum endpoints may not touch critical values or leave the range") {
  const FourierPotential p = FourierPotential::preset("amo");
  CHECK_THROWS_AS(stratum_quantities(p, -1.0, 2.0), ContractError);
  CHECK_THROWS_AS(stratum_quantities(p, -3.0, 0.0), ContractError);
  CHECK_THROWS_AS(stratum_quantities(p, 1.0, -1.0), ContractError);
}

TEST_CASE("stratified certificate at lambda = 200 (below the certified threshold)") {
  const FourierPotential p = FourierPotential::preset("amo");
  const double mus[] = {-1.0, 0.0, 1.0};
  StratifiedOptions opt;
  opt.allow_below_threshold = true;
  const StratifiedReport rep = verify_stratified(p, golden_mean(), 200.0, -1.0, 1.0, mus, opt);
  CHECK_FALSE(rep.lambda_above_threshold);
  CHECK(rep.delta == doctest::Approx(std::pow(200.0, -0.4)).epsilon(1e-9));
  CHECK(rep.band_nonempty);
  CHECK(rep.band_lo == doctest::Approx(0.0600562).epsilon(1e-3));
  CHECK(rep.band_hi == doctest::Approx(0.120112).epsilon(1e-3));
  REQUIRE(rep.cells.size() == 3);
  for (const StratifiedCell& cell : rep.cells) {
    CHECK(cell.status == CheckStatus::pass);
    CHECK(cell.residual <= cell.bound);
    CHECK(cell.measured_two_omega == 2);
    CHECK(cell.omega_ok);
  }
  CHECK(rep.conclusions_pass);
  CHECK_FALSE(rep.all_pass);  // the threshold hypothesis itself is not met

  // without the override the threshold violation is a contract error
  CHECK_THROWS_AS(verify_stratified(p, golden_mean(), 200.0, -1.0, 1.0, mus), ContractError);
}

TEST_CASE("grid re-derivation reproduces the closed-form envelope constants") {
  const ConstantRederivation r = rederive_envelope_constants();
  CHECK(std::abs(r.k2 - 8.49852915725) < 5.1e-4);
  CHECK(std::abs(r.k3 - 6.54508497187) < 5.1e-4);
  CHECK(std::abs(r.case1_c - 5.44069831084) < 5.1e-4);
  CHECK(std::abs(r.case1_argmax - (std::sqrt(5.0) + 3.0) / 2.0) < 1e-3);
  CHECK(r.envelope_verified);
  CHECK(r.worst_margin > -1e-12);
  CHECK(r.matches_closed_forms);
  // the grid values must also match the exact expressions used by the library
  CHECK(std::abs(r.k2 - constants::k2()) < 5e-4);
  CHECK(std::abs(r.k3 - constants::k3()) < 5e-4);
  CHECK(std::abs(r.case1_c - constants::case1_c()) < 5e-4);
}

TEST_CASE("height floor holds by brute force across the mu range") {
  const HeightFloorCheck amo = height_floor_check(FourierPotential::preset("amo"), 0.2, 0.05);
  CHECK(amo.verified);
  CHECK(amo.mu_grid == 101);
  CHECK(amo.worst_margin == doctest::Approx(0.1243).epsilon(2e-3));
  CHECK_FALSE(amo.degenerate);

  const HeightFloorCheck bi =
      height_floor_check(FourierPotential::preset("bichromatic"), 0.2, 0.1);
  CHECK(bi.verified);
  CHECK(bi.worst_margin == doctest::Approx(0.7651).epsilon(2e-3));

  CHECK_THROWS_AS(height_floor_check(FourierPotential::preset("amo"), 0.2, 0.25), ContractError);
}

TEST_CASE("status strings cover all three outcomes") {
  CHECK(to_string(CheckStatus::pass) == "pass");
  CHECK(to_string(CheckStatus::fail) == "fail");
  CHECK(to_string(CheckStatus::inconclusive) == "inconclusive");
}
