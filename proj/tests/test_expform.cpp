#include <doctest.h>

#include "fixtures.hpp"
#include "xxz/expform.hpp"

using namespace xxz;
using fixtures::kEta;
using fixtures::kNu1;
using fixtures::kNu2;
using fixtures::max_abs;

namespace {

const std::vector<cplx> kXi = {std::exp(kNu1), std::exp(kNu2)};

}  // namespace

TEST_CASE("t operators: projector, commutation, spin blocks") {
  const auto ts = build_all_t(2, 0.1, kEta, kXi);
  REQUIRE(ts.size() == 2);
  CHECK(projector_residual(ts[0]) < 1e-12);
  CHECK(projector_residual(ts[1]) < 1e-12);
  CHECK(commutator_residual(ts[0], ts[1]) < 1e-12);
  CHECK(spin_block_residual(ts[0]) < 1e-12);
  CHECK(spin_block_residual(ts[1]) < 1e-12);
  const auto t1 = build_t(1, 1, 0.1, kEta, {kXi[0]});
  CHECK(projector_residual(t1) < 1e-12);
  CHECK_THROWS_AS(build_t(3, 1, 0.1, kEta, {1.0, 1.1, 1.2}), Error);
}

TEST_CASE("t operators: reduction properties on spin-zero operators") {
  for (double r : reduction_residuals(0.1, kEta, kXi)) CHECK(r < 1e-12);
  const auto t1 = build_t(1, 1, 0.1, kEta, {kXi[0]});
  const CMat qa = (CMat(2, 2) << std::exp(0.1 * kEta), 0, 0, std::exp(-0.1 * kEta)).finished();
  CHECK(max_abs(t1.apply(qa) - qa) < 1e-12);
  CHECK(max_abs(t1.apply(CMat::Identity(2, 2))) < 1e-12);
}

TEST_CASE("Omega_2 with rho = 1 is the identity map") {
  const auto ts = build_all_t(2, 0.1, kEta, kXi);
  CHECK(max_abs(Omega2_map(ts, {1.0, 1.0}) - CMat::Identity(16, 16)) < 1e-14);
  const CMat X = kron_sites({pauli_z(), CMat::Identity(2, 2)});
  CHECK(max_abs(apply_Omega2(ts, {1.0, 1.0}, X) - X) < 1e-14);
}

TEST_CASE("alpha trace: calibration, normalization, spin reversal") {
  const AlphaTrace tr = calibrate_alpha_trace(0.1, kEta);
  CHECK(tr.fit_residual < 1e-12);
  CHECK(std::abs(tr(CMat::Identity(2, 2)) - 1.0) < 1e-14);
  const AlphaTrace rev = calibrate_alpha_trace(-0.1, kEta);
  CHECK(std::abs(rev.up - tr.down) < 1e-12);
  CHECK(std::abs(rev.down - tr.up) < 1e-12);

  const SystemPtr sys = fixtures::finite_system();
  const cplx rho1 = rho_continued(*sys->field, kNu1);
  const auto t = build_t(1, 1, 0.1, kEta, {kXi[0]});
  const CMat map = Omega2_map({t}, {rho1});
  const DensityMatrix D1 = density_m1(*sys->field, kNu1);
  for (int r = 0; r < 2; ++r) {
    CMat E = CMat::Zero(2, 2);
    E(r, r) = 1.0;
    CHECK(std::abs(tr(unvec(map * vec(E), 2)) - D1.entries(r, r)) < 1e-12);
  }
}

TEST_CASE("exponential form reproduces the two-site matrix") {
  const SystemPtr sys = fixtures::finite_system();
  const AlphaTrace tr = calibrate_alpha_trace(0.1, kEta);
  const GTable g1 = solve_G(*sys, kNu1), g2 = solve_G(*sys, kNu2);
  const cplx w12 = compute_omega(*sys, g2, kNu1).omega, w21 = compute_omega(*sys, g1, kNu2).omega;
  const CMat De = exponential_form_m2(tr, 0.1, kEta, kNu1, kNu2, w12, w21, g1.rho_at_nu, g2.rho_at_nu);
  CHECK(max_abs(De - density_m2(*sys, kNu1, kNu2).entries) < 1e-6);
  CHECK(max_abs(De - density_direct(fixtures::finite_params(), {kNu1, kNu2})) < 1e-6);
}

TEST_CASE("alpha -> 0 residues and the fermionic trace") {
  const auto r1 = t_residue_and_h(1, 1, kEta, {kXi[0]});
  CHECK(max_abs(r1.t0 + r1.h) < 1e-12);
  const auto z1 = t_residue_and_h(2, 1, kEta, kXi), z2 = t_residue_and_h(2, 2, kEta, kXi);
  CHECK(max_abs(z1.t0 * z2.t0) < 1e-12);
  const cplx ph1(0.3, 0.1), ph2(-0.7, 0.2);
  const double d3 = fermi_bose_difference(1e-3, kEta, kXi, ph1, ph2);
  const double d4 = fermi_bose_difference(1e-4, kEta, kXi, ph1, ph2);
  CHECK(d3 / d4 == doctest::Approx(10.0).epsilon(0.05));
  CHECK(d4 < 1e-3);
}
