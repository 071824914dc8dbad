#include <doctest.h>

#include "fixtures.hpp"
#include "xxz/special.hpp"

using namespace xxz;
using fixtures::kEta;
using fixtures::kGamma;
using fixtures::kNu1;
using fixtures::kNu2;

namespace {

// Finite-length systems on the default and a wider contour, resolved finely enough for points 0.05 from either.
SystemPtr narrow_system() {
  static const SystemPtr s =
      build_nystrom(make_rho_field(fixtures::finite_params(), make_grid(kGamma, 0.15, 20.0, 1536)));
  return s;
}

SystemPtr wide_system() {
  static const SystemPtr s =
      build_nystrom(make_rho_field(fixtures::finite_params(), make_grid(kGamma, 0.25, 20.0, 1536)));
  return s;
}

}  // namespace

TEST_CASE("psi and omega0 closed forms") {
  CHECK(std::abs(psi(2.0, 0.0) - 5.0 / 6.0) < 1e-15);
  const cplx xi(1.3, 0.4);
  CHECK(std::abs(psi(xi, 0.0) + psi(1.0 / xi, 0.0)) < 1e-14);
  CHECK(std::isfinite(std::abs(psi(std::exp(kEta) * xi, 0.3) - psi(xi / std::exp(kEta), 0.3))));
  CHECK_THROWS_AS(psi(1.0, 0.2), Error);
  CHECK(std::abs(omega0(xi, 0.0, kEta)) == 0.0);
  const cplx r3 = std::pow(xi, -1e-3) * omega0(xi, 1e-3, kEta), r4 = std::pow(xi, -1e-4) * omega0(xi, 1e-4, kEta);
  CHECK(std::abs(r3 / r4) == doctest::Approx(100.0).epsilon(1e-3));
  CHECK(std::abs(omega0(1.0 / xi, -0.3, kEta) - omega0(xi, 0.3, kEta)) < 1e-13);
}

TEST_CASE("rho and phi: trivial twist, infinite temperature, sign flip") {
  const GridPtr g = fixtures::coarse_grid();
  const auto base = solve_aux_ptr(fixtures::finite_params(), 0.1, g);
  const RhoPtr same = make_rho_field(base, base);
  for (cplx z : {cplx(0.0), cplx(0.4, 0.1), cplx(-2.0, -0.05)}) CHECK(std::abs(rho_at(*same, z) - 1.0) < 1e-15);

  const ModelParams hot = fixtures::trotter_params(1e300, 0.0, 0.1);
  for (cplx kappa : {cplx(0.0), cplx(0.15)}) {
    const RhoPtr f = make_rho_field(solve_aux_ptr(hot, kappa, g), solve_aux_ptr(hot, kappa + 0.1, g));
    const cplx qk = std::exp(kappa * kEta), qa = std::exp(0.1 * kEta);
    const cplx expect = (qa * qk + 1.0 / (qa * qk)) / (qk + 1.0 / qk);
    CHECK(std::abs(compute_rho(*f, 1.0) - expect) < 1e-12);
    if (kappa == 0.0) CHECK(std::abs(compute_phi(*f, 1.0)) < 1e-12);
  }

  CHECK(std::abs(phi_from_rho(std::cosh(0.1 * kEta), 0.1, kEta)) < 1e-15);
  CHECK_THROWS_AS(phi_from_rho(1.0, 0.0, kEta), Error);
  const RhoPtr fp = fixtures::finite_system()->field;
  const RhoPtr fm = make_rho_field(fixtures::finite_params(-0.1, -0.1), fixtures::fine_grid());
  for (cplx z : {cplx(0.0), cplx(0.2, 0.05)})
    CHECK(std::abs(compute_phi(*fp, std::exp(z)) + compute_phi(*fm, std::exp(z))) < 1e-10);
}

TEST_CASE("magnetization from the alpha derivative of rho at L = 10") {
  const double T = 5.0, h = 0.3, e = 1e-4;
  const ModelParams p = fixtures::trotter_params(T, h);
  const GridPtr g = fixtures::fine_grid();
  const cplx tw = p.base_twist();
  const AuxPtr base = solve_aux_ptr(p, tw, g);
  auto rho = [&](double a) { return compute_rho(*make_rho_field(base, solve_aux_ptr(p, tw + a, g)), 1.0); };
  const cplx slope = richardson_derivative(rho(-2 * e), rho(-e), rho(e), rho(2 * e), e);
  CHECK(std::abs(slope / (2.0 * kEta) - thermal_ed(10, T, h, kGamma).magnetization) < 1e-3);
}

TEST_CASE("G: rho identity in the Trotter limit, asymptotics, alpha -> 0") {
  ModelParams p = fixtures::trotter_params(2.0, 0.0, 0.1);
  p.kappa = 0.1;
  const GridPtr g = fixtures::fine_grid();
  const SystemPtr sys = build_nystrom(make_rho_field(p, g));
  for (cplx nu : {cplx(0.0), cplx(0.3, 0.05), cplx(-1.0, -0.03)}) {
    const GTable t = solve_G(*sys, nu);
    CHECK(std::abs(rho_identity_residual(*sys, t)) < 1e-8);
    const double mid = t.values.cwiseAbs().maxCoeff();
    double ends = 0.0;
    for (std::size_t k = 0; k < g->size(); ++k)
      if (std::abs(std::abs(g->nodes[k].real()) - g->cutoff) < 1e-12) ends = std::max(ends, std::abs(t.values[k]));
    CHECK(ends < 1e-6 * mid);
  }

  const AuxPtr base = sys->field->base;
  const SystemPtr tiny = build_nystrom(make_rho_field(base, solve_aux_ptr(p, p.base_twist() + 1e-6, g)));
  const cplx nu(0.2, 0.03);
  const CVec G0 = solve_G0(*base, nu);
  CHECK((solve_G(*tiny, nu).values - G0).cwiseAbs().maxCoeff() < 1e-5 * G0.cwiseAbs().maxCoeff());
}

TEST_CASE("G and rho continued outside the contour agree with a wider contour") {
  const SystemPtr sys = narrow_system(), wide = wide_system();
  const GTable t = solve_G(*sys, kNu2), tw = solve_G(*wide, kNu2);
  for (cplx z : {cplx(0.1, 0.2), cplx(-0.4, -0.2), cplx(0.3, 0.2)}) {
    CHECK(std::abs(rho_continued(*sys->field, z) - rho_at(*wide->field, z)) < 1e-9);
    CHECK(std::abs(continue_G(*sys, t, z) - eval_G(*wide, tw, z)) < 1e-8);
  }
}

TEST_CASE("Psi: inside region, continuation across the contour, recursion at the inhomogeneities") {
  const SystemPtr sys = narrow_system(), wide = wide_system();
  const GTable t = solve_G(*sys, kNu2), tw = solve_G(*wide, kNu2);
  CHECK(std::abs(continue_Psi(*sys, t, kNu1) - compute_Psi(*sys, t, kNu1)) < 1e-14);
  for (cplx z : {cplx(0.1, 0.2), cplx(-0.4, -0.2)})
    CHECK(std::abs(continue_Psi(*sys, t, z) - compute_Psi(*wide, tw, z)) < 1e-8);

  const RhoField& f = *sys->field;
  const cplx qa = std::exp(f.alpha * kEta);
  for (cplx beta : fixtures::finite_params().betas()) {
    const cplx lhs = continue_Psi(*sys, t, beta) + rho_continued(f, beta) / qa * continue_Psi(*sys, t, beta - kEta);
    const cplx rhs = t.rho_at_nu * cth(beta - kNu2) - cth(beta - kNu2 - kEta) / qa;
    CHECK(std::abs(lhs - rhs) < 1e-6);
  }
}

TEST_CASE("omega: symmetries and the oracle expectation value") {
  const SystemPtr sys = fixtures::finite_system();
  const SystemPtr rev = build_nystrom(make_rho_field(fixtures::finite_params(-0.1, -0.1), fixtures::fine_grid()));
  CHECK(std::abs(compute_omega(*sys, kNu1, kNu2).omega - compute_omega(*rev, kNu2, kNu1).omega) < 1e-8);
  const SystemPtr zero = build_nystrom(make_rho_field(sys->field->base, sys->field->base));
  CHECK(std::abs(compute_omega(*zero, kNu1, kNu2).omega - compute_omega(*zero, kNu2, kNu1).omega) < 1e-8);

  const CMat D = density_direct(fixtures::finite_params(), {kNu1, kNu2});
  const cplx xi = std::exp(kNu1 - kNu2), a = sys->field->alpha;
  const cplx from_oracle = -std::pow(xi, a) * (D * omega_operator(xi, a, kEta)).trace();
  CHECK(std::abs(compute_omega(*sys, kNu1, kNu2).omega - from_oracle) < 1e-6);
}

TEST_CASE("omega prime: two routes, antisymmetry, symmetric form") {
  OmegaPrimeOptions opts;
  const auto r = omega_prime(fixtures::finite_params(), fixtures::fine_grid(), kNu1, kNu2, opts);
  CHECK(r.route_gap < 1e-6);
  CHECK(r.antisymmetry_residual < 1e-8);
  CHECK(std::abs(r.symmetric_12 - r.symmetric_21) < 1e-8);
  CHECK(r.identity_residual < 1e-8);
}
