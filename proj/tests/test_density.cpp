#include <doctest.h>

#include <random>

#include "fixtures.hpp"

using namespace xxz;
using fixtures::kEta;
using fixtures::kGamma;
using fixtures::kNu1;
using fixtures::kNu2;
using fixtures::max_abs;

TEST_CASE("one-site matrix: unit trace, oracle, multiple integral") {
  const SystemPtr sys = fixtures::finite_system();
  const DensityMatrix D = density_m1(*sys->field, kNu1);
  CHECK(std::abs(D.entries(0, 0) + D.entries(1, 1) - 1.0) < 1e-15);
  CHECK(max_abs(D.entries - density_direct(fixtures::finite_params(), {kNu1})) < 1e-8);
  CHECK(std::abs(multint_density(*sys, {kNu1}, 0, 0) - D.entries(0, 0)) < 1e-10);
  CHECK_THROWS_AS(density_m1_from_rho(1.0, 0.0, kEta), Error);
  const DensityMatrix any = density_m1_from_rho(cplx(0.3, 1.7), 0.2, kEta);
  CHECK(std::abs(any.entries.trace() - 1.0) < 1e-15);
}

TEST_CASE("zero field temperature: extrapolated one-site matrix is one half") {
  const ModelParams p = fixtures::trotter_params(2.0, 0.0);
  const GridPtr g = fixtures::fine_grid();
  const AuxPtr base = solve_aux_ptr(p, 0.0, g);
  const double e = 1e-3;
  std::map<double, DensityMatrix> fam;
  for (double a : {-2 * e, -e, e, 2 * e}) fam[a] = density_m1(*make_rho_field(base, solve_aux_ptr(p, a, g)), 0.0);
  const DensityMatrix D = physical_limit(fam, e);
  CHECK(D.provenance == Provenance::Extrapolated);
  CHECK(std::abs(D.entries(0, 0) - 0.5) < 1e-10);
  CHECK(std::abs(D.entries(1, 1) - 0.5) < 1e-10);
}

TEST_CASE("table rows and the difference equation") {
  const cplx x1(0.9, 0.1), x2(1.1, -0.05), q = std::exp(kEta);
  const TableRow r = table_row(P1Element::PMoverPM, x1, x2, q);
  CHECK(std::abs(r.c0 - 1.0) < 1e-15);
  CHECK(std::abs(r.c1 + x1 * x1) < 1e-15);
  CHECK(std::abs(r.c2 + q * q * x2 * x2) < 1e-15);
  CHECK(std::abs(r.c3 - q * q * x1 * x1 * x2 * x2) < 1e-15);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (P1Element e : {P1Element::PMoverPM, P1Element::MPoverMP, P1Element::PMoverMP, P1Element::MPoverPM}) {
    const TableRow row = table_row(e, x1, x2, q);
    for (int k = 0; k < 20; ++k) {
      const cplx w(u(rng), u(rng));
      CHECK(std::abs(difference_equation_residual(row, 0.1, kEta, w)) < 1e-12);
    }
  }
  CHECK_THROWS_AS(g_coefficients(r, 0.0, kEta), Error);
}

TEST_CASE("two-site elements: multiple integral, factorized form, two-fold quadrature, oracle") {
  const SystemPtr sys = fixtures::finite_system();
  const CMat O = density_direct(fixtures::finite_params(), {kNu1, kNu2});
  const DensityMatrix Dm = multint_density_matrix(*sys, {kNu1, kNu2});
  const DensityMatrix Df = density_m2(*sys, kNu1, kNu2);
  for (P1Element e : {P1Element::PMoverPM, P1Element::MPoverMP, P1Element::PMoverMP, P1Element::MPoverPM}) {
    const cplx fac = factorized_I(e, *sys, kNu1, kNu2);
    CHECK(std::abs(fac - two_fold_quadrature(e, *sys, kNu1, kNu2)) < 1e-8);
    CHECK(std::abs(fac - Dm.entries(element_row(e), element_col(e))) < 1e-8);
  }
  bool violated = false;
  CHECK(multint_density(*sys, {kNu1, kNu2}, 0, 1, &violated) == cplx(0.0));
  CHECK(violated);
  CHECK(sector_violation(Dm.entries) == 0.0);
  CHECK(std::abs(Df.entries.trace() - 1.0) < 1e-10);
  CHECK(max_abs(Df.entries - O) < 1e-6);
  CHECK(max_abs(Dm.entries - O) < 1e-6);
  CHECK(Df.provenance == Provenance::Factorized);
  CHECK(Dm.provenance == Provenance::Multint);

  const DensityMatrix D1a = density_m1(*sys->field, kNu1), D1b = density_m1(*sys->field, kNu2);
  CHECK(max_abs(partial_trace_last(Df.entries) - D1a.entries) < 1e-8);
  CHECK(max_abs(weighted_trace_first(Df.entries, 0.1, kEta) - rho_continued(*sys->field, kNu1) * D1b.entries) <
        1e-8);
}

TEST_CASE("three-site multiple integral on a coarse grid against the oracle") {
  const SystemPtr sys = fixtures::coarse_finite_system();
  const std::vector<cplx> nu = {kNu1, kNu2, cplx(0.12, -0.02)};
  const DensityMatrix D = multint_density_matrix(*sys, nu);
  CHECK(max_abs(D.entries - density_direct(fixtures::finite_params(), nu)) < 1e-5);
  CHECK(std::abs(D.entries.trace() - 1.0) < 1e-5);
  CHECK_THROWS_AS(multint_density_matrix(*sys, {kNu1, kNu2, 0.1, 0.2}), Error);
}

TEST_CASE("coincident and physical limits") {
  DensityMatrix a, b;
  a.m = b.m = 1;
  a.entries = CMat::Identity(2, 2) * 0.7;
  b.entries = CMat::Identity(2, 2) * 0.6;
  CHECK(std::abs(coincident_limit(a, b).entries(0, 0) - (4.0 * 0.6 - 0.7) / 3.0) < 1e-15);

  std::map<double, DensityMatrix> fam;
  for (double x : {-2e-3, -1e-3, 1e-3, 2e-3}) {
    DensityMatrix d;
    d.m = 1;
    d.entries = CMat::Identity(2, 2) * (0.5 + x * x);
    fam[x] = d;
  }
  CHECK(std::abs(physical_limit(fam, 1e-3).entries(0, 0) - 0.5) < 1e-12);
  fam.erase(2e-3);
  CHECK_THROWS_AS(physical_limit(fam, 1e-3), Error);
}

TEST_CASE("physical limit is insensitive to the alpha step") {
  const ModelParams p = fixtures::trotter_params(5.0, 0.3);
  const GridPtr g = fixtures::coarse_grid();
  const cplx tw = p.base_twist();
  const AuxPtr base = solve_aux_ptr(p, tw, g);
  auto limit = [&](double e) {
    std::map<double, DensityMatrix> fam;
    for (double a : {-2 * e, -e, e, 2 * e})
      fam[a] = density_m1(*make_rho_field(base, solve_aux_ptr(p, tw + a, g)), 0.0);
    return physical_limit(fam, e);
  };
  CHECK(max_abs(limit(1e-3).entries - limit(5e-4).entries) < 1e-8);
}

TEST_CASE("zz correlator at T = 5 in the Trotter limit against exact diagonalization") {
  const ModelParams p = fixtures::trotter_params(5.0, 0.0);
  const GridPtr g = fixtures::fine_grid();
  const AuxPtr base = solve_aux_ptr(p, 0.0, g);
  const double e = 1e-3, d = 1e-3;
  std::map<double, DensityMatrix> fam;
  for (double a : {-2 * e, -e, e, 2 * e}) {
    const SystemPtr sys = build_nystrom(make_rho_field(base, solve_aux_ptr(p, a, g)));
    fam[a] = coincident_limit(density_m2(*sys, d / 2, -d / 2), density_m2(*sys, d / 4, -d / 4));
  }
  const Correlators c = correlators(physical_limit(fam, e));
  CHECK(std::abs(c.szsz - thermal_ed(12, 5.0, 0.0, kGamma).zz) < 1e-3);
  CHECK(std::abs(c.sz) < 1e-10);
}
