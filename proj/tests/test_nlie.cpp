#include <doctest.h>

#include "fixtures.hpp"
#include "xxz/nlie.hpp"

using namespace xxz;
using fixtures::kEta;
using fixtures::kGamma;

namespace {

ModelParams homogeneous(int N, cplx kappa) {
  ModelParams p;
  p.gamma = kGamma;
  p.N = N;
  p.kappa = kappa;
  return p;
}

ModelParams infinite_temperature() {
  ModelParams p = fixtures::trotter_params(1e300, 0.0);
  return p;
}

}  // namespace

TEST_CASE("driving term: Trotter-limit asymptotics and homogeneous limit") {
  const ModelParams hot = fixtures::trotter_params(2.0, 0.0);
  for (double x : {19.9, -19.9})
    CHECK(std::abs(driving_term(hot, 0.3, cplx(x, 0.1)) + 2.0 * 0.3 * kEta) < 1e-12);
  ModelParams inh = homogeneous(4, 0.1);
  inh.beta_inhom.assign(4, kEta / 2.0);
  const cplx z(0.0, 0.25 * kGamma);
  CHECK(std::abs(driving_term(homogeneous(4, 0.1), 0.1, z) - driving_term(inh, 0.1, z)) < 1e-14);
}

TEST_CASE("inhomogeneous temperature driving term approaches the Trotter limit as 1/N^2") {
  const double T = 1.0;
  const ModelParams lim = fixtures::trotter_params(T, 0.0);
  const cplx z(0.3, 0.1);
  std::vector<double> err;
  for (int N : {64, 128}) {
    ModelParams p = lim;
    p.trotter_limit = false;
    p.N = N;
    err.push_back(std::abs(driving_term(p, 0.1, z) - driving_term(lim, 0.1, z)));
  }
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("infinite temperature: ln a is the constant -2 kappa eta") {
  const ModelParams p = infinite_temperature();
  const auto sol = solve_aux(p, 0.2, fixtures::coarse_grid());
  CHECK((sol.log_a.array() + 2.0 * 0.2 * kEta).abs().maxCoeff() < 1e-12);
  for (cplx z : {cplx(0.3, 0.05), cplx(-4.0, -0.1)}) CHECK(std::abs(eval_aux(sol, p, z) + 2.0 * 0.2 * kEta) < 1e-12);
}

TEST_CASE("zero twist: a at the mirrored point is the inverse conjugate") {
  const auto sol = solve_aux(homogeneous(4, 0.0), 0.0, fixtures::fine_grid());
  for (cplx z : {cplx(0.3, 0.1), cplx(-1.2, 0.05), cplx(2.0, -0.12)})
    CHECK(std::abs(aux_value(sol, std::conj(z)) - 1.0 / std::conj(aux_value(sol, z))) < 1e-12);
}

TEST_CASE("solution converges under grid refinement") {
  const ModelParams p = fixtures::finite_params();
  const auto a = solve_aux(p, 0.1, fixtures::fine_grid());
  const auto b = solve_aux(p, 0.1, make_grid(kGamma, 0.15, 20.0, 1536));
  for (cplx z : {cplx(0.3, 0.1), cplx(-1.2, 0.05), cplx(2.0, -0.12), cplx(0.0)})
    CHECK(std::abs(eval_aux(a, p, z) - eval_aux(b, p, z)) < 1e-11);
}

TEST_CASE("resubstitution at nodes and solver diagnostics") {
  const ModelParams p = fixtures::finite_params();
  const auto sol = solve_aux(p, 0.1, fixtures::fine_grid());
  CHECK(sol.residual < 1e-11);
  CHECK(resubstitution_residual(sol) == doctest::Approx(sol.residual));
  for (std::size_t k : {std::size_t(3), std::size_t(400), std::size_t(1000)})
    CHECK(std::abs(std::exp(eval_aux(sol, p, sol.grid->nodes[k])) / sol.a[k] - 1.0) < 1e-11);
}

TEST_CASE("a = -1 at the zeros of the dominant eigenvalue") {
  const ModelParams p = homogeneous(4, 0.1);
  const auto sol = solve_aux(p, 0.1, fixtures::fine_grid());
  const EigenPair ep = dominant_eigenpair(p, 0.1);
  int found = 0;
  for (cplx z : {cplx(0.2, 0.5), cplx(-0.2, 0.5)}) {
    for (int it = 0; it < 50; ++it) {
      const cplx f = eigenvalue_at(p, ep, z, 0.1);
      const cplx d = (eigenvalue_at(p, ep, z + 1e-6, 0.1) - eigenvalue_at(p, ep, z - 1e-6, 0.1)) / 2e-6;
      z -= f / d;
    }
    REQUIRE(std::abs(eigenvalue_at(p, ep, z, 0.1)) < 1e-10);
    CHECK(std::abs(aux_value(sol, z) + 1.0) < 1e-8);
    ++found;
  }
  CHECK(found == 2);
}

TEST_CASE("solver errors") {
  const ModelParams p = fixtures::finite_params();
  SolverOptions few;
  few.max_iter = 2;
  CHECK_THROWS_AS(solve_aux(p, 0.1, fixtures::coarse_grid(), few), NonConvergenceError);
  SolverOptions bad;
  bad.damping = 1.5;
  CHECK_THROWS_AS(solve_aux(p, 0.1, fixtures::coarse_grid(), bad), Error);
  CHECK_THROWS_AS(driving_term(fixtures::trotter_params(2.0, 0.0), 0.0, 0.0), Error);
  ModelParams odd = homogeneous(3, 0.0);
  CHECK_THROWS_AS(solve_aux(odd, 0.0, fixtures::coarse_grid()), Error);
}
