#include <doctest.h>

#include "fixtures.hpp"

using namespace xxz;
using fixtures::kEta;
using fixtures::kGamma;
using fixtures::max_abs;

namespace {

CMat partial_transpose(const CMat& M, int bit) {
  CMat out = M;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      const int r2 = (r & ~(1 << bit)) | (c & (1 << bit));
      const int c2 = (c & ~(1 << bit)) | (r & (1 << bit));
      out(r2, c2) = M(r, c);
    }
  return out;
}

CMat total_sz(int N) {
  const Eigen::Index dim = Eigen::Index(1) << N;
  CMat S = CMat::Zero(dim, dim);
  for (int j = 0; j < N; ++j) S += site_operator(pauli_z(), j, N);
  return S;
}

}  // namespace

TEST_CASE("R-matrix: permutation at zero, spin reversal, crossing") {
  CMat P = CMat::Zero(4, 4);
  P(0, 0) = P(3, 3) = P(1, 2) = P(2, 1) = 1.0;
  CHECK(max_abs(build_R(0.0, kGamma) - P) < 1e-15);
  const CMat XX = kron_sites({pauli_x(), pauli_x()});
  const cplx lam(0.37, 0.11);
  CHECK(max_abs(XX * build_R(lam, kGamma) * XX - build_R(lam, kGamma)) < 1e-15);
  const CMat Y2 = kron_sites({CMat::Identity(2, 2), pauli_y()});
  const cplx b = sh(lam - kEta) / sh(lam);
  CHECK(max_abs(Y2 * build_R(lam - kEta, kGamma) * Y2 - b * partial_transpose(build_R(-lam, kGamma), 0)) < 1e-14);
  CHECK_THROWS_AS(build_R(-kEta, kGamma), Error);
}

TEST_CASE("two-site transfer matrix conserves total spin") {
  const auto T = build_monodromy({kEta / 2.0, kEta / 2.0}, kGamma, kEta / 2.0, 0.0);
  const CMat t = T.transfer(), S = total_sz(2);
  CHECK(max_abs(t * S - S * t) < 1e-14);
}

TEST_CASE("staggered monodromy equals the column transfer monodromy up to crossing") {
  const int N = 4;
  const cplx bN = 0.13, lam(0.21, 0.05), k = 0.07;
  std::vector<cplx> betas;
  for (int j = 0; j < N / 2; ++j) {
    betas.push_back(kEta - bN);
    betas.push_back(bN);
  }
  const auto Ti = build_monodromy(betas, kGamma, lam, k);
  const auto Tq = build_qtm_monodromy(N, kGamma, bN, lam, k);
  std::vector<CMat> ys;
  for (int j = 0; j < N; ++j) ys.push_back(j % 2 == 0 ? pauli_y() : CMat::Identity(2, 2));
  const CMat Y = kron_sites(ys);
  cplx pref = 1.0;
  for (int j = 0; j < N; j += 2) pref *= sh(lam - betas[j]) / sh(lam - betas[j] + kEta);
  for (int ab = 0; ab < 4; ++ab) CHECK(max_abs(Ti.blocks[ab] - pref * Y * Tq.blocks[ab] * Y) < 1e-12);
}

TEST_CASE("transfer matrices commute") {
  const auto p = fixtures::finite_params();
  const CMat t1 = transfer_matrix(p, cplx(0.2, 0.1), 0.1), t2 = transfer_matrix(p, cplx(-0.4, 0.2), 0.1);
  CHECK((t1 * t2 - t2 * t1).norm() < 1e-10);
}

TEST_CASE("Hamiltonian from the log-derivative of the transfer matrix") {
  for (cplx kappa : {cplx(0.0), cplx(0.23)}) {
    const CMat a = hamiltonian_explicit(4, kGamma, 1.0, kappa), b = hamiltonian_from_transfer(4, kGamma, 1.0, kappa);
    CHECK((a - b).norm() < 1e-6);
  }
}

TEST_CASE("dominant eigenpair: spin-zero sector, eigenvalue symmetry, spin reversal") {
  ModelParams p;
  p.gamma = kGamma;
  p.N = 4;
  const EigenPair e0 = dominant_eigenpair(p, 0.0);
  const CMat S = total_sz(4);
  CHECK((S * e0.right).norm() < 1e-10 * e0.right.norm());
  CHECK(e0.gap_ratio < 1.0);

  const EigenPair ep = dominant_eigenpair(p, 0.17), em = dominant_eigenpair(p, -0.17);
  for (cplx z : {cplx(0.1, 0.2), cplx(-0.3, 0.05)})
    CHECK(std::abs(eigenvalue_at(p, ep, z, 0.17) - eigenvalue_at(p, em, z, -0.17)) < 1e-10);

  CMat J = CMat::Identity(1, 1);
  std::vector<CMat> xs(4, pauli_x());
  J = kron_sites(xs);
  const CVec flipped = J * ep.right;
  const cplx overlap = em.right.dot(flipped) / em.right.squaredNorm();
  CHECK((flipped - overlap * em.right).norm() < 1e-10 * flipped.norm());
}

TEST_CASE("oracle density matrix: orderings, spin reversal, reductions, trivial limit") {
  const auto p = fixtures::finite_params();
  const std::vector<cplx> nu = {fixtures::kNu1, fixtures::kNu2};
  const CMat D = density_direct(p, nu);
  CHECK(max_abs(D - density_direct_transposed(p, nu)) < 1e-10);
  const CMat XX = kron_sites({pauli_x(), pauli_x()});
  CHECK(max_abs(XX * D * XX - density_direct(fixtures::finite_params(-0.1, -0.1), nu)) < 1e-10);
  CHECK(sector_violation(D) < 1e-12);
  CHECK(std::abs(D.trace() - 1.0) < 1e-12);
  CHECK(max_abs(partial_trace_last(D) - density_direct(p, {nu[0]})) < 1e-12);
  const CMat D2 = density_direct(p, {nu[1]});
  const cplx rho1 = weighted_trace_first(density_direct(p, {nu[0]}), p.alpha, kEta)(0, 0);
  CHECK(max_abs(weighted_trace_first(D, p.alpha, kEta) - rho1 * D2) < 1e-12);

  ModelParams p0;
  p0.gamma = kGamma;
  p0.N = 4;
  const CMat half = density_direct(p0, {0.0});
  CHECK(std::abs(half(0, 0) - 0.5) < 1e-12);
  CHECK(std::abs(half(1, 1) - 0.5) < 1e-12);
}

TEST_CASE("oracle rejects oversize chains") {
  ModelParams p;
  p.N = 12;
  CHECK_THROWS_AS(density_direct(p, {0.0}), Error);
  CHECK_THROWS_AS(thermal_ed(14, 5.0, 0.0, kGamma), Error);
}

TEST_CASE("thermal exact diagonalization limits") {
  const double T = 1000.0, h = 100.0;
  const auto hot = thermal_ed(8, T, h, kGamma);
  const double m = 0.5 * std::tanh(h / (2.0 * T));
  CHECK(hot.magnetization == doctest::Approx(m).epsilon(5e-3));
  CHECK(hot.zz == doctest::Approx(4.0 * m * m).epsilon(2e-2));
  CHECK(std::abs(thermal_ed(8, 2.0, 0.0, kGamma).magnetization) < 1e-12);
  const auto a = thermal_ed(10, 5.0, 0.0, kGamma), b = thermal_ed(12, 5.0, 0.0, kGamma);
  CHECK(std::abs(a.zz - b.zz) < 1e-4);
  CHECK(std::abs(a.pm - b.pm) < 1e-4);
}
