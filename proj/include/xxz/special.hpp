#pragma once

#include <memory>

#include "xxz/nlie.hpp"

namespace xxz {

// Eigenvalue ratio rho(zeta) = Lambda(zeta, kappa + alpha) / Lambda(zeta, kappa) from two aux solutions.
struct RhoField {
  GridPtr grid;
  AuxPtr base;     // twist kappa
  AuxPtr twisted;  // twist kappa + alpha
  cplx alpha = 0.0;
  CVec rho_nodes;  // rho at the contour nodes (interior limit)
  cplx eta() const { return base->params.eta(); }
};

using RhoPtr = std::shared_ptr<const RhoField>;

RhoPtr make_rho_field(AuxPtr base, AuxPtr twisted);
// Solves both aux functions at params.base_twist() and params.base_twist() + params.alpha.
RhoPtr make_rho_field(const ModelParams& params, const GridPtr& grid, const SolverOptions& opts = {});

// rho at zeta = e^lambda from the integral representation; lambda must not lie on the contour.
cplx compute_rho(const RhoField& f, cplx zeta);
cplx rho_at(const RhoField& f, cplx lambda);
// rho continued to any lambda off the contour.
cplx rho_continued(const RhoField& f, cplx lambda);

// phi = (ch(alpha eta) - rho) / sh(alpha eta).
cplx compute_phi(const RhoField& f, cplx zeta);
cplx phi_from_rho(cplx rho, cplx alpha, cplx eta);

// psi(xi) = xi^alpha (xi^2 + 1) / (2 (xi^2 - 1)).
cplx psi(cplx xi, cplx alpha);
// omega_0 = -((1 - q^alpha)/(1 + q^alpha))^2 (psi(q xi) - psi(xi/q)).
cplx omega0(cplx xi, cplx alpha, cplx eta);

// Nystrom system for G, factorized once per rho field.
struct NystromSystem {
  RhoPtr field;
  CVec dm;  // w_k / (2 pi i rho(lambda_k) (1 + a(lambda_k)))
  Eigen::PartialPivLU<CMat> lu;
  std::string hash;
  double rcond = 0.0;
};

using SystemPtr = std::shared_ptr<const NystromSystem>;

SystemPtr build_nystrom(RhoPtr field, double rcond_floor = 1e-13);

struct GTable {
  cplx nu = 0.0;
  CVec values;
  cplx rho_at_nu = 0.0;
  std::string kernel_matrix_hash;
};

GTable solve_G(const NystromSystem& sys, cplx nu);
// G(lambda, nu) off the nodes by the integral equation itself (no continuation terms).
cplx eval_G(const NystromSystem& sys, const GTable& table, cplx lambda);
cplx continue_G(const NystromSystem& sys, const GTable& table, cplx lambda);
// Residual of q^{-alpha} - (q^alpha - q^{-alpha}) int dm G - rho(xi).
cplx rho_identity_residual(const NystromSystem& sys, const GTable& table);

// Psi(xi1, xi2) for nu1 inside the contour; table holds G(., nu2).
cplx compute_Psi(const NystromSystem& sys, const GTable& table, cplx nu1);
// Psi continued to nu1 anywhere off the contour.
cplx continue_Psi(const NystromSystem& sys, const GTable& table, cplx nu1);

struct OmegaPieces {
  cplx Psi12 = 0.0;
  cplx rho1 = 0.0;
  cplx rho2 = 0.0;
  cplx omega = 0.0;
};

// omega(xi1, xi2) = 2 xi^alpha Psi - (psi(q xi) - psi(xi/q)) + 2 (rho1 - rho2) psi(xi), xi = xi1/xi2.
OmegaPieces compute_omega(const NystromSystem& sys, cplx nu1, cplx nu2);
OmegaPieces compute_omega(const NystromSystem& sys, const GTable& table2, cplx nu1);

// Derivative in alpha at alpha = 0 of xi^{-alpha} omega, with the supporting diagnostics.
struct OmegaPrimeResult {
  cplx route_a = 0.0;      // from the alpha = 0 integral equations
  cplx route_b = 0.0;      // Richardson-refined central difference of xi^{-alpha} omega
  cplx omega_old_12 = 0.0; // the old-convention derivative and its exchange partner
  cplx omega_old_21 = 0.0;
  cplx symmetric_12 = 0.0; // symmetric representation evaluated both ways
  cplx symmetric_21 = 0.0;
  cplx route_b_21 = 0.0;
  double identity_residual = 0.0;      // G'-based representation vs the half-sum
  double antisymmetry_residual = 0.0;  // |old_12 + old_21|
  double old_relation_residual = 0.0;  // |old_12 - (omega'_21 - omega'_12)/2|
  double route_gap = 0.0;
};

struct OmegaPrimeOptions {
  double eps_alpha = 1e-4;
  double tolerance = 1e-6;
  bool enforce = true;  // throw a consistency error when the routes disagree
};

OmegaPrimeResult omega_prime(const ModelParams& params, const GridPtr& grid, cplx nu1, cplx nu2,
                             const OmegaPrimeOptions& opts = {}, const SolverOptions& solver = {});

// G_0 at alpha = 0: G_0 - int dm_0 K G_0 = e(nu - lambda), dm_0 = w / (2 pi i (1 + a)).
CVec solve_G0(const AuxSolution& base, cplx nu);

// Central difference with one Richardson step from values at -2e, -e, e, 2e.
template <class T>
T richardson_derivative(const T& fm2, const T& fm1, const T& fp1, const T& fp2, double e) {
  return (8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * e);
}

}  // namespace xxz
