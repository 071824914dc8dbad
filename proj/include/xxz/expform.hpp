#pragma once

#include "xxz/common.hpp"

namespace xxz {

// Row-major vectorization of a d x d operator.
CVec vec(const CMat& X);
CMat unvec(const CVec& v, Eigen::Index d);

// (A (x) B)(X) = A tr(B X) as a matrix on vectorized operators.
CMat tensor_action(const CMat& A, const CMat& B);
// X -> M X M^{-1} as a matrix on vectorized operators.
CMat conjugation_action(const CMat& M);
// P R(ln z) on two sites, P the swap.
CMat swapped_R(cplx z, cplx eta);

// Linear map on m-site operators; acts on vec(X).
struct OperatorOnOperators {
  int m = 0;
  int j = 0;  // site label within [1, m]
  CMat matrix;
  CMat apply(const CMat& X) const;
};

// t_j for m in {1, 2} on spin-0 operators; xi holds xi_1..xi_m.
OperatorOnOperators build_t(int m, int j, cplx alpha, cplx eta, const std::vector<cplx>& xi);
std::vector<OperatorOnOperators> build_all_t(int m, cplx alpha, cplx eta, const std::vector<cplx>& xi);

// prod_j (1 - t_j + rho_j t_j) as one matrix, and its action on X.
CMat Omega2_map(const std::vector<OperatorOnOperators>& ts, const std::vector<cplx>& rho);
CMat apply_Omega2(const std::vector<OperatorOnOperators>& ts, const std::vector<cplx>& rho, const CMat& X);

// Per-site functional tr(Y) = up Y_{++} + down Y_{--} on spin-0 two-by-two operators, applied site by site.
struct AlphaTrace {
  cplx up = 0.5;
  cplx down = 0.5;
  double fit_residual = 0.0;
  cplx operator()(const CMat& Y) const;
};

// Least-squares fit of the per-site functional so the exponential form reproduces the one-site matrix
// identically in rho. Model error if no functional fits.
AlphaTrace calibrate_alpha_trace(cplx alpha, cplx eta, double tol = 1e-10);

// Spin-0 basis of two-site operators: the four diagonal units, sigma^+ (x) sigma^-, sigma^- (x) sigma^+.
std::vector<CMat> spin_zero_basis_m2();

// Two-site matrix rebuilt from the exponential form: the Omega_2 part evaluated with the calibrated trace plus
// the Omega_1 block injected from omega - omega_0 at both poles.
CMat exponential_form_m2(const AlphaTrace& trace, cplx alpha, cplx eta, cplx nu1, cplx nu2, cplx omega12,
                         cplx omega21, cplx rho1, cplx rho2);

// alpha -> 0 residue t^{(0)}_j = lim (1 - q^alpha) t_j and the fermionic h_j, for m in {1, 2}.
struct ResidueAndH {
  CMat t0;
  CMat h;
};
ResidueAndH t_residue_and_h(int m, int j, cplx eta, const std::vector<cplx>& xi);

// max over a spin-0 basis of |trace((bosonic - fermionic)(X))| at small alpha; phi_j are the fermionic weights.
double fermi_bose_difference(cplx alpha, cplx eta, const std::vector<cplx>& xi, cplx phi1, cplx phi2);

// Property residuals used by the verification suite.
double projector_residual(const OperatorOnOperators& t);
double commutator_residual(const OperatorOnOperators& a, const OperatorOnOperators& b);
// Largest component of t(E) outside the operator-spin block of E over the unit basis.
double spin_block_residual(const OperatorOnOperators& t);
// The four two-site reduction properties on random spin-0 local operators (m = 2), and t(q^{alpha sigma^z}) = q^{alpha
// sigma^z}, t(I) = 0 (m = 1).
std::vector<double> reduction_residuals(cplx alpha, cplx eta, const std::vector<cplx>& xi, unsigned seed = 1);

}  // namespace xxz
