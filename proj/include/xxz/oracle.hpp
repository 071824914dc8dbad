#pragma once

#include <array>

#include "xxz/model.hpp"

namespace xxz {

// 4x4 six-vertex R-matrix, basis index 0 = spin up, 1 = spin down.
CMat build_R(cplx lambda, double gamma);

// Auxiliary-space components T^{a}_{b} (a = row, b = column) as 2^N x 2^N matrices on the chain.
struct MonodromyOperator {
  int N = 0;
  cplx kappa_twist = 0.0;
  cplx lambda = 0.0;
  std::array<CMat, 4> blocks;  // index 2 a + b
  const CMat& operator()(int a, int b) const { return blocks[2 * a + b]; }
  CMat transfer() const { return blocks[0] + blocks[3]; }
};

inline constexpr int kOracleMaxSites = 10;

// T(lambda, kappa) = R_{aN}(lambda - beta_N) ... R_{a1}(lambda - beta_1) q^{kappa sigma^z_a}.
// Chain site j (1-based) is bit j-1 of the basis index.
MonodromyOperator build_monodromy(const std::vector<cplx>& betas, double gamma, cplx lambda, cplx kappa_twist);
MonodromyOperator build_monodromy(const ModelParams& params, cplx lambda, cplx kappa_twist);
// Column transfer monodromy with transposed factors on odd sites (staggered lattice form).
MonodromyOperator build_qtm_monodromy(int N, double gamma, cplx beta_over_N, cplx lambda, cplx kappa_twist);

CMat transfer_matrix(const ModelParams& params, cplx lambda, cplx kappa_twist);

struct EigenPair {
  cplx eigenvalue = 0.0;  // at the reference point (q^{1/2} finite length, 1 temperature)
  CVec right;
  CVec left;   // row vector stored as a column: left^T t = Lambda left^T
  double gap_ratio = 0.0;
};

// Finite length: lowest energy state of the twisted Hamiltonian. Temperature: largest |Lambda(1)|.
// Finite-length gap_ratio is exp(-(E_1 - E_0)/J); temperature gap_ratio is |Lambda_1/Lambda_0|.
EigenPair dominant_eigenpair(const ModelParams& params, cplx kappa_twist, double eps_gap = 1e-6);

// Lambda(lambda) for a fixed eigenvector pair.
cplx eigenvalue_at(const ModelParams& params, const EigenPair& ep, cplx lambda, cplx kappa_twist);

// Reference spectral parameter: eta/2 finite length, 0 temperature.
cplx reference_lambda(const ModelParams& params);

// Density matrix <k+a| prod_j T^{e'_j}_{e_j}(nu_j) |k> / <k+a| prod_j t(nu_j) |k>.
// Entry (row, col) is (e', e) with site 1 the least significant bit, bit 0 = spin up.
CMat density_direct(const ModelParams& params, const std::vector<cplx>& nu);
cplx density_direct(const ModelParams& params, const std::vector<cplx>& nu, int row, int col);
// Same object from the transposed ordering <k| T^{e_m}_{e'_m} ... T^{e_1}_{e'_1} |k+a>.
CMat density_direct_transposed(const ModelParams& params, const std::vector<cplx>& nu);

// Twisted-boundary Hamiltonian built site by site, and the one from the log-derivative of t at eta/2.
CMat hamiltonian_explicit(int N, double gamma, double J, cplx kappa);
CMat hamiltonian_from_transfer(int N, double gamma, double J, cplx kappa, double step = 1e-5);

struct ThermalCorrelators {
  double magnetization = 0.0;  // <S^z_j>
  double zz = 0.0;             // <sigma^z_1 sigma^z_2>
  double pm = 0.0;             // <sigma^+_1 sigma^-_2>
  double energy = 0.0;         // <H>/L
};

// Periodic chain of length L <= 12, weight exp(-H/T + h S^z/T).
ThermalCorrelators thermal_ed(int L, double T, double h, double gamma, double J = 1.0);

// Pauli matrices in the basis (up, down).
CMat pauli_x();
CMat pauli_y();
CMat pauli_z();
CMat sigma_plus();   // |up><down|
CMat sigma_minus();  // |down><up|
// Embeds a 2x2 operator acting on site j (0-based) of an N-site chain.
CMat site_operator(const CMat& op, int j, int N);
// Kronecker product A_1 (x) A_2 (x) ... with site 1 the least significant factor.
CMat kron_sites(const std::vector<CMat>& ops);

}  // namespace xxz
