#pragma once

#include <functional>
#include <map>

#include "xxz/special.hpp"

namespace xxz {

enum class Provenance { Multint, Factorized, Oracle, Extrapolated };
const char* to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

// Entries indexed (e'-multi-index, e-multi-index); site 1 is the least significant bit, bit 0 = spin up.
struct DensityMatrix {
  int m = 0;
  CMat entries;
  std::vector<cplx> nu;  // xi_j = e^{nu_j}
  cplx kappa = 0.0;
  cplx alpha = 0.0;
  Provenance provenance = Provenance::Multint;

  std::vector<cplx> xi() const;
  // D*(X) = tr(D X).
  cplx expectation(const CMat& op) const { return (entries * op).trace(); }
};

// One-site matrix diag((rho - q^{-alpha}), (q^alpha - rho)) / (q^alpha - q^{-alpha}).
DensityMatrix density_m1(const RhoField& f, cplx nu);
DensityMatrix density_m1_from_rho(cplx rho, cplx alpha, cplx eta, cplx nu = 0.0, cplx kappa = 0.0);

// Nodes with |Re lambda| above this are dropped from the three-fold multiple integral.
inline constexpr double kMultintTruncation = 11.0;

// Multiple-integral element; m <= 3. Sector-violating elements are exactly 0 with *sector_violated set.
cplx multint_density(const NystromSystem& sys, const std::vector<cplx>& nu, int row, int col,
                     bool* sector_violated = nullptr);
DensityMatrix multint_density_matrix(const NystromSystem& sys, const std::vector<cplx>& nu);

// The four two-site elements with one up spin on each side, named e'_1 e'_2 / e_1 e_2.
enum class P1Element { PMoverPM, MPoverMP, PMoverMP, MPoverPM };
const char* to_string(P1Element e);
int element_row(P1Element e);
int element_col(P1Element e);

struct TableRow {
  cplx c0, c1, c2, c3;
};
// Coefficients of p(w1, w2) = c0 w1 w2 + c1 w1 + c2 w2 + c3 for an element.
TableRow table_row(P1Element e, cplx xi1, cplx xi2, cplx q);

// g(w) = g_+ w + g_0 + g_- / w solving the first-order difference equation for a given table row.
struct GCoefficients {
  cplx plus, zero, minus;
  cplx g(cplx w) const { return plus * w + zero + minus / w; }
};
GCoefficients g_coefficients(const TableRow& row, cplx alpha, cplx eta);
// g(q^2 w)/y - g(w) y - p(q^2 w, w)/(2 q^2 w) with p built from the row.
cplx difference_equation_residual(const TableRow& row, cplx alpha, cplx eta, cplx w);

// Factorized element from Psi(xi1, xi2), Psi(xi2, xi1), rho(xi1), rho(xi2).
cplx factorized_I(P1Element e, cplx alpha, cplx eta, cplx nu1, cplx nu2, cplx Psi12, cplx Psi21, cplx rho1,
                  cplx rho2, const TableRow* override_row = nullptr);
cplx factorized_I(P1Element e, const NystromSystem& sys, cplx nu1, cplx nu2, const TableRow* override_row = nullptr);
// The same element as a direct double contour sum of det[G(mu_j, nu_k)] p(w1, w2)/(w1 - q^2 w2) / (xi2^2 - xi1^2)
// with measures dm and a dm.
cplx two_fold_quadrature(P1Element e, const NystromSystem& sys, cplx nu1, cplx nu2);

// Full two-site matrix from omega_12, omega_21, phi_1, phi_2.
DensityMatrix density_m2(cplx alpha, cplx eta, cplx nu1, cplx nu2, cplx omega12, cplx omega21, cplx phi1,
                         cplx phi2, cplx kappa = 0.0);
DensityMatrix density_m2(const NystromSystem& sys, cplx nu1, cplx nu2);

// The two-site operator whose expectation, times -xi^alpha, gives omega(xi1, xi2).
CMat omega_operator(cplx xi, cplx alpha, cplx eta);

// Reduction residuals of an m-site matrix against (m-1)-site ones:
// right: tr_m D_m - D_{m-1}(xi_1..xi_{m-1}); left: tr_1(D_m q^{alpha sigma^z_1}) - rho(xi_1) D_{m-1}(xi_2..xi_m).
CMat partial_trace_last(const CMat& D);
CMat weighted_trace_first(const CMat& D, cplx alpha, cplx eta);
double sector_violation(const CMat& D);

// Richardson extrapolation to alpha = 0 from alpha in {-2e, -e, e, 2e}.
DensityMatrix physical_limit(const std::map<double, DensityMatrix>& family, double eps, double spread_tol = 1e-4);

// Cross-checks two families of matrices at coincident-argument offsets d and d/2, extrapolating in d^2.
DensityMatrix coincident_limit(const DensityMatrix& at_d, const DensityMatrix& at_half_d);

// Named correlators <sigma^z_1>, <sigma^z_1 sigma^z_2>, <sigma^x_1 sigma^x_2>.
struct Correlators {
  cplx sz = 0.0;
  cplx szsz = 0.0;
  cplx sxsx = 0.0;
};
Correlators correlators(const DensityMatrix& D);

}  // namespace xxz
