#include "xxz/density.hpp"

#include "xxz/oracle.hpp"

namespace xxz {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Multint: return "multint";
    case Provenance::Factorized: return "factorized";
    case Provenance::Oracle: return "oracle";
    case Provenance::Extrapolated: return "extrapolated";
  }
  return "unknown";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "multint") return Provenance::Multint;
  if (s == "factorized") return Provenance::Factorized;
  if (s == "oracle") return Provenance::Oracle;
  if (s == "extrapolated") return Provenance::Extrapolated;
  throw Error(ErrorKind::Usage, "unknown provenance " + s);
}

std::vector<cplx> DensityMatrix::xi() const {
  std::vector<cplx> out;
  for (auto v : nu) out.push_back(std::exp(v));
  return out;
}

DensityMatrix density_m1_from_rho(cplx rho, cplx alpha, cplx eta, cplx nu, cplx kappa) {
  if (alpha == cplx(0.0)) throw Error(ErrorKind::Domain, "alpha = 0 requires extrapolation");
  const cplx y = std::exp(alpha * eta);
  DensityMatrix D;
  D.m = 1;
  D.entries = CMat::Zero(2, 2);
  D.entries(0, 0) = (rho - 1.0 / y) / (y - 1.0 / y);
  D.entries(1, 1) = (y - rho) / (y - 1.0 / y);
  D.nu = {nu};
  D.kappa = kappa;
  D.alpha = alpha;
  D.provenance = Provenance::Factorized;
  return D;
}

DensityMatrix density_m1(const RhoField& f, cplx nu) {
  return density_m1_from_rho(rho_continued(f, nu), f.alpha, f.eta(), nu, f.base->twist);
}

namespace {

CVec F_product(const ContourGrid& g, int l, const std::vector<cplx>& nu, double sign, cplx eta) {
  CVec r = CVec::Ones(g.size());
  for (std::size_t j = 0; j < g.size(); ++j)
    for (int k = 0; k < static_cast<int>(nu.size()); ++k) {
      if (k < l) r[j] *= sh(g.nodes[j] - nu[k]);
      else if (k > l) r[j] *= sh(g.nodes[j] - nu[k] - sign * eta);
    }
  return r;
}

}  // namespace

cplx multint_density(const NystromSystem& sys, const std::vector<cplx>& nu, int row, int col, bool* sector_violated) {
  const int m = static_cast<int>(nu.size());
  if (m < 1 || m > 3) throw Error(ErrorKind::Capability, "multiple integrals are limited to m <= 3");
  const RhoField& f = *sys.field;
  const ContourGrid& g = *f.grid;
  const cplx eta = f.eta();
  std::vector<int> ep(m), e(m);
  int up_out = 0, up_in = 0;
  for (int j = 0; j < m; ++j) {
    ep[j] = (row >> j) & 1;
    e[j] = (col >> j) & 1;
    up_out += ep[j];
    up_in += e[j];
  }
  if (sector_violated) *sector_violated = (up_out != up_in);
  if (up_out != up_in) return 0.0;

  std::vector<int> plus, minus_out;
  for (int j = 0; j < m; ++j) {
    if (e[j] == 0) plus.push_back(j);
    if (ep[j] == 1) minus_out.push_back(j);
  }
  const int p = static_cast<int>(plus.size());
  std::vector<CVec> meas;
  for (int j = 0; j < m; ++j) {
    if (j < p) {
      meas.push_back(sys.dm.cwiseProduct(F_product(g, plus[j], nu, +1.0, eta)));
    } else {
      const int l = minus_out[m - 1 - j];
      meas.push_back(sys.dm.cwiseProduct(f.base->a).cwiseProduct(F_product(g, l, nu, -1.0, eta)));
    }
  }
  std::vector<CVec> G;
  for (auto v : nu) G.push_back(solve_G(sys, v).values);
  const Eigen::Index M = g.size();

  cplx nu_den = 1.0;
  for (int j = 0; j < m; ++j)
    for (int k = j + 1; k < m; ++k) nu_den *= sh(nu[k] - nu[j]);

  if (m == 1) return -(meas[0].array() * G[0].array()).sum();

  CMat S(M, M);
  for (Eigen::Index k = 0; k < M; ++k)
    for (Eigen::Index i = 0; i < M; ++i) S(i, k) = 1.0 / sh(g.nodes[i] - g.nodes[k] - eta);

  cplx total = 0.0;
  if (m == 2) {
    for (Eigen::Index i = 0; i < M; ++i) {
      cplx acc = 0.0;
      for (Eigen::Index k = 0; k < M; ++k)
        acc += meas[1][k] * (G[0][i] * G[1][k] - G[1][i] * G[0][k]) * S(i, k);
      total += meas[0][i] * acc;
    }
    return total / nu_den;
  }
  // Three-fold sums: round-off in G at large |Re lambda| is amplified by e^{6 |Re lambda|} in the
  // three-far corner, so the nodes are truncated where the exact integrand is already negligible.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < M; ++k)
    if (std::abs(g.nodes[k].real()) <= kMultintTruncation) keep.push_back(k);
  const Eigen::Index K = static_cast<Eigen::Index>(keep.size());
  CMat St(K, K);
  for (Eigen::Index b = 0; b < K; ++b)
    for (Eigen::Index a = 0; a < K; ++a) St(a, b) = S(keep[a], keep[b]);
  auto restrict = [&](const CVec& a, const CVec& b) {
    CVec r(K);
    for (Eigen::Index i = 0; i < K; ++i) r[i] = a[keep[i]] * b[keep[i]];
    return r;
  };
  // det expanded over permutations grouped by the third column: sum_ij u_i v_j S_ij (S diag(w) S^T)_ij.
  for (int c = 0; c < 3; ++c) {
    const int a = (c + 1) % 3, b = (c + 2) % 3;
    const CMat T = St.cwiseProduct(St * restrict(meas[2], G[c]).asDiagonal() * St.transpose());
    const CVec ua = restrict(meas[0], G[a]), ub = restrict(meas[0], G[b]);
    const CVec va = restrict(meas[1], G[a]), vb = restrict(meas[1], G[b]);
    total += (ua.transpose() * T * vb)(0) - (ub.transpose() * T * va)(0);
  }
  return -total / nu_den;
}

DensityMatrix multint_density_matrix(const NystromSystem& sys, const std::vector<cplx>& nu) {
  const int m = static_cast<int>(nu.size());
  const int dim = 1 << m;
  DensityMatrix D;
  D.m = m;
  D.entries = CMat::Zero(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) D.entries(r, c) = multint_density(sys, nu, r, c);
  D.nu = nu;
  D.kappa = sys.field->base->twist;
  D.alpha = sys.field->alpha;
  D.provenance = Provenance::Multint;
  return D;
}

const char* to_string(P1Element e) {
  switch (e) {
    case P1Element::PMoverPM: return "+-/+-";
    case P1Element::MPoverMP: return "-+/-+";
    case P1Element::PMoverMP: return "+-/-+";
    case P1Element::MPoverPM: return "-+/+-";
  }
  return "?";
}

// Multi-index of (+,-) is 0 + 2 = 2 and of (-,+) is 1.
int element_row(P1Element e) { return (e == P1Element::PMoverPM || e == P1Element::PMoverMP) ? 2 : 1; }
int element_col(P1Element e) { return (e == P1Element::PMoverPM || e == P1Element::MPoverPM) ? 2 : 1; }

TableRow table_row(P1Element e, cplx x1, cplx x2, cplx q) {
  switch (e) {
    case P1Element::PMoverPM: return {1.0, -x1 * x1, -q * q * x2 * x2, q * q * x1 * x1 * x2 * x2};
    case P1Element::MPoverMP: return {q * q, -x2 * x2, -q * q * x1 * x1, x1 * x1 * x2 * x2};
    case P1Element::PMoverMP: return {q * x2 / x1, -q * x1 * x2, -q * x1 * x2, q * x1 * x1 * x1 * x2};
    case P1Element::MPoverPM: return {q * x1 / x2, -x1 * x2 / q, -q * q * q * x1 * x2, q * x1 * x2 * x2 * x2};
  }
  throw Error(ErrorKind::Usage, "unknown element");
}

GCoefficients g_coefficients(const TableRow& c, cplx alpha, cplx eta) {
  const cplx q = std::exp(eta), y = std::exp(alpha * eta);
  const cplx d1 = q * q - y * y, d2 = 1.0 - q * q * y * y, d3 = 1.0 - y * y;
  if (std::abs(d1) < 1e-12 || std::abs(d2) < 1e-12 || std::abs(d3) < 1e-12)
    throw Error(ErrorKind::ExcludedParameter, "alpha at a pole of the g coefficients");
  return {c.c0 * y / (2.0 * d1), (c.c1 + c.c2 / (q * q)) * y / (2.0 * d3), c.c3 * y / (2.0 * d2)};
}

cplx difference_equation_residual(const TableRow& c, cplx alpha, cplx eta, cplx w) {
  const cplx q = std::exp(eta), y = std::exp(alpha * eta);
  const GCoefficients gc = g_coefficients(c, alpha, eta);
  const cplx w1 = q * q * w, w2 = w;
  const cplx p = c.c0 * w1 * w2 + c.c1 * w1 + c.c2 * w2 + c.c3;
  return gc.g(q * q * w) / y - gc.g(w) * y - p / (2.0 * q * q * w);
}

cplx factorized_I(P1Element e, cplx alpha, cplx eta, cplx nu1, cplx nu2, cplx Psi12, cplx Psi21, cplx r1, cplx r2,
                  const TableRow* override_row) {
  const cplx q = std::exp(eta), y = std::exp(alpha * eta);
  const cplx x1 = std::exp(nu1), x2 = std::exp(nu2);
  const cplx s = x2 * x2 - x1 * x1;
  if (std::abs(s) < 1e-12) throw Error(ErrorKind::Domain, "coincident xi; perturb and extrapolate");
  const TableRow c = override_row ? *override_row : table_row(e, x1, x2, q);
  const GCoefficients gc = g_coefficients(c, alpha, eta);
  const cplx yy = y - 1.0 / y;
  auto fw = [&](cplx w) { return yy * (gc.plus * w - gc.minus / w); };
  return (gc.g(x2 * x2) * Psi21 - gc.g(x1 * x1) * Psi12) / s + (c.c1 - c.c2 / (q * q)) * (r1 - r2) / (2.0 * s * yy) +
         ((1.0 / y - r1) * (y - r2) * fw(x2 * x2) - (1.0 / y - r2) * (y - r1) * fw(x1 * x1)) / (s * yy * yy);
}

cplx factorized_I(P1Element e, const NystromSystem& sys, cplx nu1, cplx nu2, const TableRow* override_row) {
  const GTable t1 = solve_G(sys, nu1), t2 = solve_G(sys, nu2);
  const cplx P12 = compute_Psi(sys, t2, nu1), P21 = compute_Psi(sys, t1, nu2);
  return factorized_I(e, sys.field->alpha, sys.field->eta(), nu1, nu2, P12, P21, t1.rho_at_nu, t2.rho_at_nu,
                      override_row);
}

cplx two_fold_quadrature(P1Element e, const NystromSystem& sys, cplx nu1, cplx nu2) {
  const RhoField& f = *sys.field;
  const ContourGrid& g = *f.grid;
  const cplx q = std::exp(f.eta());
  const cplx x1 = std::exp(nu1), x2 = std::exp(nu2);
  const TableRow c = table_row(e, x1, x2, q);
  const CVec G1 = solve_G(sys, nu1).values, G2 = solve_G(sys, nu2).values;
  const CVec dmbar = sys.dm.cwiseProduct(f.base->a);
  const Eigen::Index M = g.size();
  CVec w(M);
  for (Eigen::Index k = 0; k < M; ++k) w[k] = std::exp(2.0 * g.nodes[k]);
  cplx total = 0.0;
  for (Eigen::Index i = 0; i < M; ++i) {
    cplx acc = 0.0;
    for (Eigen::Index k = 0; k < M; ++k) {
      const cplx p = c.c0 * w[i] * w[k] + c.c1 * w[i] + c.c2 * w[k] + c.c3;
      acc += dmbar[k] * (G1[i] * G2[k] - G2[i] * G1[k]) * p / (w[i] - q * q * w[k]);
    }
    total += sys.dm[i] * acc;
  }
  return total / (x2 * x2 - x1 * x1);
}

namespace {

CMat k2(const CMat& a, const CMat& b) { return kron_sites({a, b}); }

}  // namespace

CMat omega_operator(cplx X, cplx a, cplx eta) {
  const cplx q = std::exp(eta), y = std::exp(a * eta);
  const cplx A = q * X - 1.0 / (q * X), B = X / q - q / X;
  const cplx c1 = std::pow(q, a - 1.0) / X / A - std::pow(q, 1.0 - a) / X / B + (y - 1.0 / y) / 2.0;
  const cplx c2 = (y - 1.0 / y) / 2.0 * (1.0 / (q * X) / A - q / X / B);
  const cplx c3 = 2.0 * (y / A - 1.0 / y / B);
  const cplx c4 = (y - 1.0 / y) * (1.0 / A + 1.0 / B);
  const CMat I = CMat::Identity(2, 2), Z = pauli_z(), P = sigma_plus(), Mi = sigma_minus();
  return c1 * k2(Z, Z) + c2 * (k2(I, Z) - k2(Z, I)) + c3 * (k2(P, Mi) + k2(Mi, P)) + c4 * (k2(P, Mi) - k2(Mi, P));
}

DensityMatrix density_m2(cplx a, cplx eta, cplx nu1, cplx nu2, cplx w12, cplx w21, cplx ph1, cplx ph2, cplx kappa) {
  const cplx q = std::exp(eta), y = std::exp(a * eta);
  if (std::abs(y - 1.0 / y) < 1e-14) throw Error(ErrorKind::ExcludedParameter, "alpha must be nonzero");
  if (std::abs(std::pow(q, a - 1.0) - std::pow(q, 1.0 - a)) < 1e-14 ||
      std::abs(std::pow(q, a + 1.0) - std::pow(q, -a - 1.0)) < 1e-14)
    throw Error(ErrorKind::ExcludedParameter, "alpha = +-1 is excluded");
  const cplx lx = nu1 - nu2, X = std::exp(lx);
  if (std::abs(X - 1.0 / X) < 1e-14) throw Error(ErrorKind::ExcludedParameter, "xi1 = +-xi2 is excluded");
  const CMat I = CMat::Identity(2, 2), Z = pauli_z(), P = sigma_plus(), Mi = sigma_minus();
  const CMat IZ = k2(I, Z), ZI = k2(Z, I), ZZ = k2(Z, Z), PM = k2(P, Mi), MP = k2(Mi, P);
  auto Xp = [&](cplx e) { return std::exp(e * lx); };
  const cplx shared = ph1 * ph2 * (y - 1.0 / y) / 2.0;
  CMat D = 0.25 * k2(I, I);
  const cplx br1 = (Xp(1.0 - a) * w12 - Xp(a - 1.0) * w21) / (X - 1.0 / X) + shared;
  D -= br1 / (4.0 * (std::pow(q, a - 1.0) - std::pow(q, 1.0 - a))) *
       ((q - 1.0 / q) / 2.0 * IZ - (q + 1.0 / q) / 2.0 * ZZ + PM / X + X * MP);
  const cplx br2 = (Xp(-a - 1.0) * w12 - Xp(a + 1.0) * w21) / (X - 1.0 / X) + shared;
  D -= br2 / (4.0 * (std::pow(q, a + 1.0) - std::pow(q, -a - 1.0))) *
       (-(q - 1.0 / q) / 2.0 * IZ - (q + 1.0 / q) / 2.0 * ZZ + X * PM + MP / X);
  D -= (Xp(-a) * w12 - Xp(a) * w21) / (4.0 * (X - 1.0 / X) * (y - 1.0 / y)) * ((X + 1.0 / X) * ZZ - (q + 1.0 / q) * (PM + MP));
  D -= 0.25 * (ph1 * ZI + ph2 * IZ);
  D -= (q - 1.0 / q) / (4.0 * (X - 1.0 / X)) * (ph1 - ph2) * (PM - MP);
  DensityMatrix out;
  out.m = 2;
  out.entries = D;
  out.nu = {nu1, nu2};
  out.kappa = kappa;
  out.alpha = a;
  out.provenance = Provenance::Factorized;
  return out;
}

DensityMatrix density_m2(const NystromSystem& sys, cplx nu1, cplx nu2) {
  const RhoField& f = *sys.field;
  const cplx eta = f.eta(), a = f.alpha;
  const GTable t1 = solve_G(sys, nu1), t2 = solve_G(sys, nu2);
  const cplx w12 = compute_omega(sys, t2, nu1).omega;
  const cplx w21 = compute_omega(sys, t1, nu2).omega;
  return density_m2(a, eta, nu1, nu2, w12, w21, phi_from_rho(t1.rho_at_nu, a, eta), phi_from_rho(t2.rho_at_nu, a, eta),
                    f.base->twist);
}

CMat partial_trace_last(const CMat& D) {
  const Eigen::Index half = D.rows() / 2;
  return D.topLeftCorner(half, half) + D.bottomRightCorner(half, half);
}

CMat weighted_trace_first(const CMat& D, cplx alpha, cplx eta) {
  const Eigen::Index half = D.rows() / 2;
  const cplx w[2] = {std::exp(alpha * eta), std::exp(-alpha * eta)};
  CMat out = CMat::Zero(half, half);
  for (Eigen::Index a = 0; a < half; ++a)
    for (Eigen::Index b = 0; b < half; ++b)
      for (int s = 0; s < 2; ++s) out(a, b) += D(s + 2 * a, s + 2 * b) * w[s];
  return out;
}

double sector_violation(const CMat& D) {
  double worst = 0.0;
  for (Eigen::Index r = 0; r < D.rows(); ++r)
    for (Eigen::Index c = 0; c < D.cols(); ++c)
      if (__builtin_popcountll(r) != __builtin_popcountll(c)) worst = std::max(worst, std::abs(D(r, c)));
  return worst;
}

DensityMatrix physical_limit(const std::map<double, DensityMatrix>& family, double eps, double spread_tol) {
  auto get = [&](double a) -> const DensityMatrix& {
    for (const auto& [k, v] : family)
      if (std::abs(k - a) <= 1e-12 * std::max(1.0, std::abs(a))) return v;
    throw Error(ErrorKind::Usage, "alpha family must contain -2e, -e, e, 2e");
  };
  const DensityMatrix& p1 = get(eps);
  const CMat E1 = 0.5 * (p1.entries + get(-eps).entries);
  const CMat E2 = 0.5 * (get(2.0 * eps).entries + get(-2.0 * eps).entries);
  DensityMatrix out = p1;
  out.entries = (4.0 * E1 - E2) / 3.0;
  out.alpha = 0.0;
  out.provenance = Provenance::Extrapolated;
  const double spread = (out.entries - E1).cwiseAbs().maxCoeff();
  if (spread > spread_tol)
    throw Error(ErrorKind::Precision, "alpha extrapolation spread " + std::to_string(spread) +
                                          " too large; use smaller eps or a finer grid");
  return out;
}

DensityMatrix coincident_limit(const DensityMatrix& at_d, const DensityMatrix& at_half_d) {
  DensityMatrix out = at_half_d;
  out.entries = (4.0 * at_half_d.entries - at_d.entries) / 3.0;
  out.provenance = Provenance::Extrapolated;
  return out;
}

Correlators correlators(const DensityMatrix& D) {
  Correlators c;
  const CMat I = CMat::Identity(2, 2);
  if (D.m == 1) {
    c.sz = D.expectation(pauli_z());
    return c;
  }
  if (D.m != 2) throw Error(ErrorKind::Capability, "correlators need m = 1 or 2");
  c.sz = D.expectation(k2(pauli_z(), I));
  c.szsz = D.expectation(k2(pauli_z(), pauli_z()));
  c.sxsx = D.expectation(k2(pauli_x(), pauli_x()));
  return c;
}

}  // namespace xxz
