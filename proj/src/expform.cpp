#include "xxz/expform.hpp"

#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "xxz/density.hpp"
#include "xxz/oracle.hpp"

namespace xxz {

namespace {

CMat kron(const CMat& A, const CMat& B) {
  CMat out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

CMat k2(const CMat& a, const CMat& b) { return kron_sites({a, b}); }

// q^{p S} for a diagonal S.
CMat qpow_diag(cplx eta, cplx p, const CMat& S) {
  CMat out = CMat::Zero(S.rows(), S.cols());
  for (Eigen::Index i = 0; i < S.rows(); ++i) out(i, i) = std::exp(p * eta * S(i, i));
  return out;
}

constexpr double kNearZero = 1e-10;

void check_alpha(cplx alpha, cplx eta) {
  const cplx y = std::exp(alpha * eta), q = std::exp(eta);
  if (std::abs(y - 1.0 / y) < kNearZero) throw Error(ErrorKind::ExcludedParameter, "alpha = 0 is excluded for t");
  if (std::abs(y * q - 1.0 / (y * q)) < kNearZero || std::abs(y / q - q / y) < kNearZero)
    throw Error(ErrorKind::ExcludedParameter, "alpha = +-1 is excluded for t");
}

void check_xi(cplx x1, cplx x2) {
  const cplx X = x1 / x2;
  if (std::abs(X - 1.0 / X) < kNearZero) throw Error(ErrorKind::ExcludedParameter, "xi1 = +-xi2 is excluded");
}

CMat t_one_site(cplx alpha, cplx eta) {
  const cplx y = std::exp(alpha * eta);
  return tensor_action(qpow_diag(eta, alpha, pauli_z()), pauli_z()) / (y - 1.0 / y);
}

// Displayed two-site t for site 1 with X = x1 / x2.
CMat t_first_displayed(cplx a, cplx eta, cplx x1, cplx x2) {
  const cplx q = std::exp(eta), y = std::exp(a * eta), X = x1 / x2;
  const CMat I2 = CMat::Identity(2, 2), I4 = CMat::Identity(4, 4);
  const CMat s1z = k2(pauli_z(), I2), s2z = k2(I2, pauli_z());
  const CMat pm = k2(sigma_plus(), sigma_minus()), mp = k2(sigma_minus(), sigma_plus());
  const CMat Bb = s1z - (q - 1.0 / q) / (X - 1.0 / X) * (pm - mp);
  const cplx d1 = std::pow(q, a + 1.0) - std::pow(q, -a - 1.0);
  const cplx d2 = std::pow(q, a - 1.0) - std::pow(q, 1.0 - a);
  const CMat qs = qpow_diag(eta, 1.0, s1z), qsi = qpow_diag(eta, -1.0, s1z);
  const CMat B3 = (qs / d1 + qsi / d2) * s1z * s2z -
                  (q - 1.0 / q) * (y + 1.0 / y) / (2.0 * d1 * d2) * (X - 1.0 / X) * (pm - mp) -
                  (q + 1.0 / q) * (y - 1.0 / y) / (2.0 * d1 * d2) * (X + 1.0 / X) * (pm + mp);
  return 0.25 * (y + 1.0 / y) / (y - 1.0 / y) * tensor_action(I4, Bb) + 0.25 * tensor_action(s1z, Bb) +
         0.25 * tensor_action(qpow_diag(eta, a, s1z) * s2z, B3);
}

// Site-1 operator in the argument order used throughout: t_1(xi_1, xi_2) is the display at (xi_2, xi_1).
CMat t_first(cplx a, cplx eta, cplx u1, cplx u2) { return t_first_displayed(a, eta, u2, u1); }

// f(u1, u2) -> S f(u2, u1) S^{-1} with S the conjugation by P R(u2/u1).
template <class F>
CMat exchange_conjugate(F f, cplx eta, cplx u1, cplx u2) {
  const CMat S = conjugation_action(swapped_R(u2 / u1, eta));
  return S * f(u2, u1) * S.inverse();
}

CMat t10(cplx eta, cplx u1, cplx u2) {
  const cplx q = std::exp(eta), X = u2 / u1;
  const CMat I2 = CMat::Identity(2, 2), I4 = CMat::Identity(4, 4);
  const CMat s1z = k2(pauli_z(), I2);
  const CMat pm = k2(sigma_plus(), sigma_minus()), mp = k2(sigma_minus(), sigma_plus());
  return -0.25 * tensor_action(I4, s1z - (q - 1.0 / q) / (X - 1.0 / X) * (pm - mp));
}

CMat h1(cplx eta, cplx u1, cplx u2) {
  const cplx q = std::exp(eta), X = u2 / u1;
  const CMat I2 = CMat::Identity(2, 2);
  const CMat s1z = k2(pauli_z(), I2), s2z = k2(I2, pauli_z());
  const CMat pm = k2(sigma_plus(), sigma_minus()), mp = k2(sigma_minus(), sigma_plus());
  return -0.25 * (X + 1.0 / X) / (X - 1.0 / X) *
             tensor_action(s2z, s1z * s2z - (q + 1.0 / q) / (X + 1.0 / X) * (pm + mp)) -
         t10(eta, u1, u2);
}

cplx two_site_trace(const AlphaTrace& tr, const CMat& Y) {
  const cplx w[2] = {tr.up, tr.down};
  cplx s = 0.0;
  for (int i = 0; i < 4; ++i) s += w[i & 1] * w[(i >> 1) & 1] * Y(i, i);
  return s;
}

CMat unit(int d, int r, int c) {
  CMat E = CMat::Zero(d, d);
  E(r, c) = 1.0;
  return E;
}

}  // namespace

CVec vec(const CMat& X) {
  CVec v(X.size());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j) v[i * X.cols() + j] = X(i, j);
  return v;
}

CMat unvec(const CVec& v, Eigen::Index d) {
  if (v.size() != d * d) throw Error(ErrorKind::Usage, "unvec: length is not d^2");
  CMat X(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) X(i, j) = v[i * d + j];
  return X;
}

CMat tensor_action(const CMat& A, const CMat& B) { return vec(A) * vec(B.transpose()).transpose(); }

CMat conjugation_action(const CMat& M) { return kron(M, M.inverse().transpose()); }

CMat swapped_R(cplx z, cplx eta) {
  const cplx lam = std::log(z);
  const cplx b = sh(lam) / sh(lam + eta), c = sh(eta) / sh(lam + eta);
  CMat R = CMat::Zero(4, 4), P = CMat::Zero(4, 4);
  R(0, 0) = R(3, 3) = 1.0;
  R(1, 1) = R(2, 2) = b;
  R(1, 2) = R(2, 1) = c;
  P(0, 0) = P(3, 3) = P(1, 2) = P(2, 1) = 1.0;
  return P * R;
}

CMat OperatorOnOperators::apply(const CMat& X) const {
  const Eigen::Index d = Eigen::Index(1) << m;
  if (X.rows() != d || X.cols() != d) throw Error(ErrorKind::Usage, "operator size does not match m");
  return unvec(matrix * vec(X), d);
}

OperatorOnOperators build_t(int m, int j, cplx alpha, cplx eta, const std::vector<cplx>& xi) {
  if (m < 1 || m > 2) throw Error(ErrorKind::Capability, "t operators are built for m = 1, 2 only");
  if (j < 1 || j > m) throw Error(ErrorKind::Usage, "site label j must lie in [1, m]");
  if (static_cast<int>(xi.size()) != m) throw Error(ErrorKind::Usage, "need one xi per site");
  check_alpha(alpha, eta);
  OperatorOnOperators t;
  t.m = m;
  t.j = j;
  const CMat qa = qpow_diag(eta, alpha, pauli_z());
  const CMat I2 = CMat::Identity(2, 2);
  double selftest = 0.0;
  if (m == 1) {
    t.matrix = t_one_site(alpha, eta);
    selftest = (t.apply(qa) - qa).cwiseAbs().maxCoeff();
  } else {
    check_xi(xi[0], xi[1]);
    if (j == 1) {
      t.matrix = t_first(alpha, eta, xi[0], xi[1]);
      const CMat X = k2(qa, I2 + 2.0 * pauli_z());
      selftest = (t.apply(X) - X).cwiseAbs().maxCoeff() / X.cwiseAbs().maxCoeff();
    } else {
      t.matrix = exchange_conjugate([&](cplx u1, cplx u2) { return t_first(alpha, eta, u1, u2); }, eta, xi[0], xi[1]);
      selftest = t.apply(k2(I2 + 2.0 * pauli_z(), I2)).cwiseAbs().maxCoeff();
    }
  }
  if (!(selftest < 1e-9))
    throw Error(ErrorKind::Construction, "t fails its reduction self-test, residual " + std::to_string(selftest));
  return t;
}

std::vector<OperatorOnOperators> build_all_t(int m, cplx alpha, cplx eta, const std::vector<cplx>& xi) {
  std::vector<OperatorOnOperators> out;
  for (int j = 1; j <= m; ++j) out.push_back(build_t(m, j, alpha, eta, xi));
  return out;
}

CMat Omega2_map(const std::vector<OperatorOnOperators>& ts, const std::vector<cplx>& rho) {
  if (ts.empty() || ts.size() != rho.size()) throw Error(ErrorKind::Usage, "need one rho per t operator");
  const Eigen::Index n = ts[0].matrix.rows();
  CMat out = CMat::Identity(n, n);
  for (std::size_t k = 0; k < ts.size(); ++k) out = out * (CMat::Identity(n, n) + (rho[k] - 1.0) * ts[k].matrix);
  return out;
}

CMat apply_Omega2(const std::vector<OperatorOnOperators>& ts, const std::vector<cplx>& rho, const CMat& X) {
  const CMat map = Omega2_map(ts, rho);
  return unvec(map * vec(X), X.rows());
}

cplx AlphaTrace::operator()(const CMat& Y) const {
  if (Y.rows() != 2 || Y.cols() != 2) throw Error(ErrorKind::Usage, "alpha trace acts on one site");
  return up * Y(0, 0) + down * Y(1, 1);
}

AlphaTrace calibrate_alpha_trace(cplx alpha, cplx eta, double tol) {
  const CMat t = t_one_site(alpha, eta);
  Eigen::Matrix<cplx, 4, 2> A;
  Eigen::Matrix<cplx, 4, 1> b;
  const DensityMatrix D0 = density_m1_from_rho(0.0, alpha, eta), D1 = density_m1_from_rho(1.0, alpha, eta);
  for (int s = 0; s < 2; ++s) {
    const CMat X = unit(2, s, s);
    const cplx c0 = D0.expectation(X), c1 = D1.expectation(X) - c0;
    const CMat tX = unvec(t * vec(X), 2);
    const CMat rest = X - tX;
    A(2 * s, 0) = rest(0, 0);
    A(2 * s, 1) = rest(1, 1);
    b(2 * s) = c0;
    A(2 * s + 1, 0) = tX(0, 0);
    A(2 * s + 1, 1) = tX(1, 1);
    b(2 * s + 1) = c1;
  }
  const Eigen::Matrix<cplx, 2, 1> x = A.colPivHouseholderQr().solve(b);
  AlphaTrace tr;
  tr.up = x(0);
  tr.down = x(1);
  tr.fit_residual = (A * x - b).cwiseAbs().maxCoeff();
  if (!(tr.fit_residual < tol))
    throw Error(ErrorKind::Model, "no per-site functional reproduces the one-site matrix, residual " +
                                      std::to_string(tr.fit_residual));
  return tr;
}

std::vector<CMat> spin_zero_basis_m2() {
  std::vector<CMat> out;
  for (int i = 0; i < 4; ++i) out.push_back(unit(4, i, i));
  out.push_back(k2(sigma_plus(), sigma_minus()));
  out.push_back(k2(sigma_minus(), sigma_plus()));
  return out;
}

CMat exponential_form_m2(const AlphaTrace& trace, cplx alpha, cplx eta, cplx nu1, cplx nu2, cplx omega12,
                         cplx omega21, cplx rho1, cplx rho2) {
  const cplx x1 = std::exp(nu1), x2 = std::exp(nu2), X = x1 / x2;
  const auto ts = build_all_t(2, alpha, eta, {x1, x2});
  const CMat map = Omega2_map(ts, {rho1, rho2});
  const cplx ph1 = phi_from_rho(rho1, alpha, eta), ph2 = phi_from_rho(rho2, alpha, eta);
  const CMat base = density_m2(alpha, eta, nu1, nu2, 0.0, 0.0, ph1, ph2).entries;
  const CMat E12 = density_m2(alpha, eta, nu1, nu2, 1.0, 0.0, ph1, ph2).entries - base;
  const CMat E21 = density_m2(alpha, eta, nu1, nu2, 0.0, 1.0, ph1, ph2).entries - base;
  const cplx gap12 = omega0(X, alpha, eta) - omega12, gap21 = omega0(1.0 / X, alpha, eta) - omega21;
  CMat D = CMat::Zero(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      if (__builtin_popcount(r) != __builtin_popcount(c)) continue;
      const CMat B = unit(4, r, c);
      const cplx inj12 = -(E12 * B).trace(), inj21 = -(E21 * B).trace();
      D(c, r) = two_site_trace(trace, unvec(map * vec(B), 4)) + inj12 * gap12 + inj21 * gap21;
    }
  return D;
}

ResidueAndH t_residue_and_h(int m, int j, cplx eta, const std::vector<cplx>& xi) {
  if (m < 1 || m > 2) throw Error(ErrorKind::Capability, "residues are built for m = 1, 2 only");
  if (j < 1 || j > m || static_cast<int>(xi.size()) != m) throw Error(ErrorKind::Usage, "bad site label or xi");
  ResidueAndH out;
  if (m == 1) {
    out.t0 = -0.5 * tensor_action(CMat::Identity(2, 2), pauli_z());
    out.h = -out.t0;
    return out;
  }
  check_xi(xi[0], xi[1]);
  auto f_t0 = [&](cplx u1, cplx u2) { return t10(eta, u1, u2); };
  auto f_h = [&](cplx u1, cplx u2) { return h1(eta, u1, u2); };
  if (j == 1) {
    out.t0 = f_t0(xi[0], xi[1]);
    out.h = f_h(xi[0], xi[1]);
  } else {
    out.t0 = exchange_conjugate(f_t0, eta, xi[0], xi[1]);
    out.h = exchange_conjugate(f_h, eta, xi[0], xi[1]);
  }
  return out;
}

double fermi_bose_difference(cplx alpha, cplx eta, const std::vector<cplx>& xi, cplx phi1, cplx phi2) {
  const auto ts = build_all_t(2, alpha, eta, xi);
  const cplx r1 = std::cosh(alpha * eta) - phi1 * std::sinh(alpha * eta);
  const cplx r2 = std::cosh(alpha * eta) - phi2 * std::sinh(alpha * eta);
  const CMat bos = Omega2_map(ts, {r1, r2});
  const CMat H = phi1 * t_residue_and_h(2, 1, eta, xi).h + phi2 * t_residue_and_h(2, 2, eta, xi).h;
  const CMat fer = (-H).exp();
  const AlphaTrace tr = calibrate_alpha_trace(alpha, eta);
  double worst = 0.0;
  for (const CMat& B : spin_zero_basis_m2())
    worst = std::max(worst, std::abs(two_site_trace(tr, unvec((bos - fer) * vec(B), 4))));
  return worst;
}

double projector_residual(const OperatorOnOperators& t) {
  return (t.matrix * t.matrix - t.matrix).cwiseAbs().maxCoeff();
}

double commutator_residual(const OperatorOnOperators& a, const OperatorOnOperators& b) {
  return (a.matrix * b.matrix - b.matrix * a.matrix).cwiseAbs().maxCoeff();
}

double spin_block_residual(const OperatorOnOperators& t) {
  const int d = 1 << t.m;
  auto spin = [](int r, int c) { return __builtin_popcount(c) - __builtin_popcount(r); };
  double worst = 0.0;
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      const CMat Y = t.apply(unit(d, r, c));
      for (int rr = 0; rr < d; ++rr)
        for (int cc = 0; cc < d; ++cc)
          if (spin(rr, cc) != spin(r, c)) worst = std::max(worst, std::abs(Y(rr, cc)));
    }
  return worst;
}

std::vector<double> reduction_residuals(cplx alpha, cplx eta, const std::vector<cplx>& xi, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  auto random_op = [&] {
    CMat X = CMat::Zero(2, 2);
    X(0, 0) = cplx(nd(rng), nd(rng));
    X(1, 1) = cplx(nd(rng), nd(rng));
    return X;
  };
  const CMat qa = qpow_diag(eta, alpha, pauli_z());
  const CMat I2 = CMat::Identity(2, 2);
  const OperatorOnOperators t = build_t(1, 1, alpha, eta, {xi[0]});
  const OperatorOnOperators T1 = build_t(2, 1, alpha, eta, xi), T2 = build_t(2, 2, alpha, eta, xi);
  const CMat X1 = random_op(), X2 = random_op();
  std::vector<double> out;
  out.push_back((t.apply(qa) - qa).cwiseAbs().maxCoeff());
  out.push_back(t.apply(I2).cwiseAbs().maxCoeff());
  out.push_back((T1.apply(k2(qa, X2)) - k2(qa, X2)).cwiseAbs().maxCoeff());
  out.push_back((T1.apply(k2(X1, I2)) - k2(t.apply(X1), I2)).cwiseAbs().maxCoeff());
  out.push_back(T2.apply(k2(X1, I2)).cwiseAbs().maxCoeff());
  out.push_back((T2.apply(k2(qa, X2)) - k2(qa, t.apply(X2))).cwiseAbs().maxCoeff());
  return out;
}

}  // namespace xxz
