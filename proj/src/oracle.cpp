#include "xxz/oracle.hpp"

#include <algorithm>
#include <numeric>

#include "xxz/common.hpp"

namespace xxz {

CMat pauli_x() { return (CMat(2, 2) << 0, 1, 1, 0).finished(); }
CMat pauli_y() { return (CMat(2, 2) << 0, -kI, kI, 0).finished(); }
CMat pauli_z() { return (CMat(2, 2) << 1, 0, 0, -1).finished(); }
CMat sigma_plus() { return (CMat(2, 2) << 0, 1, 0, 0).finished(); }
CMat sigma_minus() { return (CMat(2, 2) << 0, 0, 1, 0).finished(); }

CMat kron_sites(const std::vector<CMat>& ops) {
  CMat out = CMat::Identity(1, 1);
  for (const auto& op : ops) {
    CMat next(out.rows() * op.rows(), out.cols() * op.cols());
    for (Eigen::Index i = 0; i < op.rows(); ++i)
      for (Eigen::Index j = 0; j < op.cols(); ++j)
        next.block(i * out.rows(), j * out.cols(), out.rows(), out.cols()) = op(i, j) * out;
    out = next;
  }
  return out;
}

namespace {

// out = op_j * M for a 2x2 operator acting on bit j.
CMat apply_site(const CMat& M, const CMat& op, int j) {
  const Eigen::Index dim = M.rows();
  CMat out = CMat::Zero(dim, M.cols());
  for (Eigen::Index r = 0; r < dim; ++r) {
    const int s = (r >> j) & 1;
    for (int sp = 0; sp < 2; ++sp) {
      const cplx c = op(s, sp);
      if (c == cplx(0.0)) continue;
      out.row(r) += c * M.row(r ^ (Eigen::Index(s ^ sp) << j));
    }
  }
  return out;
}

// Site operators r^{a}_{b} of R_{a,site}(mu) in the auxiliary components.
std::array<CMat, 4> site_components(cplx mu, cplx eta, bool transpose) {
  const cplx den = sh(mu + eta);
  const cplx b = sh(mu) / den, c = sh(eta) / den;
  std::array<CMat, 4> r;
  r[0] = (CMat(2, 2) << 1, 0, 0, b).finished();
  r[3] = (CMat(2, 2) << b, 0, 0, 1).finished();
  r[1] = c * sigma_minus();
  r[2] = c * sigma_plus();
  if (transpose)
    for (auto& m : r) m.transposeInPlace();
  return r;
}

MonodromyOperator build_from_sites(int N, cplx eta, cplx lambda, cplx kappa_twist,
                                   const std::vector<std::pair<cplx, bool>>& sites) {
  if (N > kOracleMaxSites || N < 1) throw Error(ErrorKind::Size, "oracle supports 1 <= N <= 10");
  const Eigen::Index dim = Eigen::Index(1) << N;
  MonodromyOperator T;
  T.N = N;
  T.kappa_twist = kappa_twist;
  T.lambda = lambda;
  T.blocks[0] = CMat::Identity(dim, dim);
  T.blocks[1] = CMat::Zero(dim, dim);
  T.blocks[2] = CMat::Zero(dim, dim);
  T.blocks[3] = CMat::Identity(dim, dim);
  for (int j = 0; j < N; ++j) {
    const auto r = site_components(sites[j].first, eta, sites[j].second);
    std::array<CMat, 4> next;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        next[2 * a + b] = apply_site(T.blocks[b], r[2 * a], j);
        next[2 * a + b] += apply_site(T.blocks[2 + b], r[2 * a + 1], j);
      }
    T.blocks = std::move(next);
  }
  const cplx qk = std::exp(kappa_twist * eta);
  for (int a = 0; a < 2; ++a) {
    T.blocks[2 * a] *= qk;
    T.blocks[2 * a + 1] /= qk;
  }
  return T;
}

}  // namespace

CMat site_operator(const CMat& op, int j, int N) {
  const Eigen::Index dim = Eigen::Index(1) << N;
  return apply_site(CMat::Identity(dim, dim), op, j);
}

CMat build_R(cplx lambda, double gamma) {
  const cplx eta(0.0, gamma);
  const cplx den = sh(lambda + eta);
  if (std::abs(den) < 1e-14) throw Error(ErrorKind::Singularity, "R-matrix denominator vanishes");
  const cplx b = sh(lambda) / den, c = sh(eta) / den;
  CMat R = CMat::Zero(4, 4);
  R(0, 0) = R(3, 3) = 1.0;
  R(1, 1) = R(2, 2) = b;
  R(1, 2) = R(2, 1) = c;
  return R;
}

MonodromyOperator build_monodromy(const std::vector<cplx>& betas, double gamma, cplx lambda, cplx kappa_twist) {
  std::vector<std::pair<cplx, bool>> sites;
  for (auto b : betas) sites.emplace_back(lambda - b, false);
  return build_from_sites(static_cast<int>(betas.size()), cplx(0.0, gamma), lambda, kappa_twist, sites);
}

MonodromyOperator build_monodromy(const ModelParams& p, cplx lambda, cplx kappa_twist) {
  return build_monodromy(p.betas(), p.gamma, lambda, kappa_twist);
}

MonodromyOperator build_qtm_monodromy(int N, double gamma, cplx beta_over_N, cplx lambda, cplx kappa_twist) {
  std::vector<std::pair<cplx, bool>> sites;
  for (int j = 0; j < N; ++j) {
    if (j % 2 == 0)
      sites.emplace_back(-beta_over_N - lambda, true);
    else
      sites.emplace_back(lambda - beta_over_N, false);
  }
  return build_from_sites(N, cplx(0.0, gamma), lambda, kappa_twist, sites);
}

CMat transfer_matrix(const ModelParams& p, cplx lambda, cplx kappa_twist) {
  return build_monodromy(p, lambda, kappa_twist).transfer();
}

cplx reference_lambda(const ModelParams& p) { return p.mode == Mode::FiniteLength ? p.eta() / 2.0 : cplx(0.0); }

cplx eigenvalue_at(const ModelParams& p, const EigenPair& ep, cplx lambda, cplx kappa_twist) {
  const CMat t = transfer_matrix(p, lambda, kappa_twist);
  const CVec tr = t * ep.right;
  return (ep.left.array() * tr.array()).sum() / (ep.left.array() * ep.right.array()).sum();
}

EigenPair dominant_eigenpair(const ModelParams& p, cplx kappa_twist, double eps_gap) {
  p.validate();
  // Diagonalize at a generic point where the spectrum is non-degenerate.
  const cplx generic(0.3719, 0.0613);
  Eigen::ComplexEigenSolver<CMat> es(transfer_matrix(p, generic, kappa_twist));
  const CMat VR = es.eigenvectors();
  const CMat VL = VR.inverse();
  const Eigen::Index n = VR.cols();
  // Row-by-column product without conjugation.
  auto pair_eval = [&](cplx lambda) {
    const CMat P = transfer_matrix(p, lambda, kappa_twist) * VR;
    CVec d(n);
    for (Eigen::Index i = 0; i < n; ++i) d[i] = (VL.row(i).transpose().array() * P.col(i).array()).sum();
    return d;
  };
  const CVec lam0 = pair_eval(reference_lambda(p));
  std::vector<double> score(n);
  if (p.mode == Mode::Temperature) {
    for (Eigen::Index i = 0; i < n; ++i) score[i] = -std::abs(lam0[i]);
  } else {
    const double hstep = 1e-5;
    const CVec lp = pair_eval(p.eta() / 2.0 + hstep);
    const CVec lm = pair_eval(p.eta() / 2.0 - hstep);
    const double big = lam0.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(lam0[i]) < 1e-8 * big) {
        score[i] = std::numeric_limits<double>::infinity();
        continue;
      }
      score[i] = (2.0 * p.J * std::sinh(p.eta()) * (lp[i] - lm[i]) / (2.0 * hstep) / lam0[i]).real();
    }
  }
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return score[a] < score[b]; });
  const Eigen::Index k = order[0];
  EigenPair ep;
  ep.eigenvalue = lam0[k];
  ep.right = VR.col(k);
  ep.left = VL.row(k).transpose();
  if (n > 1) {
    if (p.mode == Mode::Temperature)
      ep.gap_ratio = score[order[1]] / score[order[0]];
    else
      ep.gap_ratio = std::exp(-(score[order[1]] - score[order[0]]) / p.J);
  }
  if (ep.gap_ratio > 1.0 - eps_gap) throw Error(ErrorKind::Degeneracy, "dominant state is (nearly) degenerate");
  return ep;
}

namespace {

struct StatePair {
  CVec left;
  CVec right;
};

cplx bilinear(const CVec& l, const CVec& r) { return (l.array() * r.array()).sum(); }

CMat density_from(const ModelParams& p, const std::vector<cplx>& nu, const StatePair& s, cplx kappa,
                  bool transposed) {
  const int m = static_cast<int>(nu.size());
  if (m > p.N) throw Error(ErrorKind::Size, "m must not exceed N");
  std::vector<MonodromyOperator> T;
  for (auto v : nu) T.push_back(build_monodromy(p, v, kappa));
  const cplx norm = bilinear(s.left, s.right);
  cplx den = norm;
  for (const auto& Tj : T) den *= bilinear(s.left, Tj.transfer() * s.right) / norm;
  if (std::abs(den) < 1e-300) throw Error(ErrorKind::Normalization, "vanishing normalization");
  const int dim = 1 << m;
  CMat D(dim, dim);
  for (int row = 0; row < dim; ++row)
    for (int col = 0; col < dim; ++col) {
      CVec v = s.right;
      if (!transposed) {
        for (int j = m - 1; j >= 0; --j) v = T[j]((row >> j) & 1, (col >> j) & 1) * v;
      } else {
        for (int j = 0; j < m; ++j) v = T[j]((col >> j) & 1, (row >> j) & 1) * v;
      }
      D(row, col) = bilinear(s.left, v) / den;
    }
  return D;
}

}  // namespace

CMat density_direct(const ModelParams& p, const std::vector<cplx>& nu) {
  const cplx k = p.base_twist();
  const EigenPair base = dominant_eigenpair(p, k);
  const EigenPair tw = dominant_eigenpair(p, k + p.alpha);
  return density_from(p, nu, {tw.left, base.right}, k, false);
}

cplx density_direct(const ModelParams& p, const std::vector<cplx>& nu, int row, int col) {
  return density_direct(p, nu)(row, col);
}

CMat density_direct_transposed(const ModelParams& p, const std::vector<cplx>& nu) {
  const cplx k = p.base_twist();
  const EigenPair base = dominant_eigenpair(p, k);
  const EigenPair tw = dominant_eigenpair(p, k + p.alpha);
  return density_from(p, nu, {base.left, tw.right}, k, true);
}

CMat hamiltonian_explicit(int N, double gamma, double J, cplx kappa) {
  if (N > kOracleMaxSites || N < 2) throw Error(ErrorKind::Size, "oracle supports 2 <= N <= 10");
  const cplx q = std::exp(cplx(0.0, gamma));
  const double delta = std::cos(gamma);
  const Eigen::Index dim = Eigen::Index(1) << N;
  const CMat I = CMat::Identity(dim, dim);
  const CMat left = (CMat(2, 2) << std::pow(q, -kappa), 0, 0, std::pow(q, kappa)).finished();
  const CMat right = (CMat(2, 2) << std::pow(q, kappa), 0, 0, std::pow(q, -kappa)).finished();
  CMat H = CMat::Zero(dim, dim);
  for (int j = 0; j < N; ++j) {
    const int k = (j + 1) % N;
    auto first = [&](const CMat& o) { return k == 0 ? CMat(left * o * right) : o; };
    H += site_operator(first(pauli_x()), j, N) * site_operator(pauli_x(), k, N);
    H += site_operator(first(pauli_y()), j, N) * site_operator(pauli_y(), k, N);
    H += delta * (site_operator(pauli_z(), j, N) * site_operator(pauli_z(), k, N) - I);
  }
  return J * H;
}

CMat hamiltonian_from_transfer(int N, double gamma, double J, cplx kappa, double step) {
  ModelParams p;
  p.gamma = gamma;
  p.N = N;
  p.J = J;
  const cplx eta = p.eta();
  const CMat t0 = transfer_matrix(p, eta / 2.0, kappa);
  const CMat dt = (transfer_matrix(p, eta / 2.0 + step, kappa) - transfer_matrix(p, eta / 2.0 - step, kappa)) / (2.0 * step);
  return 2.0 * J * std::sinh(eta) * t0.partialPivLu().solve(dt);
}

ThermalCorrelators thermal_ed(int L, double T, double h, double gamma, double J) {
  if (L < 2 || L > 12 || L % 2 != 0) throw Error(ErrorKind::Size, "thermal_ed needs even 2 <= L <= 12");
  const double delta = std::cos(gamma);
  double Z = 0.0, M = 0.0, ZZ = 0.0, PM = 0.0, E = 0.0;
  double shift = 0.0;
  bool have_shift = false;
  std::vector<std::pair<Eigen::VectorXd, std::vector<int>>> blocks;
  for (int down = 0; down <= L; ++down) {
    std::vector<int> states;
    for (int s = 0; s < (1 << L); ++s)
      if (__builtin_popcount(s) == down) states.push_back(s);
    std::vector<int> index(1 << L, -1);
    for (std::size_t i = 0; i < states.size(); ++i) index[states[i]] = static_cast<int>(i);
    const Eigen::Index d = states.size();
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const int s = states[i];
      for (int j = 0; j < L; ++j) {
        const int k = (j + 1) % L;
        const int bj = (s >> j) & 1, bk = (s >> k) & 1;
        H(i, i) += J * delta * ((bj == bk ? 1.0 : -1.0) - 1.0);
        if (bj != bk) H(index[s ^ (1 << j) ^ (1 << k)], i) += 2.0 * J;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const double sz = 0.5 * (L - 2 * down);
    const Eigen::VectorXd w = es.eigenvalues();
    Eigen::VectorXd expo = (-w.array() / T + h * sz / T).matrix();
    const double mx = expo.maxCoeff();
    if (!have_shift || mx > shift) {
      if (have_shift) {
        const double f = std::exp(shift - mx);
        Z *= f;
        M *= f;
        ZZ *= f;
        PM *= f;
        E *= f;
      }
      shift = mx;
      have_shift = true;
    }
    const Eigen::VectorXd bw = (expo.array() - shift).exp().matrix();
    const Eigen::MatrixXd& V = es.eigenvectors();
    const Eigen::MatrixXd rho = V * bw.asDiagonal() * V.transpose();
    const double zs = bw.sum();
    Z += zs;
    M += zs * sz / L;
    E += bw.dot(w) / L;
    for (Eigen::Index i = 0; i < d; ++i) {
      const int s = states[i];
      const int b0 = s & 1, b1 = (s >> 1) & 1;
      ZZ += rho(i, i) * (b0 == b1 ? 1.0 : -1.0);
      if (b0 == 1 && b1 == 0) PM += rho(i, index[s ^ 3]);
    }
  }
  return {M / Z, ZZ / Z, PM / Z, E / Z};
}

}  // namespace xxz
