#include <array>

#include "xxz/special.hpp"

namespace xxz {

namespace {

constexpr cplx kTwoPiI{0.0, 2.0 * kPi};

struct AlphaZero {
  const ContourGrid* g = nullptr;
  cplx eta;
  CVec dm0;
  Eigen::PartialPivLU<CMat> lu;

  explicit AlphaZero(const AuxSolution& base) : g(base.grid.get()), eta(base.params.eta()) {
    const Eigen::Index M = g->size();
    dm0.resize(M);
    for (Eigen::Index k = 0; k < M; ++k) dm0[k] = g->weights[k] / (kTwoPiI * (1.0 + base.a[k]));
    CMat A(M, M);
    for (Eigen::Index k = 0; k < M; ++k)
      for (Eigen::Index j = 0; j < M; ++j)
        A(j, k) = (j == k ? 1.0 : 0.0) - kernel(g->nodes[j] - g->nodes[k], eta) * dm0[k];
    lu.compute(A);
  }

  CVec G0(cplx nu) const {
    CVec rhs(g->size());
    for (std::size_t j = 0; j < g->size(); ++j) rhs[j] = bare_energy(nu - g->nodes[j], eta);
    return lu.solve(rhs);
  }

  // sum_k f(lambda_j - lambda_k) dm0_k v_k for every node j.
  template <class F>
  CVec apply(F f, const CVec& v) const {
    const Eigen::Index M = g->size();
    CVec out = CVec::Zero(M);
    for (Eigen::Index j = 0; j < M; ++j) {
      cplx s = 0.0;
      for (Eigen::Index k = 0; k < M; ++k) s += f(g->nodes[j] - g->nodes[k]) * dm0[k] * v[k];
      out[j] = s;
    }
    return out;
  }
};

cplx chi(cplx z) { return (z * z + 1.0) / (2.0 * (z * z - 1.0)); }

}  // namespace

CVec solve_G0(const AuxSolution& base, cplx nu) { return AlphaZero(base).G0(nu); }

OmegaPrimeResult omega_prime(const ModelParams& params, const GridPtr& grid, cplx nu1, cplx nu2,
                             const OmegaPrimeOptions& opts, const SolverOptions& solver) {
  const double e = opts.eps_alpha;
  const cplx kappa = params.base_twist();
  const cplx eta = params.eta(), q = std::exp(eta);
  auto base = solve_aux_ptr(params, kappa, grid, solver);
  const std::array<double, 4> shifts{-2.0 * e, -e, e, 2.0 * e};
  std::array<SystemPtr, 4> sys;
  for (int i = 0; i < 4; ++i)
    sys[i] = build_nystrom(make_rho_field(base, solve_aux_ptr(params, kappa + shifts[i], grid, solver)));

  auto d1 = [&](auto f) { return richardson_derivative(f(0), f(1), f(2), f(3), e); };

  const cplx l12 = nu1 - nu2;
  auto scaled_omega = [&](int i, cplx a, cplx b) {
    return std::exp(-shifts[i] * (a - b)) * compute_omega(*sys[i], a, b).omega;
  };
  OmegaPrimeResult r;
  r.route_b = d1([&](int i) { return scaled_omega(i, nu1, nu2); });
  r.route_b_21 = d1([&](int i) { return scaled_omega(i, nu2, nu1); });

  const ContourGrid& g = *grid;
  const Eigen::Index M = g.size();
  AlphaZero z(*base);
  const CVec rhop_n = d1([&](int i) { return CVec(sys[i]->field->rho_nodes); });
  auto rhop = [&](cplx nu) { return d1([&](int i) { return rho_at(*sys[i]->field, nu); }); };
  const cplx rp1 = rhop(nu1), rp2 = rhop(nu2);
  const CVec G01 = z.G0(nu1), G02 = z.G0(nu2);

  auto omega_old = [&](cplx a, cplx b, const CVec& G0b) {
    CVec rhs = z.apply([&](cplx x) { return -eta * (cth(x - eta) + cth(x + eta)); }, G0b);
    for (Eigen::Index j = 0; j < M; ++j) rhs[j] += -eta * cth(g.nodes[j] - b - eta);
    const CVec dG = z.lu.solve(rhs);
    cplx dPsi = 0.0;
    for (Eigen::Index k = 0; k < M; ++k) {
      const cplx mu = g.nodes[k];
      dPsi += 2.0 * z.dm0[k] * dG[k] * (cth(mu - a - eta) - cth(mu - a));
      dPsi += 2.0 * z.dm0[k] * G0b[k] * eta * cth(mu - a - eta);
    }
    const cplx x = std::exp(a - b);
    return -dPsi + eta * (chi(q * x) + chi(x / q));
  };
  r.omega_old_12 = omega_old(nu1, nu2, G02);
  r.omega_old_21 = omega_old(nu2, nu1, G01);

  const cplx psi0 = chi(std::exp(l12));
  auto symmetric = [&](cplx a, cplx b, cplx rpa, cplx rpb, const CVec& Ga, const CVec& Gb) {
    const cplx p0 = chi(std::exp(a - b));
    cplx s = (rpa - rpb) * p0;
    for (Eigen::Index k = 0; k < M; ++k) {
      const cplx mu = g.nodes[k];
      s -= rpa * z.dm0[k] * Gb[k] * cth(mu - a);
      s -= rpb * z.dm0[k] * Ga[k] * cth(mu - b);
      s -= z.dm0[k] * rhop_n[k] * Ga[k] * Gb[k];
    }
    return s;
  };
  r.symmetric_12 = symmetric(nu1, nu2, rp1, rp2, G01, G02);
  r.symmetric_21 = symmetric(nu2, nu1, rp2, rp1, G02, G01);

  // G' = rhs + int dm0 K G' with rhs = -rho'(nu2) cth(lambda - nu2) - int dm0 K rho' G0.
  CVec w = rhop_n.cwiseProduct(G02);
  CVec rhs = -z.apply([&](cplx x) { return kernel(x, eta); }, w);
  for (Eigen::Index j = 0; j < M; ++j) rhs[j] -= rp2 * cth(g.nodes[j] - nu2);
  const CVec Gp = z.lu.solve(rhs);
  cplx rep = (rp1 - rp2) * psi0;
  for (Eigen::Index k = 0; k < M; ++k) {
    const cplx mu = g.nodes[k];
    rep -= rp1 * z.dm0[k] * G02[k] * cth(mu - nu1);
    rep -= z.dm0[k] * rhop_n[k] * G02[k] * bare_energy(nu1 - mu, eta);
    rep += z.dm0[k] * Gp[k] * bare_energy(nu1 - mu, eta);
  }

  r.route_a = 2.0 * r.symmetric_12 - r.omega_old_12;
  r.identity_residual = std::abs(rep - 0.5 * (r.omega_old_12 + r.route_b));
  r.antisymmetry_residual = std::abs(r.omega_old_12 + r.omega_old_21);
  r.old_relation_residual = std::abs(r.omega_old_12 - 0.5 * (r.route_b_21 - r.route_b));
  r.route_gap = std::abs(r.route_a - r.route_b);
  if (opts.enforce && !(r.route_gap < opts.tolerance))
    throw Error(ErrorKind::Consistency, "omega' routes disagree by " + std::to_string(r.route_gap));
  return r;
}

}  // namespace xxz
