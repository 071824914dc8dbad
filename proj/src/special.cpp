#include "xxz/special.hpp"

#include <sstream>

#include "xxz/io.hpp"

namespace xxz {

namespace {

constexpr cplx kTwoPiI{0.0, 2.0 * kPi};

void require_off_contour(const ContourGrid& g, cplx lambda, const char* what) {
  if (distance_to_contour(g, lambda) < kEdgeEps)
    throw Error(ErrorKind::Edge, std::string(what) + " lies on the contour");
}

// (1 + a_twisted) / (1 + a_base) at an off-grid point.
cplx aux_ratio(const RhoField& f, cplx lambda) {
  const AuxParts p1 = aux_parts(*f.twisted, lambda);
  const AuxParts p0 = aux_parts(*f.base, lambda);
  return (p0.den + p1.num * p1.expo) / (p0.den + p0.num * p0.expo);
}

// Number of iπ-periodic images of x enclosed by the contour.
double enclosed_poles(const ContourGrid& g, cplx x) {
  double n = 0.0;
  for (int j = -3; j <= 3; ++j) n += g.inside(x + cplx(0.0, kPi * j)) ? 1.0 : 0.0;
  return n;
}

}  // namespace

RhoPtr make_rho_field(AuxPtr base, AuxPtr twisted) {
  if (base->grid != twisted->grid) throw Error(ErrorKind::Usage, "aux solutions live on different grids");
  auto f = std::make_shared<RhoField>();
  f->grid = base->grid;
  f->base = base;
  f->twisted = twisted;
  f->alpha = twisted->twist - base->twist;
  const ContourGrid& g = *f->grid;
  const Eigen::Index M = g.size();
  const cplx eta = f->eta();
  const CVec diff = twisted->log1p_a - base->log1p_a;
  const CVec deriv = differentiate(g, diff);
  f->rho_nodes.resize(M);
  const cplx qa = std::exp(f->alpha * eta);
  for (Eigen::Index j = 0; j < M; ++j) {
    cplx s = deriv[j] * g.weights[j];
    for (Eigen::Index k = 0; k < M; ++k) {
      if (k == j) continue;
      s += bare_energy(g.nodes[k] - g.nodes[j], eta) * (diff[k] - diff[j]) * g.weights[k];
    }
    f->rho_nodes[j] = qa * std::exp(s / kTwoPiI + diff[j]);
  }
  return f;
}

RhoPtr make_rho_field(const ModelParams& params, const GridPtr& grid, const SolverOptions& opts) {
  const cplx k = params.base_twist();
  auto base = solve_aux_ptr(params, k, grid, opts);
  auto tw = solve_aux_ptr(params, k + params.alpha, grid, opts);
  return make_rho_field(base, tw);
}

cplx rho_at(const RhoField& f, cplx lambda) {
  const ContourGrid& g = *f.grid;
  require_off_contour(g, lambda, "rho argument");
  const cplx eta = f.eta();
  // The constant part is integrated exactly by residues; only the remainder goes through quadrature.
  std::size_t nearest = 0;
  for (std::size_t k = 1; k < g.size(); ++k)
    if (std::abs(lambda - g.nodes[k]) < std::abs(lambda - g.nodes[nearest])) nearest = k;
  const cplx c = f.twisted->log1p_a[nearest] - f.base->log1p_a[nearest];
  cplx s = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k)
    s += bare_energy(g.nodes[k] - lambda, eta) * (f.twisted->log1p_a[k] - f.base->log1p_a[k] - c) * g.weights[k];
  const double poles = enclosed_poles(g, lambda) - enclosed_poles(g, lambda - eta);
  return std::exp(f.alpha * eta) * std::exp(s / kTwoPiI + poles * c);
}

cplx compute_rho(const RhoField& f, cplx zeta) { return rho_at(f, std::log(zeta)); }

cplx rho_continued(const RhoField& f, cplx lambda) {
  const ContourGrid& g = *f.grid;
  cplx r = rho_at(f, lambda);
  if (!g.inside(lambda)) r *= aux_ratio(f, lambda);
  if (g.inside(lambda - f.eta())) r *= aux_ratio(f, lambda - f.eta());
  return r;
}

cplx phi_from_rho(cplx rho, cplx alpha, cplx eta) {
  if (alpha == cplx(0.0)) throw Error(ErrorKind::Domain, "phi is undefined at alpha = 0; extrapolate in alpha");
  return (std::cosh(alpha * eta) - rho) / std::sinh(alpha * eta);
}

cplx compute_phi(const RhoField& f, cplx zeta) { return phi_from_rho(compute_rho(f, zeta), f.alpha, f.eta()); }

cplx psi(cplx xi, cplx alpha) {
  const cplx x2 = xi * xi;
  if (std::abs(x2 - 1.0) < 1e-14) throw Error(ErrorKind::Pole, "psi has a pole at xi^2 = 1");
  return std::pow(xi, alpha) * (x2 + 1.0) / (2.0 * (x2 - 1.0));
}

cplx omega0(cplx xi, cplx alpha, cplx eta) {
  const cplx q = std::exp(eta), y = std::exp(alpha * eta);
  const cplx pre = (1.0 - y) / (1.0 + y);
  return -pre * pre * (psi(q * xi, alpha) - psi(xi / q, alpha));
}

SystemPtr build_nystrom(RhoPtr field, double rcond_floor) {
  auto sys = std::make_shared<NystromSystem>();
  sys->field = field;
  const ContourGrid& g = *field->grid;
  const Eigen::Index M = g.size();
  const cplx eta = field->eta(), alpha = field->alpha;
  sys->dm.resize(M);
  for (Eigen::Index k = 0; k < M; ++k)
    sys->dm[k] = g.weights[k] / (kTwoPiI * field->rho_nodes[k] * (1.0 + field->base->a[k]));
  CMat A(M, M);
  for (Eigen::Index k = 0; k < M; ++k)
    for (Eigen::Index j = 0; j < M; ++j)
      A(j, k) = (j == k ? 1.0 : 0.0) - kernel_alpha(g.nodes[j] - g.nodes[k], eta, alpha) * sys->dm[k];
  sys->lu.compute(A);
  sys->rcond = sys->lu.rcond();
  if (!(sys->rcond > rcond_floor))
    throw Error(ErrorKind::LinearSolve, "Nystrom matrix is singular or ill-conditioned");
  std::ostringstream os;
  os.precision(17);
  os << g.descriptor() << "|" << field->base->twist << "|" << field->twisted->twist << "|"
     << to_string(field->base->params.mode) << "|" << field->base->params.N << "|"
     << field->base->params.trotter_limit;
  sys->hash = hash_string(os.str());
  return sys;
}

GTable solve_G(const NystromSystem& sys, cplx nu) {
  const RhoField& f = *sys.field;
  const ContourGrid& g = *f.grid;
  if (classify(g, nu) != Region::Inside) throw Error(ErrorKind::Domain, "nu must lie inside the contour");
  for (auto z : g.nodes)
    if (std::abs(z - nu) < 2.0 * kEdgeEps) throw Error(ErrorKind::Domain, "nu coincides with a node");
  const cplx eta = f.eta(), qa = std::exp(f.alpha * eta);
  GTable t;
  t.nu = nu;
  t.rho_at_nu = rho_at(f, nu);
  t.kernel_matrix_hash = sys.hash;
  CVec rhs(g.size());
  for (std::size_t j = 0; j < g.size(); ++j)
    rhs[j] = cth(g.nodes[j] - nu - eta) / qa - t.rho_at_nu * cth(g.nodes[j] - nu);
  t.values = sys.lu.solve(rhs);
  return t;
}

cplx eval_G(const NystromSystem& sys, const GTable& t, cplx lambda) {
  const RhoField& f = *sys.field;
  const ContourGrid& g = *f.grid;
  const cplx eta = f.eta(), qa = std::exp(f.alpha * eta);
  cplx v = cth(lambda - t.nu - eta) / qa - t.rho_at_nu * cth(lambda - t.nu);
  for (std::size_t k = 0; k < g.size(); ++k)
    v += kernel_alpha(lambda - g.nodes[k], eta, f.alpha) * sys.dm[k] * t.values[k];
  return v;
}

cplx continue_G(const NystromSystem& sys, const GTable& t, cplx lambda) {
  const RhoField& f = *sys.field;
  const ContourGrid& g = *f.grid;
  const cplx eta = f.eta(), qa = std::exp(f.alpha * eta);
  cplx v = eval_G(sys, t, lambda);
  const cplx lm = lambda - eta, lp = lambda + eta;
  if (g.inside(lm))
    v += continue_G(sys, t, lm) * one_plus_aux_inv(*f.base, lm) / (qa * rho_continued(f, lm));
  if (g.inside(lp))
    v -= qa * continue_G(sys, t, lp) * one_plus_aux_inv(*f.base, lp) / rho_continued(f, lp);
  return v;
}

cplx rho_identity_residual(const NystromSystem& sys, const GTable& t) {
  const RhoField& f = *sys.field;
  const cplx qa = std::exp(f.alpha * f.eta());
  const cplx integral = (sys.dm.array() * t.values.array()).sum();
  return 1.0 / qa - (qa - 1.0 / qa) * integral - t.rho_at_nu;
}

namespace {

cplx Psi_integral(const NystromSystem& sys, const GTable& t, cplx nu1, cplx rho1) {
  const RhoField& f = *sys.field;
  const ContourGrid& g = *f.grid;
  const cplx eta = f.eta(), qa = std::exp(f.alpha * eta);
  cplx s = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const cplx mu = g.nodes[k];
    s += sys.dm[k] * t.values[k] * (qa * cth(mu - nu1 - eta) - rho1 * cth(mu - nu1));
  }
  return s;
}

}  // namespace

cplx compute_Psi(const NystromSystem& sys, const GTable& t, cplx nu1) {
  const ContourGrid& g = *sys.field->grid;
  require_off_contour(g, nu1, "nu1");
  if (!g.inside(nu1)) throw Error(ErrorKind::Domain, "compute_Psi needs nu1 inside the contour");
  return Psi_integral(sys, t, nu1, rho_at(*sys.field, nu1));
}

cplx continue_Psi(const NystromSystem& sys, const GTable& t, cplx nu1) {
  const RhoField& f = *sys.field;
  const ContourGrid& g = *f.grid;
  const cplx eta = f.eta(), qa = std::exp(f.alpha * eta);
  require_off_contour(g, nu1, "nu1");
  require_off_contour(g, nu1 + eta, "nu1 + eta");
  const cplx rho1 = rho_continued(f, nu1);
  cplx v = Psi_integral(sys, t, nu1, rho1);
  if (!g.inside(nu1)) v -= continue_G(sys, t, nu1) * one_plus_aux_inv(*f.base, nu1);
  const cplx np = nu1 + eta;
  if (g.inside(np)) v -= qa * continue_G(sys, t, np) * one_plus_aux_inv(*f.base, np) / rho_continued(f, np);
  return v;
}

OmegaPieces compute_omega(const NystromSystem& sys, const GTable& t2, cplx nu1) {
  const RhoField& f = *sys.field;
  const cplx eta = f.eta(), q = std::exp(eta), a = f.alpha;
  OmegaPieces p;
  const cplx lx = nu1 - t2.nu;
  const cplx x = std::exp(lx);
  p.Psi12 = continue_Psi(sys, t2, nu1);
  p.rho1 = rho_continued(f, nu1);
  p.rho2 = t2.rho_at_nu;
  p.omega = 2.0 * std::exp(a * lx) * p.Psi12 - (psi(q * x, a) - psi(x / q, a)) + 2.0 * (p.rho1 - p.rho2) * psi(x, a);
  return p;
}

OmegaPieces compute_omega(const NystromSystem& sys, cplx nu1, cplx nu2) {
  return compute_omega(sys, solve_G(sys, nu2), nu1);
}

}  // namespace xxz
