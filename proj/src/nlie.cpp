#include "xxz/nlie.hpp"

#include <cmath>

namespace xxz {

const char* to_string(Mode m) { return m == Mode::FiniteLength ? "finite_length" : "temperature"; }

cplx ModelParams::base_twist() const {
  if (mode == Mode::FiniteLength) return kappa;
  return h / (2.0 * eta() * T) + kappa;
}

std::vector<cplx> ModelParams::betas() const {
  if (!beta_inhom.empty()) return beta_inhom;
  std::vector<cplx> b;
  if (mode == Mode::FiniteLength) {
    b.assign(N, eta() / 2.0);
  } else {
    const cplx beta = 2.0 * J * std::sinh(eta()) / T;
    for (int j = 0; j < N / 2; ++j) {
      b.push_back(eta() - beta / double(N));
      b.push_back(beta / double(N));
    }
  }
  return b;
}

void ModelParams::validate() const {
  if (!(gamma > 0.0 && gamma < kPi)) throw Error(ErrorKind::Config, "gamma must satisfy 0 < gamma < pi");
  if (!(J > 0.0)) throw Error(ErrorKind::Config, "J must be > 0");
  if (N < 2 || N % 2 != 0) throw Error(ErrorKind::Config, "N must be even and >= 2");
  if (mode == Mode::Temperature && !(T > 0.0)) throw Error(ErrorKind::Config, "T must be > 0");
  if (!beta_inhom.empty() && static_cast<int>(beta_inhom.size()) != N)
    throw Error(ErrorKind::Config, "beta_inhom must have N entries");
  if (trotter_limit && mode != Mode::Temperature)
    throw Error(ErrorKind::Config, "trotter_limit requires temperature mode");
}

namespace {

bool use_trotter(const ModelParams& p) { return p.mode == Mode::Temperature && p.trotter_limit; }

int closure_power_for(const ModelParams& p) { return p.mode == Mode::FiniteLength ? p.N / 2 : 0; }

// Points where the driving term has a zero or a pole.
std::vector<cplx> driving_singularities(const ModelParams& p) {
  std::vector<cplx> s;
  if (use_trotter(p)) {
    s.push_back(0.0);
    s.push_back(-p.eta());
    return s;
  }
  const auto b = p.betas();
  const cplx eta = p.eta();
  if (p.mode == Mode::FiniteLength) {
    for (auto bj : b) {
      s.push_back(bj);
      s.push_back(bj - eta);
    }
  } else {
    for (int j = 0; j < p.N / 2; ++j) {
      s.push_back(b[2 * j + 1]);
      s.push_back(b[2 * j + 1] - eta);
      s.push_back(b[2 * j] - 2.0 * eta);
      s.push_back(b[2 * j] - eta);
    }
  }
  return s;
}

void check_singular(const ModelParams& p, cplx lambda) {
  for (auto s : driving_singularities(p))
    if (std::abs(lambda - s) < kEdgeEps)
      throw Error(ErrorKind::Singularity, "lambda at a branch point of the driving term");
}

// Driving exponential as num/den, including the contour-closure factor.
void driving_parts(const ModelParams& p, cplx twist, cplx start, int closure, cplx lambda, cplx& num,
                   cplx& den) {
  const cplx eta = p.eta();
  if (use_trotter(p)) {
    num = std::exp(-2.0 * twist * eta - 2.0 * p.J * std::sinh(eta) * bare_energy(lambda, eta) / p.T);
    den = 1.0;
    return;
  }
  const auto b = p.betas();
  num = 1.0;
  den = 1.0;
  if (p.mode == Mode::FiniteLength) {
    num = std::exp((double(p.N) - 2.0 * twist) * eta);
    for (auto bj : b) {
      num *= sh(lambda - bj);
      den *= sh(lambda - bj + eta);
    }
  } else {
    num = std::exp(-2.0 * twist * eta);
    for (int j = 0; j < p.N / 2; ++j) {
      const cplx odd = b[2 * j], even = b[2 * j + 1];
      num *= sh(lambda - even) * sh(lambda - odd + 2.0 * eta);
      den *= sh(lambda - even + eta) * sh(lambda - odd + eta);
    }
  }
  if (closure != 0) {
    const cplx f = sh(lambda - start + eta) / sh(lambda - start - eta) * std::exp(-2.0 * eta);
    num *= std::pow(f, closure);
  }
}

CVec unwrap_log1p(const CVec& a, double branch_eps, bool check_continuity) {
  CVec L(a.size());
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const cplx z = 1.0 + a[k];
    if (std::abs(z) < branch_eps)
      throw Error(ErrorKind::Branch,
                  "|1 + a| vanishes at a node; use smaller damping or a different half_width");
    cplx l = std::log(z);
    if (k > 0) {
      double jump = l.imag() - L[k - 1].imag();
      double turns = std::round(jump / (2.0 * kPi));
      l -= cplx(0.0, 2.0 * kPi * turns);
      if (check_continuity && std::abs(l.imag() - L[k - 1].imag()) > 0.75 * kPi)
        throw Error(ErrorKind::Branch,
                    "ln(1 + a) is not continuous along the contour; use smaller damping or a "
                    "different half_width");
    }
    L[k] = l;
  }
  return L;
}

CMat kernel_matrix(const ContourGrid& g, cplx eta) {
  const Eigen::Index M = g.size();
  CMat K(M, M);
  const cplx c = 1.0 / (2.0 * kPi * kI);
  for (Eigen::Index k = 0; k < M; ++k)
    for (Eigen::Index j = 0; j < M; ++j) K(j, k) = kernel(g.nodes[j] - g.nodes[k], eta) * g.weights[k] * c;
  return K;
}

}  // namespace

cplx driving_term(const ModelParams& p, cplx twist, cplx lambda) {
  check_singular(p, lambda);
  const cplx eta = p.eta();
  if (use_trotter(p)) return -2.0 * twist * eta - 2.0 * p.J * std::sinh(eta) * bare_energy(lambda, eta) / p.T;
  const auto b = p.betas();
  cplx s = 0.0;
  if (p.mode == Mode::FiniteLength) {
    s = (double(p.N) - 2.0 * twist) * eta;
    for (auto bj : b) s += std::log(sh(lambda - bj) / sh(lambda - bj + eta));
  } else {
    s = -2.0 * twist * eta;
    for (int j = 0; j < p.N / 2; ++j) {
      const cplx odd = b[2 * j], even = b[2 * j + 1];
      s += std::log(sh(lambda - even) / sh(lambda - even + eta));
      s += std::log(sh(lambda - odd + 2.0 * eta) / sh(lambda - odd + eta));
    }
  }
  return s;
}

AuxSolution solve_aux(const ModelParams& params, cplx twist, const GridPtr& grid, const SolverOptions& opts) {
  params.validate();
  if (!(opts.tol > 0.0)) throw Error(ErrorKind::Config, "tol must be > 0");
  if (!(opts.damping > 0.0 && opts.damping <= 1.0)) throw Error(ErrorKind::Config, "damping must be in (0, 1]");
  const ContourGrid& g = *grid;
  const Eigen::Index M = g.size();
  const int closure = closure_power_for(params);
  for (auto s : driving_singularities(params))
    if (distance_to_contour(g, s) < 2.0 * kEdgeEps)
      throw Error(ErrorKind::Domain, "an inhomogeneity lies on the contour");

  CVec drive(M);
  for (Eigen::Index k = 0; k < M; ++k) {
    cplx num, den;
    driving_parts(params, twist, g.start(), closure, g.nodes[k], num, den);
    drive[k] = num / den;
  }
  const CMat K = kernel_matrix(g, params.eta());
  // The kernel integrates constants to zero exactly; subtracting the local value removes that quadrature error.
  const CVec row_sum = K.rowwise().sum();

  CVec a = drive;
  std::vector<double> history;
  double err = 0.0;
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    const CVec L = unwrap_log1p(a, opts.branch_eps, false);
    const CVec rhs = K * L - row_sum.cwiseProduct(L);
    CVec next(M);
    err = 0.0;
    for (Eigen::Index k = 0; k < M; ++k) {
      next[k] = drive[k] * std::exp(-rhs[k]);
      err = std::max(err, std::abs(std::log(next[k] / a[k])));
    }
    history.push_back(err);
    if (err < opts.tol) {
      a = next;
      break;
    }
    a = opts.damping * next + (1.0 - opts.damping) * a;
  }
  if (err >= opts.tol)
    throw NonConvergenceError("NLIE did not converge within max_iter", std::move(history));

  return restore_aux(params, twist, grid, a, it + 1, opts);
}

AuxSolution restore_aux(const ModelParams& params, cplx twist, const GridPtr& grid, const CVec& a, int iterations,
                        const SolverOptions& opts) {
  const Eigen::Index M = grid->size();
  if (a.size() != M) throw Error(ErrorKind::Usage, "aux values do not match the grid");
  AuxSolution sol;
  sol.grid = grid;
  sol.params = params;
  sol.twist = twist;
  sol.a = a;
  sol.log_a = a.array().log();
  sol.log1p_a = unwrap_log1p(a, opts.branch_eps, true);
  sol.iterations = iterations;
  sol.closure_power = closure_power_for(params);
  const cplx back = std::log(1.0 + a[0]) - sol.log1p_a[M - 1];
  const double close = back.imag() - 2.0 * kPi * std::round(back.imag() / (2.0 * kPi));
  sol.winding = (sol.log1p_a[M - 1].imag() + close - sol.log1p_a[0].imag()) / (2.0 * kPi);
  sol.residual = resubstitution_residual(sol);
  return sol;
}

AuxPtr solve_aux_ptr(const ModelParams& params, cplx twist, const GridPtr& grid, const SolverOptions& opts) {
  return std::make_shared<const AuxSolution>(solve_aux(params, twist, grid, opts));
}

AuxParts aux_parts(const AuxSolution& sol, cplx lambda) {
  const ContourGrid& g = *sol.grid;
  const cplx eta = sol.params.eta();
  AuxParts r;
  driving_parts(sol.params, sol.twist, g.start(), sol.closure_power, lambda, r.num, r.den);
  // Away from the continuation region the kernel integrates constants to zero; subtract ln(1 + a) at the nearest node.
  cplx shift = 0.0;
  if (!g.inside(lambda - eta) && !g.inside(lambda + eta)) {
    std::size_t nearest = 0;
    for (std::size_t k = 1; k < g.size(); ++k)
      if (std::abs(lambda - g.nodes[k]) < std::abs(lambda - g.nodes[nearest])) nearest = k;
    shift = sol.log1p_a[nearest];
  }
  cplx s = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k)
    s += kernel(lambda - g.nodes[k], eta) * (sol.log1p_a[k] - shift) * g.weights[k];
  r.expo = std::exp(-s / (2.0 * kPi * kI));
  if (g.inside(lambda - eta)) r.expo /= (1.0 + aux_value(sol, lambda - eta));
  if (g.inside(lambda + eta)) r.expo *= (1.0 + aux_value(sol, lambda + eta));
  return r;
}

cplx aux_value(const AuxSolution& sol, cplx lambda) { return aux_parts(sol, lambda).value(); }

cplx eval_aux(const AuxSolution& sol, const ModelParams& params, cplx lambda) {
  check_singular(params, lambda);
  return std::log(aux_value(sol, lambda));
}

cplx one_plus_aux_inv(const AuxSolution& sol, cplx lambda) {
  const AuxParts p = aux_parts(sol, lambda);
  return p.den / (p.den + p.num * p.expo);
}

double resubstitution_residual(const AuxSolution& sol) {
  double r = 0.0;
  for (std::size_t k = 0; k < sol.grid->size(); ++k)
    r = std::max(r, std::abs(std::log(aux_value(sol, sol.grid->nodes[k]) / sol.a[k])));
  return r;
}

}  // namespace xxz
