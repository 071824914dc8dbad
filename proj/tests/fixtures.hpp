#pragma once

#include "xxz/density.hpp"
#include "xxz/oracle.hpp"

namespace fixtures {

using namespace xxz;

inline constexpr double kGamma = 0.6;
inline const cplx kEta{0.0, kGamma};
inline const cplx kNu1{-0.10, 0.03};
inline const cplx kNu2{0.05, 0.02};

// N = 4 finite length, kappa = alpha = 0.1, slightly inhomogeneous.
inline ModelParams finite_params(cplx kappa = 0.1, cplx alpha = 0.1) {
  ModelParams p;
  p.gamma = kGamma;
  p.N = 4;
  p.kappa = kappa;
  p.alpha = alpha;
  for (double off : {0.05, -0.03, 0.02, -0.07}) p.beta_inhom.push_back(kEta / 2.0 + off);
  return p;
}

inline ModelParams trotter_params(double T, double h, cplx alpha = 0.0) {
  ModelParams p;
  p.gamma = kGamma;
  p.mode = Mode::Temperature;
  p.trotter_limit = true;
  p.N = 2;
  p.T = T;
  p.h = h;
  p.alpha = alpha;
  return p;
}

inline GridPtr fine_grid() {
  static const GridPtr g = make_grid(kGamma, 0.15, 20.0, 768);
  return g;
}

inline GridPtr coarse_grid() {
  static const GridPtr g = make_grid(kGamma, 0.15, 20.0, 256);
  return g;
}

inline SystemPtr finite_system() {
  static const SystemPtr s = build_nystrom(make_rho_field(finite_params(), fine_grid()));
  return s;
}

inline SystemPtr coarse_finite_system() {
  static const SystemPtr s = build_nystrom(make_rho_field(finite_params(), coarse_grid()));
  return s;
}

inline double max_abs(const CMat& M) { return M.cwiseAbs().maxCoeff(); }

}  // namespace fixtures
