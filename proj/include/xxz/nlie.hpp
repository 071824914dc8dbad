#pragma once

#include <memory>

#include "xxz/contour.hpp"
#include "xxz/model.hpp"

namespace xxz {

struct AuxSolution {
  GridPtr grid;
  ModelParams params;
  cplx twist = 0.0;
  CVec a;          // aux function at the nodes
  CVec log_a;      // principal ln a at the nodes
  CVec log1p_a;    // ln(1 + a), continued along the node order from the lower-left corner
  double residual = 0.0;
  int iterations = 0;
  int closure_power = 0;  // power of the contour-closure factor in the driving term
  double winding = 0.0;   // total change of Im ln(1 + a) around the contour over 2 pi
};

using AuxPtr = std::shared_ptr<const AuxSolution>;

struct SolverOptions {
  double tol = 1e-12;
  int max_iter = 500;
  double damping = 0.5;
  double branch_eps = 1e-12;
};

// Driving term split as num/den times exp(-kernel integral); keeps exact zeros and poles finite.
struct AuxParts {
  cplx num = 1.0;
  cplx den = 1.0;
  cplx expo = 1.0;
  cplx value() const { return num * expo / den; }
};

// Logarithmic driving term of the NLIE variant selected by params (no contour-closure factor).
cplx driving_term(const ModelParams& params, cplx twist, cplx lambda);

AuxSolution solve_aux(const ModelParams& params, cplx twist, const GridPtr& grid,
                      const SolverOptions& opts = {});
// Rebuilds the derived fields of a solution from its node values (used when loading from a cache).
AuxSolution restore_aux(const ModelParams& params, cplx twist, const GridPtr& grid, const CVec& a, int iterations,
                        const SolverOptions& opts = {});
AuxPtr solve_aux_ptr(const ModelParams& params, cplx twist, const GridPtr& grid,
                     const SolverOptions& opts = {});

// Aux function at an arbitrary point, analytically continued across the contour where needed.
AuxParts aux_parts(const AuxSolution& sol, cplx lambda);
cplx aux_value(const AuxSolution& sol, cplx lambda);
// ln a(lambda) by resubstitution into the NLIE right-hand side.
cplx eval_aux(const AuxSolution& sol, const ModelParams& params, cplx lambda);
// 1 / (1 + a(lambda)) evaluated as den / (den + num exp).
cplx one_plus_aux_inv(const AuxSolution& sol, cplx lambda);

// Sup-norm of ln a minus the NLIE right-hand side at every node.
double resubstitution_residual(const AuxSolution& sol);

}  // namespace xxz
