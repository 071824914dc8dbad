#pragma once

#include "xxz/common.hpp"

namespace xxz {

enum class Mode { FiniteLength, Temperature };
const char* to_string(Mode m);

struct ModelParams {
  double gamma = 0.6;
  double J = 1.0;
  Mode mode = Mode::FiniteLength;
  int N = 4;
  double T = 1.0;
  double h = 0.0;
  // Finite length: boundary twist. Temperature: extra twist added to h/(2 eta T).
  cplx kappa = 0.0;
  cplx alpha = 0.0;
  std::vector<cplx> beta_inhom;  // empty selects the default distribution
  bool trotter_limit = false;
  std::vector<cplx> nu;

  cplx eta() const { return {0.0, gamma}; }
  cplx q() const { return std::exp(eta()); }
  // Twist entering the transfer matrix: kappa (finite length) or h/(2 eta T) + kappa (temperature).
  cplx base_twist() const;
  // beta_j: eta/2 (finite length) or alternating eta - beta/N, beta/N (temperature), beta = 2J sh(eta)/T.
  std::vector<cplx> betas() const;
  void validate() const;
};

}  // namespace xxz
