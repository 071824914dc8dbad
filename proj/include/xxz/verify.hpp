#pragma once

#include <memory>
#include <string>
#include <vector>

#include "xxz/density.hpp"

namespace xxz {

struct CheckResult {
  std::string id;
  std::string description;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct VerificationReport {
  std::string config_hash;
  std::vector<CheckResult> checks;
  bool all_pass() const;
  std::string to_json() const;
};

// Parameters of the verification suite. Physics checks against exact diagonalization use fixed temperatures
// and fields listed in the README.
struct SuiteSettings {
  double gamma = 0.6;
  int N = 4;
  cplx kappa = 0.1;
  cplx alpha = 0.1;
  // Inhomogeneities relative to eta/2 for the finite-length checks.
  std::vector<cplx> beta_offsets = {0.05, -0.03, 0.02, -0.07};
  cplx nu1 = {-0.10, 0.03};
  cplx nu2 = {0.05, 0.02};
  int points_per_side = 768;
  double half_width = 0.15;
  double cutoff = 20.0;
  SolverOptions solver;
  bool inject_table_fault = false;
};

// The twelve suite entries, in order.
const std::vector<std::string>& criterion_ids();
std::string criterion_description(const std::string& id);

// Runs the requested criteria ("all" selects every one); results carry sub-check ids "<criterion>.<check>".
VerificationReport run_suite(const SuiteSettings& settings, const std::vector<std::string>& which);

// Building blocks reused by the CLI for checks on every produced matrix.
std::vector<CheckResult> reduction_checks(const std::string& prefix, const DensityMatrix& D2, const DensityMatrix& D1a,
                                          const DensityMatrix& D1b, cplx rho1, cplx alpha, cplx eta, double tol);
CheckResult make_check(const std::string& id, const std::string& description, double residual, double tolerance,
                       const std::string& detail = "");

}  // namespace xxz
