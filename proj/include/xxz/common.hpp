#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace xxz {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// Default distance below which a point counts as sitting on the contour or on a singularity.
inline constexpr double kEdgeEps = 1e-8;

enum class ErrorKind {
  Config,
  Usage,
  Domain,
  Singularity,
  NonConvergence,
  Branch,
  LinearSolve,
  Pole,
  Edge,
  Degeneracy,
  Normalization,
  Size,
  Capability,
  ExcludedParameter,
  Precision,
  Consistency,
  Construction,
  Model,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& message, std::vector<double> history)
      : Error(ErrorKind::NonConvergence, message), history_(std::move(history)) {}
  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

inline cplx sh(cplx x) { return std::sinh(x); }
inline cplx cth(cplx x) { return std::cosh(x) / std::sinh(x); }

// Bare energy e(x) = cth(x) - cth(x + eta).
inline cplx bare_energy(cplx x, cplx eta) { return cth(x) - cth(x + eta); }

// NLIE kernel K(x) = cth(x - eta) - cth(x + eta).
inline cplx kernel(cplx x, cplx eta) { return cth(x - eta) - cth(x + eta); }

// Twisted kernel K_alpha(x) = q^{-alpha} cth(x - eta) - q^{alpha} cth(x + eta).
inline cplx kernel_alpha(cplx x, cplx eta, cplx alpha) {
  return std::exp(-alpha * eta) * cth(x - eta) - std::exp(alpha * eta) * cth(x + eta);
}

// q^p with q = e^eta.
inline cplx qpow(cplx eta, cplx p) { return std::exp(p * eta); }

}  // namespace xxz
