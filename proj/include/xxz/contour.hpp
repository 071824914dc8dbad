#pragma once

#include <memory>

#include "xxz/common.hpp"

namespace xxz {

// Closed rectangle around the real axis, traversed counterclockwise from the
// lower-left corner: lower line, right side, upper line, left side.
struct ContourGrid {
  double gamma = 0.6;
  double half_width = 0.15;
  double cutoff = 20.0;
  int points_per_side = 768;
  int panel_order = 16;
  std::vector<cplx> nodes;
  std::vector<cplx> weights;
  // Per-panel Lagrange differentiation matrices, one per consecutive block of panel_order nodes.
  std::vector<CMat> panel_diff;

  std::size_t size() const { return nodes.size(); }
  cplx start() const { return nodes.empty() ? cplx{} : cplx(-cutoff, -half_width); }
  bool inside(cplx z) const { return std::abs(z.imag()) < half_width && std::abs(z.real()) < cutoff; }
  std::string descriptor() const;
};

using GridPtr = std::shared_ptr<const ContourGrid>;

enum class Region { Inside, OutsideAbove, OutsideBelow, OnContour };
const char* to_string(Region r);

enum class QuadratureRule { GaussLegendre, Trapezoid };

// points_per_side counts nodes on each horizontal line and must be a multiple of the panel order (16).
ContourGrid build_contour(double gamma, double half_width, double cutoff, int points_per_side,
                          QuadratureRule rule = QuadratureRule::GaussLegendre);
GridPtr make_grid(double gamma, double half_width, double cutoff, int points_per_side);

// Sum_k w_k f_k / (2 pi i).
cplx integrate(const ContourGrid& grid, const CVec& samples);
cplx integrate(const ContourGrid& grid, const std::vector<cplx>& samples);

Region classify(const ContourGrid& grid, cplx point, double edge_eps = kEdgeEps);

// Distance from a point to the contour path.
double distance_to_contour(const ContourGrid& grid, cplx point);

// Derivative along the contour of node samples of an analytic function.
CVec differentiate(const ContourGrid& grid, const CVec& f);

}  // namespace xxz
