#include "xxz/contour.hpp"

#include <cmath>
#include <sstream>

namespace xxz {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return "configuration";
    case ErrorKind::Usage: return "usage";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::Branch: return "branch";
    case ErrorKind::LinearSolve: return "linear-solve";
    case ErrorKind::Pole: return "pole";
    case ErrorKind::Edge: return "edge";
    case ErrorKind::Degeneracy: return "degeneracy";
    case ErrorKind::Normalization: return "normalization";
    case ErrorKind::Size: return "size";
    case ErrorKind::Capability: return "capability";
    case ErrorKind::ExcludedParameter: return "excluded-parameter";
    case ErrorKind::Precision: return "precision";
    case ErrorKind::Consistency: return "consistency";
    case ErrorKind::Construction: return "construction";
    case ErrorKind::Model: return "model";
  }
  return "unknown";
}

const char* to_string(Region r) {
  switch (r) {
    case Region::Inside: return "inside";
    case Region::OutsideAbove: return "outside_above";
    case Region::OutsideBelow: return "outside_below";
    case Region::OnContour: return "on_contour_tolerance";
  }
  return "unknown";
}

namespace {

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

// Real-axis panel edges clustered towards the origin: x = cutoff sinh(a s)/sinh(a).
constexpr double kStretch = 3.0;

double mapped(double s, double cutoff) { return cutoff * std::sinh(kStretch * s) / std::sinh(kStretch); }
double mapped_deriv(double s, double cutoff) {
  return cutoff * kStretch * std::cosh(kStretch * s) / std::sinh(kStretch);
}

CMat lagrange_diff(const std::vector<cplx>& z) {
  const int n = static_cast<int>(z.size());
  std::vector<cplx> bary(n, 1.0);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l)
      if (l != i) bary[i] *= (z[i] - z[l]);
  CMat D = CMat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    cplx rowsum = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      D(i, k) = (bary[i] / bary[k]) / (z[i] - z[k]);
      rowsum += D(i, k);
    }
    D(i, i) = -rowsum;
  }
  return D;
}

}  // namespace

std::string ContourGrid::descriptor() const {
  std::ostringstream os;
  os.precision(17);
  os << "rect:gamma=" << gamma << ":delta=" << half_width << ":cutoff=" << cutoff
     << ":pps=" << points_per_side << ":order=" << panel_order << ":rule="
     << (panel_diff.empty() ? "trapezoid" : "gauss");
  return os.str();
}

ContourGrid build_contour(double gamma, double half_width, double cutoff, int points_per_side,
                          QuadratureRule rule) {
  if (!(gamma > 0.0 && gamma < kPi)) throw Error(ErrorKind::Config, "gamma must satisfy 0 < gamma < pi");
  if (!(half_width > 0.0)) throw Error(ErrorKind::Config, "half_width must be > 0");
  if (!(half_width < gamma / 2)) throw Error(ErrorKind::Config, "half_width must be < gamma/2");
  if (!(cutoff >= 5.0)) throw Error(ErrorKind::Config, "cutoff must be >= 5");
  if (points_per_side < 16) throw Error(ErrorKind::Config, "points_per_side must be >= 16");

  ContourGrid g;
  g.gamma = gamma;
  g.half_width = half_width;
  g.cutoff = cutoff;
  g.points_per_side = points_per_side;
  const double d = half_width;

  if (rule == QuadratureRule::GaussLegendre) {
    const int n = g.panel_order;
    if (points_per_side % n != 0)
      throw Error(ErrorKind::Config, "points_per_side must be a multiple of 16");
    const int panels = points_per_side / n;
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    std::vector<double> xs, ws;
    for (int p = 0; p < panels; ++p) {
      double lo = mapped(-1.0 + 2.0 * p / panels, cutoff);
      double hi = mapped(-1.0 + 2.0 * (p + 1) / panels, cutoff);
      for (int i = 0; i < n; ++i) {
        xs.push_back(0.5 * (hi - lo) * x[i] + 0.5 * (hi + lo));
        ws.push_back(0.5 * (hi - lo) * w[i]);
      }
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
      g.nodes.emplace_back(xs[i], -d);
      g.weights.emplace_back(ws[i], 0.0);
    }
    for (int i = 0; i < n; ++i) {
      g.nodes.emplace_back(cutoff, d * x[i]);
      g.weights.push_back(kI * d * w[i]);
    }
    for (std::size_t i = xs.size(); i-- > 0;) {
      g.nodes.emplace_back(xs[i], d);
      g.weights.emplace_back(-ws[i], 0.0);
    }
    for (int i = 0; i < n; ++i) {
      g.nodes.emplace_back(-cutoff, -d * x[i]);
      g.weights.push_back(-kI * d * w[i]);
    }
    for (std::size_t b = 0; b < g.nodes.size(); b += n) {
      std::vector<cplx> z(g.nodes.begin() + b, g.nodes.begin() + b + n);
      g.panel_diff.push_back(lagrange_diff(z));
    }
  } else {
    // Composite trapezoid in the stretched parameter; corners shared between adjacent sides.
    const int m = points_per_side;
    const int mv = 16;
    auto add = [&](cplx z, cplx wt) {
      if (!g.nodes.empty() && std::abs(g.nodes.back() - z) < 1e-14) {
        g.weights.back() += wt;
      } else {
        g.nodes.push_back(z);
        g.weights.push_back(wt);
      }
    };
    const double hs = 2.0 / m;
    for (int i = 0; i <= m; ++i) {
      double s = -1.0 + i * hs;
      double f = (i == 0 || i == m) ? 0.5 : 1.0;
      add(cplx(mapped(s, cutoff), -d), f * hs * mapped_deriv(s, cutoff));
    }
    const double hv = 2.0 * d / mv;
    for (int i = 0; i <= mv; ++i) {
      double f = (i == 0 || i == mv) ? 0.5 : 1.0;
      add(cplx(cutoff, -d + i * hv), kI * f * hv);
    }
    for (int i = 0; i <= m; ++i) {
      double s = 1.0 - i * hs;
      double f = (i == 0 || i == m) ? 0.5 : 1.0;
      add(cplx(mapped(s, cutoff), d), -f * hs * mapped_deriv(s, cutoff));
    }
    for (int i = 0; i < mv; ++i) {
      double f = (i == 0) ? 0.5 : 1.0;
      add(cplx(-cutoff, d - i * hv), -kI * f * hv);
    }
    g.weights.front() += -kI * 0.5 * hv;
  }
  return g;
}

GridPtr make_grid(double gamma, double half_width, double cutoff, int points_per_side) {
  return std::make_shared<const ContourGrid>(build_contour(gamma, half_width, cutoff, points_per_side));
}

cplx integrate(const ContourGrid& grid, const CVec& samples) {
  if (static_cast<std::size_t>(samples.size()) != grid.size())
    throw Error(ErrorKind::Usage, "sample count does not match node count");
  cplx s = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) s += grid.weights[k] * samples[k];
  return s / (2.0 * kPi * kI);
}

cplx integrate(const ContourGrid& grid, const std::vector<cplx>& samples) {
  return integrate(grid, CVec(Eigen::Map<const CVec>(samples.data(), samples.size())));
}

double distance_to_contour(const ContourGrid& grid, cplx p) {
  const double L = grid.cutoff, d = grid.half_width;
  auto seg = [](double t, double lo, double hi, double off) {
    double c = std::min(std::max(t, lo), hi);
    return std::hypot(t - c, off);
  };
  double dist = seg(p.real(), -L, L, p.imag() + d);
  dist = std::min(dist, seg(p.real(), -L, L, p.imag() - d));
  dist = std::min(dist, seg(p.imag(), -d, d, p.real() - L));
  dist = std::min(dist, seg(p.imag(), -d, d, p.real() + L));
  return dist;
}

Region classify(const ContourGrid& grid, cplx point, double edge_eps) {
  if (distance_to_contour(grid, point) < edge_eps) return Region::OnContour;
  if (grid.inside(point)) return Region::Inside;
  return point.imag() >= 0.0 ? Region::OutsideAbove : Region::OutsideBelow;
}

CVec differentiate(const ContourGrid& grid, const CVec& f) {
  if (grid.panel_diff.empty())
    throw Error(ErrorKind::Usage, "differentiation requires a Gauss-Legendre grid");
  if (static_cast<std::size_t>(f.size()) != grid.size())
    throw Error(ErrorKind::Usage, "sample count does not match node count");
  const int n = grid.panel_order;
  CVec out(f.size());
  for (std::size_t b = 0; b < grid.panel_diff.size(); ++b)
    out.segment(b * n, n) = grid.panel_diff[b] * f.segment(b * n, n);
  return out;
}

}  // namespace xxz
