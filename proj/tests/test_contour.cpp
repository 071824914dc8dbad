#include <doctest.h>

#include "fixtures.hpp"
#include "xxz/contour.hpp"

using namespace xxz;

namespace {

CVec samples(const ContourGrid& g, const std::function<cplx(cplx)>& f) {
  CVec v(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) v[k] = f(g.nodes[k]);
  return v;
}

}  // namespace

TEST_CASE("contour nodes stay inside the strip and the cutoff") {
  const auto g = build_contour(0.6, 0.15, 20.0, 768);
  CHECK(g.size() == 2 * 768 + 2 * 16);
  for (auto z : g.nodes) {
    CHECK(std::abs(z.imag()) <= 0.15 + 1e-15);
    CHECK(std::abs(z.real()) <= 20.0 + 1e-12);
  }
}

TEST_CASE("contour is symmetric under complex conjugation with mirrored weights") {
  const auto g = build_contour(0.6, 0.15, 20.0, 256);
  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    double best = 1e300;
    for (std::size_t l = 0; l < g.size(); ++l) {
      if (std::abs(g.nodes[l] - std::conj(g.nodes[k])) > 1e-12) continue;
      best = std::min(best, std::abs(g.weights[l] + std::conj(g.weights[k])));
    }
    worst = std::max(worst, best);
  }
  CHECK(worst < 1e-14);
}

TEST_CASE("residue test for cth(lambda - x) inside the resolved central region") {
  const auto g = build_contour(0.6, 0.15, 20.0, 768);
  for (cplx x : {cplx(0.0), cplx(0.1, 0.05), cplx(-0.5, -0.07), cplx(2.0, 0.0)}) {
    CHECK(std::abs(integrate(g, samples(g, [&](cplx l) { return cth(l - x); })) - 1.0) < 1e-10);
  }
}

TEST_CASE("integrate: constant, interior pole, exterior pole, kernel") {
  const auto g = build_contour(0.6, 0.25, 20.0, 768);
  CHECK(std::abs(integrate(g, samples(g, [](cplx) { return cplx(1.0); }))) < 1e-12);
  CHECK(std::abs(integrate(g, samples(g, [](cplx l) { return cth(l); })) - 1.0) < 1e-10);
  CHECK(std::abs(integrate(g, samples(g, [](cplx l) { return cth(l - cplx(0.0, 0.6)); }))) < 1e-10);
  CHECK(std::abs(integrate(g, samples(g, [](cplx l) { return cth(l - 0.1); })) - 1.0) < 1e-10);
  const cplx eta(0.0, 0.6);
  CHECK(std::abs(integrate(g, samples(g, [&](cplx l) { return kernel(l, eta); }))) < 1e-10);
}

TEST_CASE("trapezoid rule integrates the same residue") {
  const auto g = build_contour(0.6, 0.15, 20.0, 2048, QuadratureRule::Trapezoid);
  CHECK(std::abs(integrate(g, samples(g, [](cplx l) { return cth(l - 0.1); })) - 1.0) < 1e-6);
}

TEST_CASE("classify points") {
  const auto g = build_contour(0.6, 0.25, 20.0, 256);
  CHECK(classify(g, 0.0) == Region::Inside);
  CHECK(classify(g, cplx(0.0, 0.3)) == Region::OutsideAbove);
  CHECK(classify(g, cplx(0.0, -0.3)) == Region::OutsideBelow);
  CHECK(classify(g, g.nodes[37]) == Region::OnContour);
  CHECK(distance_to_contour(g, 0.0) == doctest::Approx(0.25));
}

TEST_CASE("derivative along the contour") {
  const auto g = build_contour(0.6, 0.15, 20.0, 768);
  const CVec f = samples(g, [](cplx l) { return std::sin(l) / std::cosh(l); });
  const CVec df = differentiate(g, f);
  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const cplx l = g.nodes[k];
    const cplx exact = (std::cos(l) * std::cosh(l) - std::sin(l) * std::sinh(l)) / (std::cosh(l) * std::cosh(l));
    worst = std::max(worst, std::abs(df[k] - exact));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("invalid grid settings are rejected") {
  CHECK_THROWS_AS(build_contour(0.6, 0.35, 20.0, 256), Error);
  CHECK_THROWS_AS(build_contour(0.6, 0.15, 20.0, 250), Error);
  CHECK_THROWS_AS(build_contour(0.0, 0.15, 20.0, 256), Error);
}
