#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "nplap/geometry.hpp"

using namespace nplap;
using Catch::Approx;

namespace {

// Finite-difference curvature of a parametrized curve:
// |x'y'' - y'x''| / |gamma'|^3. Oracle for the closed-form curvature.
template <class Curve>
double fd_curvature(const Curve& gamma, double t, double eps = 1e-5) {
  const Vec pm = gamma(t - eps), p0 = gamma(t), pp = gamma(t + eps);
  const Vec d1 = (pp - pm) * (0.5 / eps);
  const Vec d2 = (pp - p0 * 2.0 + pm) * (1.0 / (eps * eps));
  const double cross = d1[0] * d2[1] - d1[1] * d2[0];
  const double sp = d1.norm();
  return std::abs(cross) / (sp * sp * sp);
}

}  // namespace

TEST_CASE("radii of reference domains", "[geometry]") {
  auto b = Domain::ball(Vec(0.0, 0.0), 2.0);
  CHECK(b.radii().first == Approx(2.0));
  CHECK(b.radii().second == Approx(2.0));

  auto e = Domain::ellipse(Vec(0.0, 0.0), 1.0, 3.0);
  CHECK(e.radii().first == Approx(1.0));
  CHECK(e.radii().second == Approx(3.0));

  auto off = Domain::ball(Vec(0.25, 0.0), 1.0, Vec(0.0, 0.0));
  CHECK(off.radii().first == Approx(0.75));
  CHECK(off.radii().second == Approx(1.25));
}

TEST_CASE("domain construction guards", "[geometry]") {
  CHECK_THROWS_AS(Domain::ball(Vec(0.0, 0.0), 1.0, Vec(2.0, 0.0)),
                  geometry_error);
  CHECK_THROWS_AS(Domain::ellipse(Vec(0.0, 0.0), 2.0, 1.0), geometry_error);
  // phi never changes sign across the box
  CHECK_THROWS_AS(
      Domain::implicit([](double, double) { return -1.0; },
                       BBox{-1, -1, 1, 1}, Vec(0.0, 0.0)),
      geometry_error);
}

TEST_CASE("circle boundary sample", "[geometry]") {
  auto b = Domain::ball(Vec(0.5, -0.5), 2.0);
  const auto pts = b.boundary_sample(64);
  REQUIRE(pts.size() == 64);
  for (const auto& bp : pts) {
    CHECK(bp.curvature == Approx(0.5));
    CHECK(bp.outer_normal.norm() == Approx(1.0).margin(1e-12));
    CHECK((bp.location - Vec(0.5, -0.5)).norm() == Approx(2.0));
  }
  CHECK_THROWS_AS(b.boundary_sample(8), geometry_error);
}

TEST_CASE("ellipse curvature matches the finite-difference oracle",
          "[geometry]") {
  const double a = 1.0, b = 2.0;
  auto e = Domain::ellipse(Vec(0.0, 0.0), a, b);
  auto gamma = [&](double t) { return e.point_at(t); };

  // semi-minor end (a, 0): flat side of the tall ellipse, kappa = a/b^2
  CHECK(fd_curvature(gamma, 0.0) == Approx(a / (b * b)).margin(1e-6));
  CHECK(e.boundary_point_at(0.0).curvature == Approx(a / (b * b)));
  CHECK(e.boundary_point_at(0.0).curvature == Approx(0.25));

  // semi-major end (0, b): sharp side, kappa = b/a^2
  CHECK(fd_curvature(gamma, M_PI / 2) == Approx(b / (a * a)).margin(1e-6));
  CHECK(e.boundary_point_at(M_PI / 2).curvature == Approx(b / (a * a)));
  CHECK(e.boundary_point_at(M_PI / 2).curvature == Approx(2.0));

  // generic parameter
  for (double t : {0.3, 1.1, 2.7, 4.0}) {
    CHECK(e.boundary_point_at(t).curvature ==
          Approx(fd_curvature(gamma, t)).margin(1e-5));
  }
}

TEST_CASE("touching points", "[geometry]") {
  auto e = Domain::ellipse(Vec(0.0, 0.0), 1.0, 2.0);
  const auto [p1, p2] = e.touching_points();
  CHECK(std::abs(p1.location[0]) == Approx(1.0));
  CHECK(p1.location[1] == Approx(0.0).margin(1e-12));
  CHECK(p2.location[0] == Approx(0.0).margin(1e-12));
  CHECK(std::abs(p2.location[1]) == Approx(2.0));

  auto b = Domain::ball(Vec(0.0, 0.0), 1.5);
  const auto [q1, q2] = b.touching_points();
  CHECK(q1.arc_parameter == 0.0);
  CHECK(q2.arc_parameter == 0.0);

  // offset ball: extremal points lie on the line through c and xbar
  auto off = Domain::ball(Vec(0.25, 0.0), 1.0, Vec(0.0, 0.0));
  const auto [r1, r2] = off.touching_points();
  CHECK((r1.location - Vec(0.0, 0.0)).norm() == Approx(0.75));
  CHECK((r2.location - Vec(0.0, 0.0)).norm() == Approx(1.25));
  CHECK(std::abs(r1.location[1]) < 1e-9);
  CHECK(std::abs(r2.location[1]) < 1e-9);
}

TEST_CASE("convexity and radii bracketing over samples",
          "[geometry][property]") {
  std::vector<Domain> domains;
  domains.push_back(Domain::ball(Vec(0.2, -0.1), 1.3, Vec(0.0, 0.3)));
  domains.push_back(Domain::ellipse(Vec(0.0, 0.0), 0.8, 1.2));
  domains.push_back(Domain::implicit(
      [](double x, double y) {
        const double ex = x / 0.9, ey = y / 1.4;
        return ex * ex * ex * ex + ey * ey * ey * ey - 1.0;
      },
      BBox{-1.0, -1.5, 1.0, 1.5}, Vec(0.1, -0.2)));

  for (const auto& d : domains) {
    const auto [r1, r2] = d.radii();
    for (const auto& bp : d.boundary_sample(256)) {
      const double r = (bp.location - d.xbar()).norm();
      CHECK(bp.outer_normal.dot(bp.location - d.xbar()) > 0.0);
      CHECK(r >= r1 - 1e-6);
      CHECK(r <= r2 + 1e-6);
    }
  }
}

TEST_CASE("sampled radii converge at second order", "[geometry][property]") {
  auto e = Domain::ellipse(Vec(0.0, 0.0), 1.0, 2.0);
  auto err = [&](int m) {
    const auto [r1, r2] = e.radii_sampled(m);
    return std::max(std::abs(r1 - 1.0), std::abs(r2 - 2.0));
  };
  const double e512 = err(512), e1024 = err(1024), e2048 = err(2048);
  CHECK(e512 < 1e-3);
  CHECK(e1024 < e512 / 2.5);
  CHECK(e2048 < e1024 / 2.5);
}

TEST_CASE("implicit circle reproduces exact circle geometry", "[geometry]") {
  const double R = 1.25;
  auto d = Domain::implicit(
      [R](double x, double y) { return x * x + y * y - R * R; },
      BBox{-1.5, -1.5, 1.5, 1.5}, Vec(0.0, 0.0));

  const auto [r1, r2] = d.radii();
  CHECK(r1 == Approx(R).margin(1e-6));
  CHECK(r2 == Approx(R).margin(1e-6));

  const auto pts = d.boundary_sample(64);
  REQUIRE(pts.size() == 64);
  double prev = -1.0;
  for (const auto& bp : pts) {
    CHECK((bp.location - Vec(0.0, 0.0)).norm() == Approx(R).margin(1e-8));
    CHECK(bp.curvature == Approx(1.0 / R).margin(1e-5));
    const Vec radial = bp.location * (1.0 / bp.location.norm());
    CHECK(bp.outer_normal.dot(radial) == Approx(1.0).margin(1e-8));
    CHECK(bp.arc_parameter > prev);
    prev = bp.arc_parameter;
  }

  // projection pulls an outside point back to the circle
  const Vec proj = d.project_to_boundary(Vec(2.0, 1.0));
  CHECK(proj.norm() == Approx(R).margin(1e-8));
}

TEST_CASE("degenerate implicit boundary is rejected", "[geometry]") {
  // gradient of phi vanishes identically on the zero level set
  auto d = Domain::implicit(
      [](double x, double y) {
        const double v = x * x + y * y - 1.0;
        return v * v * v;
      },
      BBox{-1.5, -1.5, 1.5, 1.5}, Vec(0.0, 0.0));
  CHECK_THROWS_AS(d.boundary_sample(32), geometry_error);
}
