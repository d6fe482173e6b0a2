#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "nplap/viscosity.hpp"

using namespace nplap;
using Catch::Approx;

namespace {
const PValue PINF = PValue::infinity();

std::function<double(const Vec&)> const_f(double v) {
  return [v](const Vec&) { return v; };
}

// a hand-coded smooth candidate with exact jets: u = x^3/6 + x y + y^2
Candidate cubic_candidate() {
  Candidate c;
  c.dim = 2;
  c.value = [](const Vec& v) {
    return v[0] * v[0] * v[0] / 6.0 + v[0] * v[1] + v[1] * v[1];
  };
  c.jet = [](const Vec& v) {
    return Jet(Vec(v[0] * v[0] / 2.0 + v[1], v[0] + 2.0 * v[1]),
               SymMat(v[0], 1.0, 2.0));
  };
  return c;
}
}  // namespace

TEST_CASE("radial candidates solve the interior equation", "[viscosity]") {
  const PValue ps[] = {PValue::finite(1.0),  PValue::finite(1.5),
                       PValue::finite(2.0),  PValue::finite(3.0),
                       PValue::finite(10.0), PINF};
  std::mt19937 rng(41u);
  for (int n : {2, 3}) {
    for (const auto& p : ps) {
      RadialSolution s(p, n, 1.0, Vec::zero(n));
      const Candidate c = radial_candidate(s);
      std::vector<Vec> pts;
      pts.push_back(Vec::zero(n));  // the critical point
      for (int k = 0; k < 200; ++k)
        pts.push_back(testutil::random_unit(rng, n) * (0.99 * (k + 1) / 201.0));
      const auto rep =
          check_interior(c, p, const_f(1.0), pts, CheckMode::solution);
      INFO("p=" << p.str() << " n=" << n);
      CHECK(rep.pass());
      CHECK(rep.checked == static_cast<int>(pts.size()));
    }
  }
}

TEST_CASE("zero candidate is a subsolution but not a supersolution",
          "[viscosity]") {
  const Candidate z = constant_candidate(2, 0.0);
  auto d = Domain::ball(Vec(0.0, 0.0), 1.0);
  const auto pts = halton_interior_points(d, 100);
  REQUIRE(pts.size() == 100);

  const auto sub =
      check_interior(z, PValue::finite(3.0), const_f(1.0), pts, CheckMode::sub);
  CHECK(sub.pass());

  const auto super = check_interior(z, PValue::finite(3.0), const_f(1.0), pts,
                                    CheckMode::super);
  CHECK(super.violations.size() == pts.size());  // 0 >= 1 fails everywhere
  CHECK(super.worst_residual == Approx(1.0));
}

TEST_CASE("negation duality between sub- and supersolutions",
          "[viscosity][property]") {
  const Candidate c = cubic_candidate();
  Candidate neg = c;
  neg.value = [c](const Vec& x) { return -c.value(x); };
  neg.jet = [c](const Vec& x) {
    const Jet j = c.jet(x);
    return Jet(-j.gradient, j.hessian * -1.0);
  };

  auto d = Domain::ball(Vec(0.0, 0.0), 2.0);
  const auto pts = halton_interior_points(d, 300);
  for (const auto& p : {PValue::finite(1.5), PValue::finite(4.0), PINF}) {
    for (double fv : {0.5, -0.3}) {
      const auto sub = check_interior(c, p, const_f(fv), pts, CheckMode::sub);
      const auto super =
          check_interior(neg, p, const_f(-fv), pts, CheckMode::super);
      CHECK(sub.violations.size() == super.violations.size());
      CHECK(sub.worst_residual == Approx(super.worst_residual).margin(1e-12));
    }
  }
}

TEST_CASE("jet consistency validation", "[viscosity]") {
  std::mt19937 rng(42u);
  auto sample = [&rng](int) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return Vec(u(rng), u(rng));
  };

  const auto good = validate_candidate_jet(cubic_candidate(), sample);
  CHECK(good.ok);
  CHECK(good.checked == 100);

  Candidate bad = cubic_candidate();
  bad.jet = [](const Vec& v) {
    return Jet(Vec(1.1 * (v[0] * v[0] / 2.0 + v[1]), v[0] + 2.0 * v[1]),
               SymMat(v[0], 1.0, 2.0));
  };
  CHECK_FALSE(validate_candidate_jet(bad, sample).ok);
}

TEST_CASE("Neumann residuals for radial candidates", "[viscosity]") {
  auto d = Domain::ball(Vec(0.0, 0.0), 1.5);
  const PValue p = PValue::finite(3.0);
  RadialSolution s(p, 2, 1.5, Vec(0.0, 0.0));
  const Candidate c = radial_candidate(s);
  const double cp = c_p(p, 2);

  // exact datum: residual 0 everywhere and both barriers hold
  {
    auto q = QProfile::closed_form([cp](double r) { return cp * r; });
    const auto rep = check_neumann(c, d, q, p, 64);
    CHECK(rep.samples == 64);
    CHECK(rep.max_abs_residual < 1e-12);
    CHECK(rep.barrier1_ok);
    CHECK(rep.barrier2_ok);
  }

  // offset datum: residual -1 everywhere, upper barrier fails
  {
    auto q = QProfile::closed_form([cp](double r) { return cp * r + 1.0; });
    const auto rep = check_neumann(c, d, q, p, 64);
    for (const auto& [r, resid] : rep.residuals)
      CHECK(resid == Approx(-1.0).margin(1e-12));
    CHECK(rep.barrier1_ok);
    CHECK_FALSE(rep.barrier2_ok);
  }

  // q undefined at a sampled radius: table too narrow
  {
    auto q = QProfile::table({{0.2, 1.0}, {0.4, 1.2}});
    CHECK_THROWS_AS(check_neumann(c, d, q, p, 32), profile_error);
  }
}

TEST_CASE("degenerate relation for p = 1 radial solutions", "[viscosity]") {
  // n = 2 via the domain band sampler
  {
    auto d = Domain::ball(Vec(0.0, 0.0), 1.0);
    RadialSolution s(PValue::finite(1.0), 2, 1.0, Vec(0.0, 0.0));
    const auto rep = check_degenerate_relation(
        radial_candidate(s), boundary_band_points(d, 0.2));
    CHECK(rep.pass());
    CHECK(rep.checked > 100);
    CHECK(rep.worst_residual < 1e-6);
  }

  // n = 3 via the sphere band sampler
  {
    RadialSolution s(PValue::finite(1.0), 3, 2.0, Vec::zero(3));
    const auto rep = check_degenerate_relation(
        radial_candidate(s), sphere_band_points(3, Vec::zero(3), 2.0, 0.3));
    CHECK(rep.pass());
    CHECK(rep.worst_residual < 1e-6);
  }

  // flat candidate u = 1 - x: zero curvature, fails with an H <= 0 note
  {
    Candidate flat;
    flat.dim = 2;
    flat.value = [](const Vec& v) { return 1.0 - v[0]; };
    flat.jet = [](const Vec&) {
      return Jet(Vec(-1.0, 0.0), SymMat(0.0, 0.0, 0.0));
    };
    auto d = Domain::ball(Vec(0.0, 0.0), 1.0);
    const auto rep =
        check_degenerate_relation(flat, boundary_band_points(d, 0.2, 16));
    CHECK_FALSE(rep.pass());
    bool curvature_note = false;
    for (const auto& v : rep.violations)
      if (v.which.find("H <= 0") != std::string::npos) curvature_note = true;
    CHECK(curvature_note);
  }

  // vanishing gradient in the band is a recorded precondition failure
  {
    const Candidate z = constant_candidate(2, 1.0);
    auto d = Domain::ball(Vec(0.0, 0.0), 1.0);
    const auto rep =
        check_degenerate_relation(z, boundary_band_points(d, 0.1, 16));
    CHECK(rep.precondition_failures == rep.checked);
  }
}

TEST_CASE("halton interior sampler", "[viscosity]") {
  auto d = Domain::ellipse(Vec(0.0, 0.0), 0.8, 1.2);
  const auto a = halton_interior_points(d, 500);
  const auto b = halton_interior_points(d, 500);
  REQUIRE(a.size() == 500);
  for (size_t k = 0; k < a.size(); ++k) {
    CHECK(d.inside(a[k]));
    CHECK(a[k][0] == b[k][0]);  // deterministic
  }
}
