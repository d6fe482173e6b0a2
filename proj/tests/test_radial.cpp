#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "nplap/radial.hpp"

using namespace nplap;
using Catch::Approx;

TEST_CASE("radial values at reference points", "[radial]") {
  RadialSolution s2(PValue::finite(2.0), 2, 1.0, Vec(0.0, 0.0));
  CHECK(radial_value(s2, Vec(0.0, 0.0)) == Approx(0.5));

  RadialSolution sinf(PValue::infinity(), 2, 2.0, Vec(0.0, 0.0));
  CHECK(radial_value(sinf, Vec(2.0, 0.0)) == Approx(0.0).margin(1e-15));

  RadialSolution s1(PValue::finite(1.0), 3, 2.0, Vec(0.0, 0.0, 0.0));
  CHECK(radial_value(s1, Vec(0.0, 0.0, 0.0)) == Approx(1.0));
}

TEST_CASE("radial jets", "[radial]") {
  RadialSolution s1(PValue::finite(1.0), 3, 1.0, Vec(0.0, 0.0, 0.0));
  const Jet j = radial_jet(s1, Vec(1.0, 0.0, 0.0));
  CHECK(j.gradient[0] == Approx(-0.5));
  CHECK(j.gradient[1] == 0.0);
  CHECK(j.hessian.at(0, 0) == Approx(-0.5));
  CHECK(j.hessian.at(1, 1) == Approx(-0.5));
  CHECK(j.hessian.at(0, 1) == 0.0);

  const Jet jc = radial_jet(s1, Vec(0.0, 0.0, 0.0));
  CHECK(jc.gradient.norm() == 0.0);

  RadialSolution sinf(PValue::infinity(), 2, 3.0, Vec(0.0, 0.0));
  const Jet ji = radial_jet(sinf, Vec(0.0, 1.0));
  CHECK(ji.gradient[0] == Approx(0.0));
  CHECK(ji.gradient[1] == Approx(-1.0));
}

TEST_CASE("radial Neumann datum", "[radial]") {
  CHECK(radial_neumann(PValue::infinity(), 2, 3.0) == 3.0);
  CHECK(radial_neumann(PValue::finite(2.0), 2, 1.0) == 1.0);
  CHECK(radial_neumann(PValue::finite(1.0), 3, 2.0) == 1.0);
  CHECK_THROWS_AS(radial_neumann(PValue::finite(2.0), 2, -1.0), error);
}

TEST_CASE("normal derivative of radial_value matches radial_neumann",
          "[radial][property]") {
  std::mt19937 rng(21u);
  for (int n : {2, 3}) {
    for (double pv : {1.0, 1.5, 2.0, 3.0, 10.0}) {
      const PValue p = PValue::finite(pv);
      const double R = 1.0 + (n - 2) * 0.7;
      RadialSolution s(p, n, R, Vec::zero(n));
      const Vec nu = testutil::random_unit(rng, n);
      // directional derivative from the exact jet at a boundary point
      const Jet j = radial_jet(s, nu * R);
      CHECK(-j.gradient.dot(nu) == Approx(radial_neumann(p, n, R)).margin(1e-13));
    }
  }
}

TEST_CASE("radial solutions are ordered in R and scale with c_p",
          "[radial][property]") {
  std::mt19937 rng(22u);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const PValue p = PValue::finite(3.0);
  RadialSolution small(p, 2, 1.0, Vec(0.0, 0.0));
  RadialSolution big(p, 2, 1.5, Vec(0.0, 0.0));
  for (int k = 0; k < 500; ++k) {
    const Vec x(u(rng), u(rng));
    CHECK(radial_value(small, x) <= radial_value(big, x) + 1e-15);

    // exact c_p/c_p' scaling between exponents
    RadialSolution other(PValue::finite(7.0), 2, 1.0, Vec(0.0, 0.0));
    const double ratio = c_p(p, 2) / c_p(PValue::finite(7.0), 2);
    CHECK(radial_value(small, x) == Approx(ratio * radial_value(other, x)));
  }
}

TEST_CASE("verify_radial_is_solution across p and n", "[radial]") {
  const PValue ps[] = {PValue::finite(1.0),  PValue::finite(1.5),
                       PValue::finite(2.0),  PValue::finite(3.0),
                       PValue::finite(10.0), PValue::infinity()};
  for (int n : {2, 3}) {
    for (const PValue& p : ps) {
      RadialSolution s(p, n, 1.3, Vec::zero(n));
      const auto rep = verify_radial_is_solution(s, 200);
      INFO("p=" << p.str() << " n=" << n);
      CHECK(rep.pass);
      CHECK(rep.worst_interior < 1e-10);
    }
  }
  CHECK_THROWS_AS(
      verify_radial_is_solution(
          RadialSolution(PValue::finite(2.0), 2, 1.0, Vec(0.0, 0.0)), 10),
      error);
}
