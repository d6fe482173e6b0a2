#include <catch2/catch_amalgamated.hpp>

#include "nplap/expr.hpp"

using namespace nplap;
using Catch::Approx;

TEST_CASE("expression parsing and evaluation", "[expr]") {
  const std::vector<std::string> rv = {"r"};
  CHECK(Expr::parse("r^2", rv).eval({3.0}) == Approx(9.0));
  CHECK(Expr::parse("2*r + 1", rv).eval({2.5}) == Approx(6.0));
  CHECK(Expr::parse("-r^2", rv).eval({3.0}) == Approx(-9.0));  // -(r^2)
  CHECK(Expr::parse("(1+2)*r/2", rv).eval({4.0}) == Approx(6.0));
  CHECK(Expr::parse("r^-1", rv).eval({4.0}) == Approx(0.25));
  CHECK(Expr::parse("2+3*4", {}).eval({}) == Approx(14.0));
  CHECK(Expr::parse("2^3^2", {}).eval({}) == Approx(512.0));  // right-assoc
  CHECK(Expr::parse("1 - 2 - 3", {}).eval({}) == Approx(-4.0));
  CHECK(Expr::parse(" .5 * r ", rv).eval({2.0}) == Approx(1.0));

  const std::vector<std::string> rh = {"r", "h"};
  CHECK(Expr::parse("r^2*h^0.5", rh).eval({2.0, 4.0}) == Approx(8.0));
}

TEST_CASE("expression errors", "[expr]") {
  const std::vector<std::string> rv = {"r"};
  CHECK_THROWS_AS(Expr::parse("x + 1", rv), parse_error);
  CHECK_THROWS_AS(Expr::parse("r +", rv), parse_error);
  CHECK_THROWS_AS(Expr::parse("(r", rv), parse_error);
  CHECK_THROWS_AS(Expr::parse("r 2", rv), parse_error);
  CHECK_THROWS_AS(Expr::parse("", rv), parse_error);
  CHECK_THROWS_AS(Expr::parse("r", rv).eval({}), error);
}
