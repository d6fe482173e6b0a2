#pragma once

// Closed-form radial solutions on balls:
//
//   u_R(x) = (c_p / 2) (R^2 - |x - xbar|^2)
//
// solves -D_p^N u = 1 in B(xbar, R), u = 0 on the boundary, with
// Neumann datum -du/dnu = c_p R. These are exact references and the
// comparison barriers of the sandwich argument.

#include <cmath>
#include <random>

#include "nplap/core.hpp"
#include "nplap/operators.hpp"

namespace nplap {

struct RadialSolution {
  PValue p;
  int n;
  double R;
  Vec center;

  RadialSolution(PValue p_, int n_, double R_, Vec center_)
      : p(p_), n(n_), R(R_), center(center_) {
    if (n < 2) throw error("RadialSolution: n >= 2 required");
    if (center.dim != n)
      throw error("RadialSolution: center dimension != n");
    if (!(R > 0.0)) throw error("RadialSolution: R > 0 required");
  }

  double cp() const { return c_p(p, n); }
};

inline double radial_value(const RadialSolution& s, const Vec& x) {
  const double r2 = (x - s.center).norm2();
  return 0.5 * s.cp() * (s.R * s.R - r2);
}

inline Jet radial_jet(const RadialSolution& s, const Vec& x) {
  const double cp = s.cp();
  return Jet((x - s.center) * (-cp), SymMat::identity(s.n, -cp));
}

// -du_R/dnu on the boundary sphere.
inline double radial_neumann(const PValue& p, int n, double R) {
  if (!(R > 0.0)) throw error("radial_neumann: R > 0 required");
  return c_p(p, n) * R;
}

struct RadialVerifyReport {
  int samples = 0;
  double worst_interior = 0.0;  // worst |eval_normalized + 1| off center
  double center_upper = 0.0;    // |eval_upper + 1| at the center
  double center_lower = 0.0;
  bool pass = false;
};

// Spot-check that u_R solves -D_p^N u = 1: the interior jets evaluate to
// -1 away from the center; the envelopes evaluate to -1 at the center.
inline RadialVerifyReport verify_radial_is_solution(const RadialSolution& s,
                                                    int samples,
                                                    double tol = 1e-10) {
  if (samples < 100)
    throw error("verify_radial_is_solution: need samples >= 100");

  RadialVerifyReport rep;
  rep.samples = samples;

  std::mt19937 rng(20240517u);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  for (int k = 0; k < samples; ++k) {
    Vec x = Vec::zero(s.n);
    double r2;
    do {
      for (int i = 0; i < s.n; ++i) x[i] = unit(rng);
      r2 = x.norm2();
    } while (r2 > 1.0 || r2 < 1e-8);
    x = s.center + x * s.R;  // anywhere in the ball, away from the center

    const double v = eval_normalized(s.p, radial_jet(s, x));
    rep.worst_interior = std::max(rep.worst_interior, std::abs(v + 1.0));
  }

  const Jet at_center = radial_jet(s, s.center);
  rep.center_upper = std::abs(eval_upper(s.p, at_center) + 1.0);
  rep.center_lower = std::abs(eval_lower(s.p, at_center) + 1.0);

  rep.pass = rep.worst_interior < tol && rep.center_upper < tol &&
             rep.center_lower < tol;
  return rep;
}

}  // namespace nplap
