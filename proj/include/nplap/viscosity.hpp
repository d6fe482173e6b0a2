#pragma once

// Sample-based verification of the viscosity inequalities for
// analytically supplied candidates. For a C^2 candidate the touching
// test-function quantifier collapses to evaluating the candidate's own
// jet, so
//
//   subsolution:    -D_p^+ u(x) <= f(x)
//   supersolution:  -D_p^- u(x) >= f(x)
//
// pointwise on the sample set. Also: the viscosity Neumann comparison
// -<grad u, nu> vs q(|x - xbar|) with the radial-barrier inequalities
// at the touching points, and the degenerate p = 1 relation
// (n - 1) |grad u| H = 1 with H the level-set mean curvature.

#include <functional>
#include <string>
#include <vector>

#include "nplap/core.hpp"
#include "nplap/geometry.hpp"
#include "nplap/operators.hpp"
#include "nplap/profile.hpp"
#include "nplap/radial.hpp"

namespace nplap {

struct Candidate {
  int dim = 2;
  std::function<double(const Vec&)> value;
  std::function<Jet(const Vec&)> jet;
  std::function<bool(const Vec&)> smooth_region;  // empty = everywhere

  bool in_smooth_region(const Vec& x) const {
    return !smooth_region || smooth_region(x);
  }
};

inline Candidate radial_candidate(const RadialSolution& s) {
  Candidate c;
  c.dim = s.n;
  c.value = [s](const Vec& x) { return radial_value(s, x); };
  c.jet = [s](const Vec& x) { return radial_jet(s, x); };
  return c;
}

inline Candidate constant_candidate(int n, double v) {
  Candidate c;
  c.dim = n;
  c.value = [v](const Vec&) { return v; };
  c.jet = [n](const Vec&) {
    return Jet(Vec::zero(n), SymMat::identity(n, 0.0));
  };
  return c;
}

// Spot-check that the jet really is the derivative of the value:
// central differences at 1e-5 step, 1e-4 relative tolerance.
struct JetConsistency {
  int checked = 0;
  double worst_rel = 0.0;
  bool ok = false;
};

template <class Sampler>
JetConsistency validate_candidate_jet(const Candidate& c, Sampler&& sample,
                                      int points = 100) {
  JetConsistency rep;
  const double step = 1e-5;
  for (int k = 0; k < points; ++k) {
    const Vec x = sample(k);
    if (!c.in_smooth_region(x)) continue;
    const Jet j = c.jet(x);
    double scale = std::max(1.0, j.gradient.norm());
    for (int i = 0; i < c.dim; ++i) {
      Vec xp = x, xm = x;
      xp[i] += step;
      xm[i] -= step;
      const double fd = (c.value(xp) - c.value(xm)) / (2 * step);
      rep.worst_rel =
          std::max(rep.worst_rel, std::abs(fd - j.gradient[i]) / scale);
    }
    ++rep.checked;
  }
  rep.ok = rep.checked > 0 && rep.worst_rel < 1e-4;
  return rep;
}

enum class CheckMode { sub, super, solution };

inline const char* mode_name(CheckMode m) {
  switch (m) {
    case CheckMode::sub: return "sub";
    case CheckMode::super: return "super";
    case CheckMode::solution: return "solution";
  }
  return "?";
}

struct PointViolation {
  Vec x;
  double lhs = 0.0, rhs = 0.0;
  std::string which;
};

struct InteriorReport {
  CheckMode mode = CheckMode::solution;
  int checked = 0;
  std::vector<PointViolation> violations;
  double worst_residual = 0.0;  // most positive violation amount
  bool pass() const { return violations.empty(); }
};

inline InteriorReport check_interior(const Candidate& c, const PValue& p,
                                     const std::function<double(const Vec&)>& f,
                                     const std::vector<Vec>& points,
                                     CheckMode mode, double tol = 1e-9) {
  InteriorReport rep;
  rep.mode = mode;
  for (const Vec& x : points) {
    if (!c.in_smooth_region(x)) continue;
    ++rep.checked;
    const Jet j = c.jet(x);
    const double fx = f(x);
    if (mode == CheckMode::sub || mode == CheckMode::solution) {
      const double lhs = -eval_upper(p, j);
      if (lhs > fx + tol) {
        rep.violations.push_back({x, lhs, fx, "-D_p^+ u <= f fails"});
        rep.worst_residual = std::max(rep.worst_residual, lhs - fx);
      }
    }
    if (mode == CheckMode::super || mode == CheckMode::solution) {
      const double lhs = -eval_lower(p, j);
      if (lhs < fx - tol) {
        rep.violations.push_back({x, lhs, fx, "-D_p^- u >= f fails"});
        rep.worst_residual = std::max(rep.worst_residual, fx - lhs);
      }
    }
  }
  return rep;
}

// Quasi-random (Halton) interior sample of a 2-D domain.
inline std::vector<Vec> halton_interior_points(const Domain& d, int count) {
  auto halton = [](int index, int base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
      f /= base;
      r += f * (index % base);
      index /= base;
    }
    return r;
  };
  const BBox box = d.bounding_box();
  std::vector<Vec> pts;
  int i = 1;
  while (static_cast<int>(pts.size()) < count && i < 1000 * count) {
    const Vec x(box.x0 + (box.x1 - box.x0) * halton(i, 2),
                box.y0 + (box.y1 - box.y0) * halton(i, 3));
    if (d.inside(x)) pts.push_back(x);
    ++i;
  }
  return pts;
}

struct NeumannReport {
  int samples = 0;
  double max_abs_residual = 0.0;
  std::vector<std::pair<double, double>> residuals;  // (radius, residual)
  // the comparison-proof barrier inequalities at the touching points
  double cp_R1 = 0, q_R1 = 0, cp_R2 = 0, q_R2 = 0;
  bool barrier1_ok = false;  // c_p R1 <= q(R1)
  bool barrier2_ok = false;  // q(R2) <= c_p R2
};

inline NeumannReport check_neumann(const Candidate& c, const Domain& d,
                                   const QProfile& q, const PValue& p,
                                   int samples = 256, double tol = 1e-9) {
  NeumannReport rep;
  for (const auto& bp : d.boundary_sample(samples)) {
    const Jet j = c.jet(bp.location);
    const double r = (bp.location - d.xbar()).norm();
    const double resid = -j.gradient.dot(bp.outer_normal) - q(r);
    rep.residuals.emplace_back(r, resid);
    rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(resid));
    ++rep.samples;
  }

  const auto [R1, R2] = d.radii();
  rep.cp_R1 = radial_neumann(p, 2, R1);
  rep.cp_R2 = radial_neumann(p, 2, R2);
  rep.q_R1 = q(R1);
  rep.q_R2 = q(R2);
  rep.barrier1_ok = rep.cp_R1 <= rep.q_R1 + tol;
  rep.barrier2_ok = rep.q_R2 <= rep.cp_R2 + tol;
  return rep;
}

// Sample points for the degenerate-relation check, with the boundary
// flag controlling the extra H > 0 assertion.
struct BandPoint {
  Vec x;
  bool on_boundary = false;
};

struct DegenerateReport {
  int checked = 0;
  double worst_residual = 0.0;
  std::vector<PointViolation> violations;
  int precondition_failures = 0;  // vanishing gradient in the band
  bool pass() const { return violations.empty() && precondition_failures == 0; }
};

// Core check of (n-1) |grad u| H = 1 on supplied points; H is the mean
// curvature of the level set through the point, recovered from the jet
// as H = (D_inf^N u - lap u) / ((n-1) |grad u|).
inline DegenerateReport check_degenerate_relation(
    const Candidate& c, const std::vector<BandPoint>& points,
    double tol = 1e-6) {
  DegenerateReport rep;
  for (const auto& bp : points) {
    if (!c.in_smooth_region(bp.x)) continue;
    ++rep.checked;
    const Jet j = c.jet(bp.x);
    const double gn = j.gradient.norm();
    if (gn < critical_gradient_threshold(j.hessian)) {
      ++rep.precondition_failures;
      continue;
    }
    const double dinf = j.hessian.quad(j.gradient) / (gn * gn);
    const double H = (dinf - j.hessian.trace()) /
                     ((c.dim - 1) * gn);  // level-set mean curvature
    const double lhs = (c.dim - 1) * gn * H;
    if (std::abs(lhs - 1.0) > tol) {
      rep.violations.push_back({bp.x, lhs, 1.0, "(n-1)|Du|H = 1 fails"});
      rep.worst_residual = std::max(rep.worst_residual, std::abs(lhs - 1.0));
    }
    if (bp.on_boundary && !(H > 0.0)) {
      rep.violations.push_back(
          {bp.x, H, 0.0, "mean curvature H <= 0 on the boundary"});
    }
  }
  return rep;
}

// Band sampling along a 2-D domain boundary: points at graded depths
// inside, plus the boundary points themselves.
inline std::vector<BandPoint> boundary_band_points(const Domain& d,
                                                   double band,
                                                   int boundary_samples = 64,
                                                   int depths = 4) {
  std::vector<BandPoint> pts;
  for (const auto& bp : d.boundary_sample(boundary_samples)) {
    pts.push_back({bp.location, true});
    for (int k = 1; k <= depths; ++k) {
      const double s = band * k / depths;
      pts.push_back({bp.location - bp.outer_normal * s, false});
    }
  }
  return pts;
}

// Band sampling near the sphere |x - center| = R in dimension n.
inline std::vector<BandPoint> sphere_band_points(int n, const Vec& center,
                                                 double R, double band,
                                                 int count = 200,
                                                 unsigned seed = 7u) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> depth(0.0, band);
  std::vector<BandPoint> pts;
  for (int k = 0; k < count; ++k) {
    Vec dir = Vec::zero(n);
    double nn = 0.0;
    do {
      for (int i = 0; i < n; ++i) dir[i] = g(rng);
      nn = dir.norm();
    } while (nn < 1e-6);
    dir = dir * (1.0 / nn);
    const bool on_bd = (k % 4 == 0);
    const double r = on_bd ? R : R - depth(rng);
    pts.push_back({center + dir * r, on_bd});
  }
  return pts;
}

}  // namespace nplap
