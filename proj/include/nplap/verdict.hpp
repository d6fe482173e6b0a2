#pragma once

// The decision engine for the overdetermined problem
//
//   -D_p^N u = 1 in Omega,  u = 0 and -du/dnu = q(|x - xbar|) on the
//   boundary.
//
// Three clauses on the radial profile phi(r) = q(r) - c_p r over
// [R1, R2]:
//   1. a unique root R with (q(r) - c_p r)(r - R) > 0 off the root:
//      solvable only when Omega = B(xbar, R); otherwise no solution.
//   2. q(r)/r strictly increasing: solvable only if Omega is a ball
//      centered at xbar.
//   3. q continuous with no root: no solution at all.
// Plus the curvature test for the p = 1 problem with q(r, H): if
// q(r, 1/r)/r is strictly increasing (and q > 0 is non-decreasing in
// its curvature argument), a solution that is smooth near the boundary
// forces R1 = R2.
//
// Monotonicity is certified on a finite mesh with a strict margin;
// profiles that increase by less than the margin are ruled
// Inconclusive, never assumed strict.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "nplap/core.hpp"
#include "nplap/geometry.hpp"
#include "nplap/grid.hpp"
#include "nplap/operators.hpp"
#include "nplap/profile.hpp"
#include "nplap/solver.hpp"

namespace nplap {

enum class Outcome { OnlyBall, MustBeBallCenteredAtXbar, NoSolution, Inconclusive };

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::OnlyBall: return "OnlyBall";
    case Outcome::MustBeBallCenteredAtXbar: return "MustBeBallCenteredAtXbar";
    case Outcome::NoSolution: return "NoSolution";
    case Outcome::Inconclusive: return "Inconclusive";
  }
  return "?";
}

struct RootInfo {
  double r = 0.0;
  int sign_before = 0;  // sign of phi just below the root
  int sign_after = 0;
};

struct RootScan {
  std::vector<RootInfo> roots;
  bool identically_zero = false;  // phi ~ 0 across the whole mesh
  double phi_min = 0.0, phi_max = 0.0;
  double zero_tol = 0.0;
};

// Roots of phi(r) = q(r) - c_p r on [R1, R2]: sign-change bisection over
// a uniform mesh, refined to ~1e-12.
inline RootScan find_roots(const QProfile& q, const PValue& p, int n,
                           double R1, double R2, int mesh = 10000) {
  if (!(R1 <= R2)) throw error("find_roots: R1 <= R2 required");
  const double cp = c_p(p, n);
  auto phi = [&](double r) { return q(r) - cp * r; };

  RootScan scan;
  const double rtol = 1e-12 * std::max(1.0, R2);

  if (R2 - R1 < rtol) {  // degenerate interval: the ball case
    const double v = phi(R1);
    scan.phi_min = scan.phi_max = v;
    scan.zero_tol = 1e-12 * std::max(1.0, cp * std::max(1.0, R2));
    if (std::abs(v) <= scan.zero_tol) scan.roots.push_back({R1, 0, 0});
    return scan;
  }

  std::vector<double> vals(static_cast<size_t>(mesh) + 1);
  double scale = cp * R2;
  scan.phi_min = std::numeric_limits<double>::infinity();
  scan.phi_max = -scan.phi_min;
  for (int k = 0; k <= mesh; ++k) {
    const double r = R1 + (R2 - R1) * k / mesh;
    const double v = phi(r);
    if (!std::isfinite(v)) throw profile_error("find_roots: non-finite q value");
    vals[static_cast<size_t>(k)] = v;
    scale = std::max(scale, std::abs(v));
    scan.phi_min = std::min(scan.phi_min, v);
    scan.phi_max = std::max(scan.phi_max, v);
  }
  const double ztol = 1e-12 * std::max(1.0, scale);
  scan.zero_tol = ztol;

  long zero_count = 0;
  for (double v : vals)
    if (std::abs(v) <= ztol) ++zero_count;
  if (zero_count > mesh / 2) {
    scan.identically_zero = true;
    return scan;
  }

  auto sign_of = [&](double v) { return std::abs(v) <= ztol ? 0 : (v > 0 ? 1 : -1); };
  auto push_root = [&](double r, int sb, int sa) {
    const double sep = 2.0 * (R2 - R1) / mesh;
    if (!scan.roots.empty() && std::abs(scan.roots.back().r - r) < sep) return;
    scan.roots.push_back({r, sb, sa});
  };

  for (int k = 0; k <= mesh; ++k) {
    const double r = R1 + (R2 - R1) * k / mesh;
    const int s = sign_of(vals[static_cast<size_t>(k)]);
    if (s == 0) {
      // touching or crossing at (near) a mesh point
      const int sb = k > 0 ? sign_of(vals[static_cast<size_t>(k - 1)]) : 0;
      const int sa = k < mesh ? sign_of(vals[static_cast<size_t>(k + 1)]) : 0;
      push_root(r, sb, sa);
      continue;
    }
    if (k == mesh) continue;
    const int s2 = sign_of(vals[static_cast<size_t>(k + 1)]);
    if (s2 == 0 || s == s2) continue;
    // bracketed sign change: bisect
    double lo = r, hi = R1 + (R2 - R1) * (k + 1) / mesh;
    double flo = vals[static_cast<size_t>(k)];
    for (int it = 0; it < 100 && hi - lo > rtol; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = phi(mid);
      if ((fm > 0) == (flo > 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    push_root(0.5 * (lo + hi), s, s2);
  }

  // touching roots: a local extremum of phi whose extrapolated parabola
  // vertex reaches (numerically) zero without a sign change
  const double touch_tol = 1e-9 * std::max(1.0, scale);
  const double step = (R2 - R1) / mesh;
  for (int k = 1; k < mesh; ++k) {
    const double vm = vals[static_cast<size_t>(k - 1)];
    const double v0 = vals[static_cast<size_t>(k)];
    const double vp = vals[static_cast<size_t>(k + 1)];
    if (std::abs(v0) <= ztol) continue;  // already recorded
    const bool pos_min = v0 > 0 && v0 <= vm && v0 <= vp;
    const bool neg_max = v0 < 0 && v0 >= vm && v0 >= vp;
    if (!pos_min && !neg_max) continue;
    const double curv = vp - 2 * v0 + vm;
    if (std::abs(curv) < 1e-300) continue;
    const double offset = -(vp - vm) / (2 * curv);
    const double vertex = v0 - (vp - vm) * (vp - vm) / (8 * curv);
    if (std::abs(vertex) <= touch_tol && std::abs(offset) <= 1.0) {
      const int s = v0 > 0 ? 1 : -1;
      const double rt = R1 + (R2 - R1) * k / mesh + offset * step;
      // keep ordering: insert and resort below
      scan.roots.push_back({rt, s, s});
    }
  }
  std::sort(scan.roots.begin(), scan.roots.end(),
            [](const RootInfo& a, const RootInfo& b) { return a.r < b.r; });
  return scan;
}

struct ClauseFinding {
  int clause = 0;
  Outcome outcome = Outcome::Inconclusive;
  double ball_radius = 0.0;  // for OnlyBall
  std::string detail;
};

struct Verdict {
  Outcome outcome = Outcome::Inconclusive;
  std::vector<ClauseFinding> findings;
  double cp = 0.0, R1 = 0.0, R2 = 0.0;
  RootScan scan;
  double monotone_margin = 0.0;  // clause-2 certificate (min increment)
  bool no_solution_somewhere() const {
    for (const auto& f : findings)
      if (f.outcome == Outcome::NoSolution) return true;
    return false;
  }
};

namespace detail {

// strict-increase certificate on a mesh: smallest consecutive increment,
// or -inf when any step fails the margin
inline double strict_increase_margin(const std::vector<double>& v) {
  double m = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k + 1 < v.size(); ++k)
    m = std::min(m, v[k + 1] - v[k]);
  return m;
}

constexpr double kStrictMargin = 1e-12;

}  // namespace detail

inline Verdict decide_theorem1(const QProfile& q, const PValue& p, int n,
                               const Domain& d, int mesh = 10000) {
  Verdict v;
  const auto [R1, R2] = d.radii();
  v.R1 = R1;
  v.R2 = R2;
  v.cp = c_p(p, n);
  v.scan = find_roots(q, p, n, R1, R2, mesh);
  const bool is_ball = R2 - R1 <= 1e-9 * std::max(1.0, R2);

  // clause 1: unique root with the sign condition on the whole mesh
  if (!v.scan.identically_zero && v.scan.roots.size() == 1) {
    const double R = v.scan.roots.front().r;
    bool sign_ok = true;
    if (!is_ball) {
      const double step = (R2 - R1) / mesh;
      for (int k = 0; k <= mesh && sign_ok; ++k) {
        const double r = R1 + (R2 - R1) * k / mesh;
        if (std::abs(r - R) <= step) continue;
        if (!((q(r) - v.cp * r) * (r - R) > 0.0)) sign_ok = false;
      }
    }
    if (sign_ok) {
      ClauseFinding f;
      f.clause = 1;
      f.ball_radius = R;
      if (is_ball && std::abs(R - R1) <= 1e-9 * std::max(1.0, R2)) {
        f.outcome = Outcome::OnlyBall;
        f.detail = "domain is B(xbar, R); the radial solution solves the problem";
      } else if (is_ball) {
        f.outcome = Outcome::NoSolution;
        f.detail = "solvable only on B(xbar, R), but the domain is a ball of different radius";
      } else {
        f.outcome = Outcome::NoSolution;
        f.detail = "solvable only on B(xbar, R), and R1 < R2 here";
      }
      v.findings.push_back(f);
    }
  }

  // clause 2: q(r)/r strictly increasing (certified with margin)
  if (!is_ball) {
    std::vector<double> rho(static_cast<size_t>(mesh) + 1);
    for (int k = 0; k <= mesh; ++k) {
      const double r = R1 + (R2 - R1) * k / mesh;
      rho[static_cast<size_t>(k)] = q(r) / r;
    }
    v.monotone_margin = detail::strict_increase_margin(rho);
    if (v.monotone_margin >= detail::kStrictMargin) {
      ClauseFinding f;
      f.clause = 2;
      f.outcome = Outcome::MustBeBallCenteredAtXbar;
      f.detail = "q(r)/r strictly increasing on [R1, R2]";
      v.findings.push_back(f);
    }
  }

  // clause 3: continuous q with no root
  if (q.continuity_declared() && v.scan.roots.empty() &&
      !v.scan.identically_zero) {
    ClauseFinding f;
    f.clause = 3;
    f.outcome = Outcome::NoSolution;
    f.detail = "q - c_p r has a fixed sign on [R1, R2]";
    v.findings.push_back(f);
  }

  std::sort(v.findings.begin(), v.findings.end(),
            [](const ClauseFinding& a, const ClauseFinding& b) {
              return a.clause < b.clause;
            });
  v.outcome = v.findings.empty() ? Outcome::Inconclusive
                                 : v.findings.front().outcome;
  return v;
}

// Curvature test for the p = 1 problem with datum q(r, H). Hypotheses
// (q > 0, monotone non-decreasing in the curvature argument) are
// certified on an (r, h) mesh; q > 0 failures are errors, a failed
// monotonicity certificate rules Inconclusive.
inline Verdict decide_theorem2(const QProfile& q, int n, const Domain& d,
                               int mesh = 10000) {
  if (!q.is_curvature_form())
    throw profile_error("decide_theorem2: needs a curvature-form profile");
  if (n != 2)
    throw error("decide_theorem2: only n = 2 domains carry geometry here");

  Verdict v;
  const auto [R1, R2] = d.radii();
  v.R1 = R1;
  v.R2 = R2;
  v.cp = c_p(PValue::finite(1.0), n);

  if (R2 - R1 <= 1e-9 * std::max(1.0, R2)) {
    ClauseFinding f;
    f.clause = 4;
    f.outcome = Outcome::Inconclusive;
    f.detail = "domain is already a ball; nothing to certify";
    v.findings.push_back(f);
    v.outcome = f.outcome;
    return v;
  }

  const int mr = 65, mh = 65;
  const double h_lo = 0.5 / R2, h_hi = 2.0 / R1;
  bool monotone = true;
  for (int a = 0; a < mr; ++a) {
    const double r = R1 + (R2 - R1) * a / (mr - 1);
    double prev = -std::numeric_limits<double>::infinity();
    for (int b = 0; b < mh; ++b) {
      const double hc = h_lo + (h_hi - h_lo) * b / (mh - 1);
      const double qv = q(r, hc);
      if (!(qv > 0.0))
        throw hypothesis_error("decide_theorem2: q must be positive");
      if (qv < prev - detail::kStrictMargin) monotone = false;
      prev = qv;
    }
  }
  if (!monotone) {
    ClauseFinding f;
    f.clause = 4;
    f.outcome = Outcome::Inconclusive;
    f.detail = "q(r, h) is not monotone non-decreasing in h on the mesh";
    v.findings.push_back(f);
    v.outcome = f.outcome;
    return v;
  }

  std::vector<double> psi(static_cast<size_t>(mesh) + 1);
  for (int k = 0; k <= mesh; ++k) {
    const double r = R1 + (R2 - R1) * k / mesh;
    psi[static_cast<size_t>(k)] = q(r, 1.0 / r) / r;
  }
  v.monotone_margin = detail::strict_increase_margin(psi);

  ClauseFinding f;
  f.clause = 4;
  if (v.monotone_margin >= detail::kStrictMargin) {
    f.outcome = Outcome::MustBeBallCenteredAtXbar;
    f.detail = "q(r, 1/r)/r strictly increasing: a smooth-near-boundary solution forces R1 = R2";
  } else {
    f.outcome = Outcome::Inconclusive;
    f.detail = "q(r, 1/r)/r is not certifiably strictly increasing";
  }
  v.findings.push_back(f);
  v.outcome = f.outcome;
  return v;
}

// The necessary inequalities q(R1) - c_p R1 >= 0 and q(R2) - c_p R2 <= 0
// extracted in the comparison proof, plus the numeric comparison of the
// solved field's normal derivative with q at the touching points.
struct InequalityReport {
  double R1 = 0, R2 = 0, cp = 0;
  double q_R1 = 0, q_R2 = 0;
  double ineq1 = 0;  // q(R1) - cp R1, must be >= 0
  double ineq2 = 0;  // q(R2) - cp R2, must be <= 0
  bool ineq1_ok = false, ineq2_ok = false;
  double dnu_P1 = 0, dnu_P2 = 0;          // -du/dnu of the field
  double resid_P1 = 0, resid_P2 = 0;      // dnu - q at the touching points
  bool flagged = false;
  std::string note;
};

inline InequalityReport check_necessary_inequalities(
    const GridField& field, const QProfile& q, const PValue& p, int n,
    const Domain& d, double tol = 1e-9) {
  InequalityReport rep;
  const auto [R1, R2] = d.radii();
  rep.R1 = R1;
  rep.R2 = R2;
  rep.cp = c_p(p, n);
  rep.q_R1 = q(R1);
  rep.q_R2 = q(R2);
  rep.ineq1 = rep.q_R1 - rep.cp * R1;
  rep.ineq2 = rep.q_R2 - rep.cp * R2;
  const double scale = std::max(1.0, rep.cp * R2);
  rep.ineq1_ok = rep.ineq1 >= -tol * scale;
  rep.ineq2_ok = rep.ineq2 <= tol * scale;

  const auto [P1, P2] = d.touching_points();
  rep.dnu_P1 = boundary_normal_derivative(field, P1);
  rep.dnu_P2 = boundary_normal_derivative(field, P2);
  rep.resid_P1 = rep.dnu_P1 - rep.q_R1;
  rep.resid_P2 = rep.dnu_P2 - rep.q_R2;

  rep.flagged = !(rep.ineq1_ok && rep.ineq2_ok);
  rep.note = rep.flagged
                 ? "no viscosity solution can satisfy the Neumann datum"
                 : "necessary inequalities hold";
  return rep;
}

// The reflection construction on a centered axis-aligned ellipse: for
// each boundary radius r, |grad u| is gathered over the (up to four)
// reflected boundary points; the mean defines q(r) and the spread is
// the symmetry defect of the solver.
struct SymmetricQSample {
  double r = 0, q = 0, spread = 0;
};

struct SymmetricQ {
  std::vector<SymmetricQSample> samples;
  double max_spread = 0.0;
  double spread_budget = 0.0;
  QProfile profile = QProfile::closed_form([](double) { return 0.0; });
};

inline SymmetricQ build_symmetric_q(const GridField& field, const Domain& d,
                                    int radii_count = 65,
                                    double spread_budget = -1.0) {
  if (d.kind() != Domain::Kind::ellipse)
    throw error("build_symmetric_q: needs an axis-aligned ellipse");
  if ((d.center() - d.xbar()).norm() > 1e-12 * d.semi_b())
    throw error("build_symmetric_q: ellipse must be centered at xbar");
  const double a = d.semi_a(), b = d.semi_b();

  // the spread of a correct reflection-symmetric solve is at the level
  // of the solver tolerance; 10x the squared-grid scale flags a bug
  if (spread_budget <= 0.0) spread_budget = 10.0 * field.h * field.h;

  SymmetricQ out;
  out.spread_budget = spread_budget;
  std::vector<std::pair<double, double>> table;
  const bool circle = (b - a) <= 1e-12 * b;
  for (int k = 0; k < radii_count; ++k) {
    const double r = circle ? a : a + (b - a) * k / (radii_count - 1);
    const double s2 =
        circle ? 0.0
               : std::clamp((r * r - a * a) / (b * b - a * a), 0.0, 1.0);
    const double t = circle ? 0.5 * M_PI * (k + 0.5) / radii_count
                            : std::asin(std::sqrt(s2));
    std::vector<double> params = {t, M_PI - t, M_PI + t, 2 * M_PI - t};
    // collapse reflected parameters that coincide (axis points)
    std::vector<double> uniq;
    for (double tp : params) {
      bool dup = false;
      for (double tu : uniq)
        if (std::abs(std::remainder(tp - tu, 2 * M_PI)) < 1e-9) dup = true;
      if (!dup) uniq.push_back(tp);
    }
    double qmin = std::numeric_limits<double>::infinity(), qmax = -qmin,
           qsum = 0;
    for (double tp : uniq) {
      const double g = boundary_normal_derivative(field, d.boundary_point_at(tp));
      qmin = std::min(qmin, g);
      qmax = std::max(qmax, g);
      qsum += g;
    }
    SymmetricQSample s;
    s.r = r;
    s.q = qsum / static_cast<double>(uniq.size());
    s.spread = qmax - qmin;
    out.max_spread = std::max(out.max_spread, s.spread);
    out.samples.push_back(s);
    if (!circle) table.emplace_back(r, s.q);
  }
  if (out.max_spread > spread_budget)
    throw error(
        "build_symmetric_q: reflection spread exceeds the discretization "
        "budget; the solve lost the ellipse symmetry");
  if (circle) {
    // all radii coincide: q is a constant profile
    double mean = 0.0;
    for (const auto& s : out.samples) mean += s.q;
    mean /= static_cast<double>(out.samples.size());
    out.profile = QProfile::closed_form([mean](double) { return mean; });
  } else {
    out.profile = QProfile::table(std::move(table));
  }
  return out;
}

}  // namespace nplap
