#pragma once

// Bounded 2-D domains with a distinguished interior point xbar:
// balls, axis-aligned ellipses, and implicit level-set domains
// {phi < 0}. Provides boundary sampling with outer normals and
// curvature, the radii R1/R2 (min/max distance from xbar to the
// boundary), the touching points realizing them, and closest-point
// projection onto the boundary.
//
// Curvature sign convention: positive when the boundary bends around
// the interior (a circle of radius R has curvature +1/R).

#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "nplap/core.hpp"

namespace nplap {

struct BoundaryPoint {
  Vec location{0.0, 0.0};
  Vec outer_normal{0.0, 0.0};
  double curvature = 0.0;
  double arc_parameter = 0.0;
};

struct BBox {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  double diag() const { return std::hypot(x1 - x0, y1 - y0); }
  BBox inflated(double pad) const { return {x0 - pad, y0 - pad, x1 + pad, y1 + pad}; }
  bool contains(const Vec& p) const {
    return p[0] >= x0 && p[0] <= x1 && p[1] >= y0 && p[1] <= y1;
  }
};

using ScalarField2 = std::function<double(double, double)>;

class Domain {
public:
  enum class Kind { ball, ellipse, implicit };

  static Domain ball(Vec center, double R, std::optional<Vec> xbar = {}) {
    if (!(R > 0.0)) throw geometry_error("ball: radius must be positive");
    Domain d;
    d.kind_ = Kind::ball;
    d.center_ = center;
    d.a_ = d.b_ = R;
    d.xbar_ = xbar.value_or(center);
    d.box_ = BBox{center[0] - R, center[1] - R, center[0] + R, center[1] + R};
    d.require_xbar_inside();
    return d;
  }

  static Domain ellipse(Vec center, double a, double b,
                        std::optional<Vec> xbar = {}) {
    if (!(0.0 < a && a <= b))
      throw geometry_error("ellipse: semi-axes must satisfy 0 < a <= b");
    Domain d;
    d.kind_ = Kind::ellipse;
    d.center_ = center;
    d.a_ = a;
    d.b_ = b;
    d.xbar_ = xbar.value_or(center);
    d.box_ = BBox{center[0] - a, center[1] - b, center[0] + a, center[1] + b};
    d.require_xbar_inside();
    return d;
  }

  static Domain implicit(ScalarField2 phi, BBox box, Vec xbar) {
    Domain d;
    d.kind_ = Kind::implicit;
    d.phi_ = std::move(phi);
    d.box_ = box;
    d.xbar_ = xbar;
    d.center_ = xbar;
    if (!(d.phi_(xbar[0], xbar[1]) < 0.0))
      throw geometry_error("implicit domain: xbar is not strictly inside");
    if (!d.sign_change_on_box_border())
      throw geometry_error(
          "implicit domain: phi does not change sign across the bounding box");
    return d;
  }

  Kind kind() const { return kind_; }
  const Vec& xbar() const { return xbar_; }
  const Vec& center() const { return center_; }
  double semi_a() const { return a_; }
  double semi_b() const { return b_; }
  const BBox& bounding_box() const { return box_; }

  bool inside(const Vec& p) const {
    switch (kind_) {
      case Kind::ball:
        return (p - center_).norm() < a_;
      case Kind::ellipse: {
        const double ex = (p[0] - center_[0]) / a_;
        const double ey = (p[1] - center_[1]) / b_;
        return ex * ex + ey * ey < 1.0;
      }
      case Kind::implicit:
        return phi_(p[0], p[1]) < 0.0;
    }
    return false;
  }

  // Boundary point at parameter t for the analytic kinds (angle-like,
  // t in [0, 2*pi)).
  Vec point_at(double t) const {
    switch (kind_) {
      case Kind::ball:
        return Vec(center_[0] + a_ * std::cos(t), center_[1] + a_ * std::sin(t));
      case Kind::ellipse:
        return Vec(center_[0] + a_ * std::cos(t), center_[1] + b_ * std::sin(t));
      case Kind::implicit:
        throw geometry_error("point_at: no closed-form parametrization");
    }
    return Vec(0, 0);
  }

  BoundaryPoint boundary_point_at(double t) const {
    BoundaryPoint bp;
    bp.arc_parameter = t;
    bp.location = point_at(t);
    if (kind_ == Kind::ball) {
      bp.outer_normal = Vec(std::cos(t), std::sin(t));
      bp.curvature = 1.0 / a_;
    } else {
      const double nx = std::cos(t) / a_, ny = std::sin(t) / b_;
      const double nn = std::hypot(nx, ny);
      bp.outer_normal = Vec(nx / nn, ny / nn);
      const double den = a_ * a_ * std::sin(t) * std::sin(t) +
                         b_ * b_ * std::cos(t) * std::cos(t);
      bp.curvature = a_ * b_ / (den * std::sqrt(den));
    }
    return bp;
  }

  // m boundary points with outer normals and curvature.
  std::vector<BoundaryPoint> boundary_sample(int m) const {
    if (m < 16) throw geometry_error("boundary_sample: m >= 16 required");
    std::vector<BoundaryPoint> out;
    out.reserve(static_cast<size_t>(m));
    if (kind_ != Kind::implicit) {
      for (int j = 0; j < m; ++j)
        out.push_back(boundary_point_at(2.0 * M_PI * j / m));
      return out;
    }
    const auto& poly = traced_boundary();
    const double L = poly.back().s;
    for (int j = 0; j < m; ++j) {
      const double s = L * j / m;
      Vec p = polyline_point(poly, s);
      p = project_implicit(p);
      out.push_back(implicit_boundary_point(p, s));
    }
    return out;
  }

  // (R1, R2): min/max distance from xbar to the boundary. Closed form
  // for balls and centered ellipses, sampled otherwise.
  std::pair<double, double> radii() const {
    switch (kind_) {
      case Kind::ball: {
        const double d = (center_ - xbar_).norm();
        return {a_ - d, a_ + d};
      }
      case Kind::ellipse:
        if ((center_ - xbar_).norm() < 1e-14 * b_) return {a_, b_};
        return radii_sampled(4096);
      case Kind::implicit:
        return radii_sampled(4096);
    }
    return {0, 0};
  }

  // Sampled radii over m boundary points (midpoint-offset parameters so
  // the extrema are never hit exactly; converges at O(1/m^2)).
  std::pair<double, double> radii_sampled(int m) const {
    double r1 = std::numeric_limits<double>::infinity();
    double r2 = 0.0;
    if (kind_ != Kind::implicit) {
      for (int j = 0; j < m; ++j) {
        const double t = 2.0 * M_PI * (j + 0.5) / m;
        const double r = (point_at(t) - xbar_).norm();
        r1 = std::min(r1, r);
        r2 = std::max(r2, r);
      }
      return {r1, r2};
    }
    const auto& poly = traced_boundary();
    const double L = poly.back().s;
    for (int j = 0; j < m; ++j) {
      const Vec p = project_implicit(polyline_point(poly, L * (j + 0.5) / m));
      const double r = (p - xbar_).norm();
      r1 = std::min(r1, r);
      r2 = std::max(r2, r);
    }
    return {r1, r2};
  }

  // The boundary points realizing R1 and R2. The outer normal must line
  // up with the radial direction from xbar (within 1e-6 rad), as the
  // touching-sphere argument requires.
  std::pair<BoundaryPoint, BoundaryPoint> touching_points() const {
    std::pair<BoundaryPoint, BoundaryPoint> out;
    switch (kind_) {
      case Kind::ball: {
        const double d = (center_ - xbar_).norm();
        if (d < 1e-14 * a_) {
          out.first = out.second = boundary_point_at(0.0);
        } else {
          const double t = std::atan2(xbar_[1] - center_[1], xbar_[0] - center_[0]);
          out.first = boundary_point_at(t);            // near side
          out.second = boundary_point_at(t + M_PI);    // far side
        }
        break;
      }
      case Kind::ellipse: {
        if ((center_ - xbar_).norm() < 1e-14 * b_) {
          out.first = boundary_point_at(0.0);
          out.second = boundary_point_at(M_PI / 2.0);
        } else {
          out.first = boundary_point_at(extremal_parameter(false));
          out.second = boundary_point_at(extremal_parameter(true));
        }
        break;
      }
      case Kind::implicit: {
        out = implicit_touching_points();
        break;
      }
    }
    check_touching_alignment(out.first);
    check_touching_alignment(out.second);
    return out;
  }

  // Closest boundary point (exact for balls, Newton for ellipses,
  // gradient-flow projection for implicit domains).
  Vec project_to_boundary(const Vec& p) const {
    switch (kind_) {
      case Kind::ball: {
        Vec d = p - center_;
        double dn = d.norm();
        if (dn < 1e-14 * a_) d = Vec(1.0, 0.0), dn = 1.0;
        return center_ + d * (a_ / dn);
      }
      case Kind::ellipse:
        return point_at(closest_ellipse_parameter(p));
      case Kind::implicit:
        return project_implicit(p);
    }
    return p;
  }

  double boundary_distance(const Vec& p) const {
    return (p - project_to_boundary(p)).norm();
  }

  // First boundary crossing along the segment p -> p + dir (|dir| = step
  // budget); returns the fraction in (0, 1] or nothing if the segment
  // stays on one side.
  std::optional<double> boundary_crossing(const Vec& p, const Vec& dir) const {
    const bool in0 = inside(p);
    if (inside(p + dir) == in0) return std::nullopt;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (inside(p + dir * mid) == in0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  const ScalarField2& phi() const {
    if (kind_ != Kind::implicit) throw geometry_error("phi: not an implicit domain");
    return phi_;
  }

private:
  Kind kind_ = Kind::ball;
  Vec center_{0.0, 0.0};
  double a_ = 1.0, b_ = 1.0;
  Vec xbar_{0.0, 0.0};
  BBox box_;
  ScalarField2 phi_;

  struct TracePoint {
    Vec p{0.0, 0.0};
    double s = 0.0;
  };
  mutable std::vector<TracePoint> trace_;  // lazily built for implicit kind
  mutable double phi_scale_ = -1.0;

  void require_xbar_inside() const {
    if (!inside(xbar_))
      throw geometry_error("domain: xbar must be strictly inside");
  }

  bool sign_change_on_box_border() const {
    const int k = 128;
    for (int j = 0; j < k; ++j) {
      const double f = static_cast<double>(j) / (k - 1);
      const double xs = box_.x0 + f * (box_.x1 - box_.x0);
      const double ys = box_.y0 + f * (box_.y1 - box_.y0);
      if (phi_(xs, box_.y0) > 0 || phi_(xs, box_.y1) > 0 ||
          phi_(box_.x0, ys) > 0 || phi_(box_.x1, ys) > 0)
        return true;
    }
    return false;
  }

  void check_touching_alignment(const BoundaryPoint& bp) const {
    const Vec radial = bp.location - xbar_;
    const double rn = radial.norm();
    if (rn <= 0.0)
      throw geometry_error("touching point coincides with xbar");
    const double cosang = radial.dot(bp.outer_normal) / rn;
    if (std::acos(std::clamp(cosang, -1.0, 1.0)) > 1e-6)
      throw geometry_error(
          "touching point: outer normal is not aligned with the radial "
          "direction from xbar");
  }

  // minimize (maximize) |e(t) - xbar| over the ellipse parameter
  double extremal_parameter(bool maximize) const {
    auto dist = [&](double t) {
      const double d = (point_at(t) - xbar_).norm();
      return maximize ? -d : d;
    };
    const int coarse = 4096;
    double best_t = 0.0, best = dist(0.0);
    for (int j = 1; j < coarse; ++j) {
      const double t = 2.0 * M_PI * j / coarse;
      const double v = dist(t);
      if (v < best) best = v, best_t = t;
    }
    double lo = best_t - 2.0 * M_PI / coarse;
    double hi = best_t + 2.0 * M_PI / coarse;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = dist(c), fd = dist(d);
    for (int it = 0; it < 120; ++it) {
      if (fc < fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - gr * (hi - lo);
        fc = dist(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + gr * (hi - lo);
        fd = dist(d);
      }
    }
    return 0.5 * (lo + hi);
  }

  // closest-point parameter on the ellipse via damped Newton with a
  // coarse-scan fallback
  double closest_ellipse_parameter(const Vec& p) const {
    auto d2 = [&](double t) { return (point_at(t) - p).norm2(); };
    const int coarse = 64;
    double t = 0.0, best = d2(0.0);
    for (int j = 1; j < coarse; ++j) {
      const double tt = 2.0 * M_PI * j / coarse;
      if (d2(tt) < best) best = d2(tt), t = tt;
    }
    for (int it = 0; it < 60; ++it) {
      const double ct = std::cos(t), st = std::sin(t);
      const Vec e(center_[0] + a_ * ct, center_[1] + b_ * st);
      const Vec ep(-a_ * st, b_ * ct);
      const Vec epp(-a_ * ct, -b_ * st);
      const Vec diff = e - p;
      const double g = diff.dot(ep);
      const double gp = ep.dot(ep) + diff.dot(epp);
      if (std::abs(gp) < 1e-300) break;
      const double step = g / gp;
      t -= std::clamp(step, -0.5, 0.5);
      if (std::abs(step) < 1e-15) break;
    }
    return t;
  }

  // --- implicit-domain machinery -------------------------------------

  // A healthy level set has |grad phi| ~ scale(phi)/diam near the
  // boundary; orders of magnitude below that is treated as degenerate.
  double grad_floor() const {
    if (phi_scale_ < 0.0) {
      double s = 0.0;
      const int k = 64;
      for (int i = 0; i <= k; ++i)
        for (int j = 0; j <= k; ++j) {
          const double x = box_.x0 + (box_.x1 - box_.x0) * i / k;
          const double y = box_.y0 + (box_.y1 - box_.y0) * j / k;
          s = std::max(s, std::abs(phi_(x, y)));
        }
      phi_scale_ = s;
    }
    return 1e-5 * phi_scale_ / std::max(box_.diag(), 1e-300) + 1e-300;
  }

  Vec phi_gradient(const Vec& p, double delta) const {
    const double gx = (phi_(p[0] + delta, p[1]) - phi_(p[0] - delta, p[1])) / (2 * delta);
    const double gy = (phi_(p[0], p[1] + delta) - phi_(p[0], p[1] - delta)) / (2 * delta);
    return Vec(gx, gy);
  }

  double fd_delta() const { return 1e-4 * std::max(1.0, box_.diag()); }

  Vec project_implicit(Vec p) const {
    const double delta = fd_delta();
    const double floor = grad_floor();
    for (int it = 0; it < 40; ++it) {
      const double v = phi_(p[0], p[1]);
      const Vec g = phi_gradient(p, delta);
      const double gn2 = g.norm2();
      if (gn2 < floor * floor)
        throw geometry_error("implicit domain: gradient of phi vanishes near the boundary");
      const Vec step = g * (v / gn2);
      p = p - step;
      if (step.norm() < 1e-13 * std::max(1.0, box_.diag())) break;
    }
    return p;
  }

  BoundaryPoint implicit_boundary_point(const Vec& p, double s) const {
    const double delta = fd_delta();
    const Vec g = phi_gradient(p, delta);
    const double gn = g.norm();
    if (gn < grad_floor())
      throw geometry_error("implicit domain: gradient of phi vanishes on the boundary");
    BoundaryPoint bp;
    bp.location = p;
    bp.arc_parameter = s;
    bp.outer_normal = g * (1.0 / gn);
    // curvature = div(grad phi / |grad phi|)
    const double pxx = (phi_(p[0] + delta, p[1]) - 2 * phi_(p[0], p[1]) +
                        phi_(p[0] - delta, p[1])) / (delta * delta);
    const double pyy = (phi_(p[0], p[1] + delta) - 2 * phi_(p[0], p[1]) +
                        phi_(p[0], p[1] - delta)) / (delta * delta);
    const double pxy = (phi_(p[0] + delta, p[1] + delta) - phi_(p[0] + delta, p[1] - delta) -
                        phi_(p[0] - delta, p[1] + delta) + phi_(p[0] - delta, p[1] - delta)) /
                       (4 * delta * delta);
    bp.curvature = (pxx * g[1] * g[1] - 2 * pxy * g[0] * g[1] + pyy * g[0] * g[0]) /
                   (gn * gn * gn);
    return bp;
  }

  // Predictor-corrector trace of {phi = 0}, closed into a polyline with
  // cumulative arclength.
  const std::vector<TracePoint>& traced_boundary() const {
    if (!trace_.empty()) return trace_;

    // seed: first crossing along +x from xbar
    const double reach = box_.diag();
    Vec seed = xbar_;
    {
      const int nprobe = 4096;
      bool found = false;
      Vec prev = xbar_;
      for (int j = 1; j <= nprobe; ++j) {
        const Vec q = xbar_ + Vec(reach * j / nprobe, 0.0);
        if (!inside(q)) {
          const auto frac = boundary_crossing(prev, q - prev);
          seed = prev + (q - prev) * frac.value_or(1.0);
          found = true;
          break;
        }
        prev = q;
      }
      if (!found)
        throw geometry_error("implicit domain: could not locate the boundary from xbar");
      seed = project_implicit(seed);
    }

    const double step = box_.diag() / 1024.0;
    const double delta = fd_delta();
    std::vector<TracePoint> poly;
    poly.push_back({seed, 0.0});
    Vec cur = seed;
    const size_t cap = 1u << 20;
    while (poly.size() < cap) {
      const Vec g = phi_gradient(cur, delta);
      const double gn = g.norm();
      if (gn < grad_floor())
        throw geometry_error("implicit domain: gradient of phi vanishes on the boundary");
      const Vec tangent(-g[1] / gn, g[0] / gn);  // counterclockwise
      Vec next = project_implicit(cur + tangent * step);
      const double ds = (next - cur).norm();
      poly.push_back({next, poly.back().s + ds});
      cur = next;
      if (poly.back().s > 4.0 * step && (cur - seed).norm() < step) break;
    }
    if (poly.size() >= cap)
      throw geometry_error("implicit domain: boundary trace did not close");
    // close the loop exactly
    const double closing = (seed - poly.back().p).norm();
    poly.push_back({seed, poly.back().s + closing});
    trace_ = std::move(poly);
    return trace_;
  }

  static Vec polyline_point(const std::vector<TracePoint>& poly, double s) {
    size_t lo = 0, hi = poly.size() - 1;
    while (lo + 1 < hi) {
      const size_t mid = (lo + hi) / 2;
      (poly[mid].s <= s ? lo : hi) = mid;
    }
    const double seg = poly[hi].s - poly[lo].s;
    const double f = seg > 0 ? (s - poly[lo].s) / seg : 0.0;
    return poly[lo].p + (poly[hi].p - poly[lo].p) * f;
  }

  std::pair<BoundaryPoint, BoundaryPoint> implicit_touching_points() const {
    const auto& poly = traced_boundary();
    const double L = poly.back().s;
    const int m = 16384;
    double s1 = 0.0, s2 = 0.0, d1 = std::numeric_limits<double>::infinity(), d2 = 0.0;
    for (int j = 0; j < m; ++j) {
      const double s = L * j / m;
      const Vec p = polyline_point(poly, s);
      const double d = (p - xbar_).norm();
      if (d < d1) d1 = d, s1 = s;
      if (d > d2) d2 = d, s2 = s;
    }
    auto refine = [&](double s0, bool maximize) {
      auto dist = [&](double s) {
        const Vec p = project_implicit(polyline_point(poly, s));
        const double d = (p - xbar_).norm();
        return maximize ? -d : d;
      };
      double lo = s0 - L / m, hi = s0 + L / m;
      const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
      double c = hi - gr * (hi - lo), dd = lo + gr * (hi - lo);
      double fc = dist(c), fd = dist(dd);
      for (int it = 0; it < 90; ++it) {
        if (fc < fd) {
          hi = dd;
          dd = c;
          fd = fc;
          c = hi - gr * (hi - lo);
          fc = dist(c);
        } else {
          lo = c;
          c = dd;
          fc = fd;
          dd = lo + gr * (hi - lo);
          fd = dist(dd);
        }
      }
      const double s = 0.5 * (lo + hi);
      const Vec p = project_implicit(polyline_point(poly, s));
      return implicit_boundary_point(p, std::fmod(s + L, L));
    };
    return {refine(s1, false), refine(s2, true)};
  }
};

}  // namespace nplap
