#pragma once

// Uniform Cartesian grid clipped to a Domain. Interior nodes carry the
// unknowns; exterior nodes within a thin band of the boundary are ghost
// nodes holding the Dirichlet datum evaluated at their boundary
// projection; everything else is dead (NaN, never read).
//
// The ghost band is wide enough (2.6 h) that the five-point stencil and
// any bilinear interpolation within distance h of an interior node only
// ever touches live nodes; this is asserted at construction.

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "nplap/core.hpp"
#include "nplap/geometry.hpp"

namespace nplap {

enum class NodeClass : std::uint8_t { dead = 0, ghost = 1, interior = 2 };

struct GridField {
  double h = 0.0;
  Vec origin{0.0, 0.0};  // location of node (0, 0)
  int nx = 0, ny = 0;
  std::vector<double> values;      // nx * ny, row-major in i
  std::vector<NodeClass> klass;
  ScalarField2 boundary_value;     // the Dirichlet datum g, when known
  std::vector<std::pair<int, Vec>> ghosts;  // ghost index -> its projection

  int idx(int i, int j) const { return j * nx + i; }
  Vec node(int i, int j) const {
    return Vec(origin[0] + i * h, origin[1] + j * h);
  }
  NodeClass node_class(int i, int j) const {
    return klass[static_cast<size_t>(idx(i, j))];
  }
  bool is_interior(int i, int j) const {
    return node_class(i, j) == NodeClass::interior;
  }
  bool is_boundary_adjacent(int i, int j) const {
    if (!is_interior(i, j)) return false;
    return !is_interior(i - 1, j) || !is_interior(i + 1, j) ||
           !is_interior(i, j - 1) || !is_interior(i, j + 1);
  }

  bool cell_live(int i, int j) const {
    return node_class(i, j) != NodeClass::dead &&
           node_class(i + 1, j) != NodeClass::dead &&
           node_class(i, j + 1) != NodeClass::dead &&
           node_class(i + 1, j + 1) != NodeClass::dead;
  }

  // Checked bilinear sample; throws when the containing cell touches a
  // dead node or falls off the grid.
  double sample(double x, double y) const {
    const double fx = (x - origin[0]) / h;
    const double fy = (y - origin[1]) / h;
    const int i = static_cast<int>(std::floor(fx));
    const int j = static_cast<int>(std::floor(fy));
    if (i < 0 || j < 0 || i + 1 >= nx || j + 1 >= ny || !cell_live(i, j))
      throw resolution_error("GridField::sample: point outside the live grid");
    const double ax = fx - i, ay = fy - j;
    const double* v = values.data();
    const int k = idx(i, j);
    const double v00 = v[k], v10 = v[k + 1], v01 = v[k + nx], v11 = v[k + nx + 1];
    return (1 - ay) * ((1 - ax) * v00 + ax * v10) +
           ay * ((1 - ax) * v01 + ax * v11);
  }

  long interior_count() const {
    long c = 0;
    for (auto k : klass)
      if (k == NodeClass::interior) ++c;
    return c;
  }
};

// Build the node classification for a domain and bake the Dirichlet
// datum into the ghost band. The grid is anchored at the domain center
// so symmetric domains get symmetric node sets.
inline GridField make_grid(const Domain& d, double h, const ScalarField2& g) {
  if (!(h > 0.0)) throw error("make_grid: h > 0 required");

  GridField f;
  f.h = h;
  f.boundary_value = g;

  const BBox box = d.bounding_box();
  const Vec c = d.center();
  const double pad = 4.0 * h;
  const int iw = static_cast<int>(
      std::ceil((std::max(box.x1 - c[0], c[0] - box.x0) + pad) / h));
  const int jw = static_cast<int>(
      std::ceil((std::max(box.y1 - c[1], c[1] - box.y0) + pad) / h));
  f.nx = 2 * iw + 1;
  f.ny = 2 * jw + 1;
  f.origin = Vec(c[0] - iw * h, c[1] - jw * h);

  const size_t n = static_cast<size_t>(f.nx) * f.ny;
  f.values.assign(n, std::numeric_limits<double>::quiet_NaN());
  f.klass.assign(n, NodeClass::dead);

  // pass 1: inside/outside
  for (int j = 0; j < f.ny; ++j)
    for (int i = 0; i < f.nx; ++i)
      if (d.inside(f.node(i, j)))
        f.klass[static_cast<size_t>(f.idx(i, j))] = NodeClass::interior;

  // pass 2: ghost band around the interior
  const double band = 2.6 * h;
  for (int j = 0; j < f.ny; ++j) {
    for (int i = 0; i < f.nx; ++i) {
      if (f.node_class(i, j) != NodeClass::dead) continue;
      bool near = false;
      for (int dj = -3; dj <= 3 && !near; ++dj)
        for (int di = -3; di <= 3 && !near; ++di) {
          const int ii = i + di, jj = j + dj;
          if (ii >= 0 && jj >= 0 && ii < f.nx && jj < f.ny &&
              f.node_class(ii, jj) == NodeClass::interior)
            near = true;
        }
      if (!near) continue;
      const Vec p = f.node(i, j);
      const Vec proj = d.project_to_boundary(p);
      if ((p - proj).norm() <= band) {
        f.klass[static_cast<size_t>(f.idx(i, j))] = NodeClass::ghost;
        f.values[static_cast<size_t>(f.idx(i, j))] = g(proj[0], proj[1]);
        f.ghosts.emplace_back(f.idx(i, j), proj);
      }
    }
  }

  // every interior node must be able to run the stencil and interpolate
  // at distance h in any direction without touching a dead node
  const double reach2 = (2.45 * h) * (2.45 * h);
  for (int j = 0; j < f.ny; ++j) {
    for (int i = 0; i < f.nx; ++i) {
      if (!f.is_interior(i, j)) continue;
      for (int dj = -2; dj <= 2; ++dj)
        for (int di = -2; di <= 2; ++di) {
          if ((di * di + dj * dj) * h * h > reach2) continue;
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= f.nx || jj >= f.ny ||
              f.node_class(ii, jj) == NodeClass::dead)
            throw geometry_error(
                "make_grid: interior node too close to a dead node; "
                "ghost band failed to cover the stencil reach");
        }
    }
  }
  return f;
}

}  // namespace nplap
