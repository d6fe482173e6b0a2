#pragma once

// Shared generators for the test suites: random jets, random rotations,
// and finite-difference oracles kept independent of the library's own
// evaluation paths.

#include <cmath>
#include <random>

#include "nplap/core.hpp"

namespace testutil {

inline nplap::SymMat random_sym(std::mt19937& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  nplap::SymMat h;
  if (n == 2) {
    h = nplap::SymMat(u(rng), u(rng), u(rng));
  } else {
    h = nplap::SymMat(u(rng), u(rng), u(rng), u(rng), u(rng), u(rng));
  }
  return h;
}

inline nplap::Vec random_unit(std::mt19937& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  nplap::Vec v = nplap::Vec::zero(n);
  double nn = 0.0;
  do {
    for (int i = 0; i < n; ++i) v[i] = g(rng);
    nn = v.norm();
  } while (nn < 1e-6);
  return v * (1.0 / nn);
}

inline nplap::Jet random_jet(std::mt19937& rng, int n, double gmin,
                             double gmax) {
  std::uniform_real_distribution<double> mag(std::log(gmin), std::log(gmax));
  const nplap::Vec g = random_unit(rng, n) * std::exp(mag(rng));
  return nplap::Jet(g, random_sym(rng, n, 2.0));
}

// Random rotation matrix, 2-D by angle, 3-D by quaternion.
struct Rotation {
  int n;
  double m[3][3];

  nplap::Vec apply(const nplap::Vec& v) const {
    nplap::Vec r = nplap::Vec::zero(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r[i] += m[i][j] * v[j];
    return r;
  }
  nplap::SymMat conjugate(const nplap::SymMat& h) const {
    nplap::SymMat r;
    r.dim = n;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) s += m[i][a] * h.at(a, b) * m[j][b];
        r.set(i, j, s);
      }
    return r;
  }
};

inline Rotation random_rotation(std::mt19937& rng, int n) {
  Rotation rot{};
  rot.n = n;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (n == 2) {
    const double t = 2.0 * M_PI * u(rng);
    rot.m[0][0] = std::cos(t);
    rot.m[0][1] = -std::sin(t);
    rot.m[1][0] = std::sin(t);
    rot.m[1][1] = std::cos(t);
  } else {
    std::normal_distribution<double> g(0.0, 1.0);
    double q[4], nn = 0.0;
    for (double& qi : q) {
      qi = g(rng);
      nn += qi * qi;
    }
    nn = std::sqrt(nn);
    for (double& qi : q) qi /= nn;
    const double w = q[0], x = q[1], y = q[2], z = q[3];
    rot.m[0][0] = 1 - 2 * (y * y + z * z);
    rot.m[0][1] = 2 * (x * y - w * z);
    rot.m[0][2] = 2 * (x * z + w * y);
    rot.m[1][0] = 2 * (x * y + w * z);
    rot.m[1][1] = 1 - 2 * (x * x + z * z);
    rot.m[1][2] = 2 * (y * z - w * x);
    rot.m[2][0] = 2 * (x * z - w * y);
    rot.m[2][1] = 2 * (y * z + w * x);
    rot.m[2][2] = 1 - 2 * (x * x + y * y);
  }
  return rot;
}

// det(H - lambda I): residual oracle for eigenvalue checks.
inline double char_poly(const nplap::SymMat& h, double lam) {
  if (h.dim == 2) {
    return (h.at(0, 0) - lam) * (h.at(1, 1) - lam) - h.at(0, 1) * h.at(0, 1);
  }
  const double a = h.at(0, 0) - lam, b = h.at(1, 1) - lam, c = h.at(2, 2) - lam;
  const double d = h.at(0, 1), e = h.at(0, 2), f = h.at(1, 2);
  return a * (b * c - f * f) - d * (d * c - f * e) + e * (d * f - b * e);
}

// Direct evaluation of div(|Du|^{p-2} Du) by central differences of the
// flux, with the exact gradient supplied by the caller. Independent of
// the jet-based evaluation path in the library.
template <class GradFn>
double classical_divergence_fd(const GradFn& grad, double p, nplap::Vec x,
                               double step = 1e-5) {
  auto flux = [&](const nplap::Vec& y, int comp) {
    const nplap::Vec g = grad(y);
    return std::pow(g.norm(), p - 2.0) * g[comp];
  };
  double div = 0.0;
  for (int i = 0; i < x.dim; ++i) {
    nplap::Vec xp = x, xm = x;
    xp[i] += step;
    xm[i] -= step;
    div += (flux(xp, i) - flux(xm, i)) / (2.0 * step);
  }
  return div;
}

}  // namespace testutil
