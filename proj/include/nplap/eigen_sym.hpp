#pragma once

// Eigenvalues of symmetric 2x2 / 3x3 matrices.
//
// 2x2 is the exact quadratic formula. 3x3 uses the trigonometric closed
// form for the characteristic cubic, with a cyclic Jacobi fallback when
// the cubic's discriminant is too close to zero for acos to be reliable
// (nearly repeated eigenvalues).

#include <algorithm>
#include <array>
#include <cmath>

#include "nplap/core.hpp"

namespace nplap {

namespace detail {

inline std::array<double, 2> eigenvalues_2x2(const SymMat& m) {
  const double a = m.at(0, 0), b = m.at(1, 1), c = m.at(0, 1);
  const double mean = 0.5 * (a + b);
  const double rad = std::hypot(0.5 * (a - b), c);
  return {mean - rad, mean + rad};
}

// Cyclic Jacobi for a 3x3 symmetric matrix; returns eigenvalues unsorted.
inline std::array<double, 3> jacobi_3x3(const SymMat& m) {
  double A[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) A[i][j] = m.at(i, j);

  for (int sweep = 0; sweep < 50; ++sweep) {
    double off = std::abs(A[0][1]) + std::abs(A[0][2]) + std::abs(A[1][2]);
    if (off == 0.0) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (A[p][q] == 0.0) continue;
        const double theta = 0.5 * (A[q][q] - A[p][p]) / A[p][q];
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double cs = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * cs;
        const double app = A[p][p], aqq = A[q][q], apq = A[p][q];
        A[p][p] = cs * cs * app - 2.0 * sn * cs * apq + sn * sn * aqq;
        A[q][q] = sn * sn * app + 2.0 * sn * cs * apq + cs * cs * aqq;
        A[p][q] = A[q][p] = 0.0;
        const int r = 3 - p - q;
        const double apr = A[p][r], aqr = A[q][r];
        A[p][r] = A[r][p] = cs * apr - sn * aqr;
        A[q][r] = A[r][q] = sn * apr + cs * aqr;
      }
    }
  }
  return {A[0][0], A[1][1], A[2][2]};
}

inline std::array<double, 3> eigenvalues_3x3(const SymMat& m) {
  const double a00 = m.at(0, 0), a11 = m.at(1, 1), a22 = m.at(2, 2);
  const double a01 = m.at(0, 1), a02 = m.at(0, 2), a12 = m.at(1, 2);

  const double p1 = a01 * a01 + a02 * a02 + a12 * a12;
  if (p1 == 0.0) {
    return {a00, a11, a22};  // already diagonal
  }

  const double q = (a00 + a11 + a22) / 3.0;
  const double p2 = (a00 - q) * (a00 - q) + (a11 - q) * (a11 - q) +
                    (a22 - q) * (a22 - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);

  // B = (A - q I) / p, r = det(B) / 2
  const double b00 = (a00 - q) / p, b11 = (a11 - q) / p, b22 = (a22 - q) / p;
  const double b01 = a01 / p, b02 = a02 / p, b12 = a12 / p;
  double r = 0.5 * (b00 * (b11 * b22 - b12 * b12) -
                    b01 * (b01 * b22 - b12 * b02) +
                    b02 * (b01 * b12 - b11 * b02));

  // acos loses accuracy when the cubic has a (near-)double root.
  if (std::abs(r) > 1.0 - 1e-8) return jacobi_3x3(m);
  const double phi = std::acos(r) / 3.0;

  const double e1 = q + 2.0 * p * std::cos(phi);
  const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
  const double e2 = 3.0 * q - e1 - e3;
  return {e1, e2, e3};
}

}  // namespace detail

// Ascending eigenvalues of a symmetric 2x2 or 3x3 matrix.
inline std::array<double, 3> hessian_eigenvalues(const SymMat& m) {
  std::array<double, 3> ev{0.0, 0.0, 0.0};
  if (m.dim == 2) {
    auto e = detail::eigenvalues_2x2(m);
    ev[0] = e[0];
    ev[1] = e[1];
  } else {
    ev = detail::eigenvalues_3x3(m);
    std::sort(ev.begin(), ev.end());
  }
  return ev;
}

}  // namespace nplap
