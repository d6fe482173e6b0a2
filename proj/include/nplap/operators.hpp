#pragma once

// Pointwise evaluation of the normalized p-Laplacian, its upper/lower
// envelopes at critical points, and the classical p-Laplacian, on
// second-order jets, for p in [1, inf] and dimensions 2 and 3.
//
// Away from critical points, for finite p,
//
//   D_p^N u = (tr D^2u + (p - 2) D_inf^N u) / p,
//   D_inf^N u = <D^2u Du, Du> / |Du|^2,
//
// which also exhibits the convex combination
//   D_p^N = ((p-1)/p) D_inf^N + (1/p) D_1^N.
//
// At a critical point the envelopes are defined through the ordered
// Hessian eigenvalues; the two textbook display forms (lambda-sum and
// lambda_min/lambda_max + trace) are implemented side by side and must
// agree.

#include <cmath>

#include "nplap/core.hpp"
#include "nplap/eigen_sym.hpp"

namespace nplap {

// The constant c_p = p / (p + n - 2), with c_inf = 1.
inline double c_p(const PValue& p, int n) {
  if (n < 2) throw error("c_p: dimension must satisfy n >= 2");
  if (p.is_infinity()) return 1.0;
  return p.value() / (p.value() + static_cast<double>(n) - 2.0);
}

// A gradient is treated as zero below this scale-relative threshold.
inline double critical_gradient_threshold(const SymMat& hessian) {
  return 1e-12 * std::max(1.0, hessian.frobenius());
}

inline bool is_critical(const Jet& j) {
  return j.gradient.norm() < critical_gradient_threshold(j.hessian);
}

namespace detail {

// lambda-sum display form of the envelope operators at a critical point.
// ev must be ascending; n = jet dimension; upper=false gives the lower one.
inline double envelope_lambda_sum(const PValue& p, const double* ev, int n,
                                  bool upper) {
  const double lam_min = ev[0];
  const double lam_max = ev[n - 1];
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += ev[i];

  if (p.is_infinity()) return upper ? lam_max : lam_min;

  const double pv = p.value();
  const bool low_branch = pv <= 2.0;  // p in [1,2]
  // upper on [1,2] and lower on (2,inf) single out lambda_min; the other
  // two cases single out lambda_max.
  const double lam = (low_branch == upper) ? lam_min : lam_max;
  return ((pv - 1.0) * lam + (sum - lam)) / pv;
}

// Equivalent display form: ((p-2) lambda_sel + trace) / p. Continuous
// across p = 2, hence the implementation path.
inline double envelope_equivalent(const PValue& p, const double* ev, int n,
                                  bool upper) {
  const double lam_min = ev[0];
  const double lam_max = ev[n - 1];
  double tr = 0.0;
  for (int i = 0; i < n; ++i) tr += ev[i];

  if (p.is_infinity()) return upper ? lam_max : lam_min;

  const double pv = p.value();
  const bool low_branch = pv <= 2.0;
  const double lam = (low_branch == upper) ? lam_min : lam_max;
  return ((pv - 2.0) * lam + tr) / pv;
}

// Second derivative in the (normalized) gradient direction.
inline double grad_second_derivative(const Jet& j) {
  return j.hessian.quad(j.gradient) / j.gradient.norm2();
}

}  // namespace detail

// Normalized p-Laplacian on a jet with nonvanishing gradient.
inline double eval_normalized(const PValue& p, const Jet& j) {
  if (is_critical(j))
    throw critical_point_error(
        "eval_normalized: undefined at critical point (|Du| ~ 0); "
        "use eval_upper/eval_lower");
  const double dinf = detail::grad_second_derivative(j);
  if (p.is_infinity()) return dinf;
  const double pv = p.value();
  return (j.hessian.trace() + (pv - 2.0) * dinf) / pv;
}

// Upper envelope D_p^+: equals eval_normalized off critical points,
// eigenvalue formula at them.
inline double eval_upper(const PValue& p, const Jet& j) {
  if (!is_critical(j)) return eval_normalized(p, j);
  const auto ev = hessian_eigenvalues(j.hessian);
  return detail::envelope_equivalent(p, ev.data(), j.dim(), true);
}

// Lower envelope D_p^-.
inline double eval_lower(const PValue& p, const Jet& j) {
  if (!is_critical(j)) return eval_normalized(p, j);
  const auto ev = hessian_eigenvalues(j.hessian);
  return detail::envelope_equivalent(p, ev.data(), j.dim(), false);
}

// Classical p-Laplacian div(|Du|^{p-2} Du) = |Du|^{p-2}(tr + (p-2) D_inf);
// for p = inf the un-normalized <D^2u Du, Du>.
inline double eval_classical(const PValue& p, const Jet& j) {
  if (p.is_infinity()) return j.hessian.quad(j.gradient);

  const double pv = p.value();
  if (is_critical(j)) {
    // |Du|^{p-2} blows up for p < 2; p = 2 is the plain Laplacian; the
    // factor kills the bracket for p > 2.
    if (pv < 2.0)
      throw error("eval_classical: undefined at critical point for p < 2");
    return pv == 2.0 ? j.hessian.trace() : 0.0;
  }
  const double dinf = detail::grad_second_derivative(j);
  const double gn = j.gradient.norm();
  return std::pow(gn, pv - 2.0) * (j.hessian.trace() + (pv - 2.0) * dinf);
}

}  // namespace nplap
