#pragma once

// The Neumann datum q: a closed form r -> q(r), a sampled table on an
// interval (linear interpolation), or the curvature-dependent form
// (r, h) -> q(r, h) of the p = 1 overdetermined problem.

#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "nplap/core.hpp"

namespace nplap {

class QProfile {
public:
  enum class Form { closed, table, curvature };

  static QProfile closed_form(std::function<double(double)> q,
                              bool continuous = true) {
    QProfile out;
    out.form_ = Form::closed;
    out.q1_ = std::move(q);
    out.continuous_ = continuous;
    return out;
  }

  // samples (r, q) strictly increasing in r; evaluation is linear
  // interpolation and is undefined outside the sampled interval
  static QProfile table(std::vector<std::pair<double, double>> samples) {
    if (samples.size() < 2) throw profile_error("QProfile: table needs >= 2 samples");
    for (size_t k = 0; k + 1 < samples.size(); ++k)
      if (!(samples[k].first < samples[k + 1].first))
        throw profile_error("QProfile: table radii must be strictly increasing");
    QProfile out;
    out.form_ = Form::table;
    out.samples_ = std::move(samples);
    out.continuous_ = true;
    return out;
  }

  static QProfile curvature_form(std::function<double(double, double)> q) {
    QProfile out;
    out.form_ = Form::curvature;
    out.q2_ = std::move(q);
    out.continuous_ = true;
    return out;
  }

  Form form() const { return form_; }
  bool is_curvature_form() const { return form_ == Form::curvature; }
  bool continuity_declared() const { return continuous_; }

  double operator()(double r) const {
    double v = 0.0;
    switch (form_) {
      case Form::closed:
        v = q1_(r);
        break;
      case Form::table: {
        if (r < samples_.front().first - 1e-12 ||
            r > samples_.back().first + 1e-12)
          throw profile_error("QProfile: radius outside the sampled interval");
        size_t lo = 0, hi = samples_.size() - 1;
        while (lo + 1 < hi) {
          const size_t mid = (lo + hi) / 2;
          (samples_[mid].first <= r ? lo : hi) = mid;
        }
        const auto& [r0, q0] = samples_[lo];
        const auto& [r1, q1] = samples_[hi];
        const double f = std::clamp((r - r0) / (r1 - r0), 0.0, 1.0);
        v = q0 + f * (q1 - q0);
        break;
      }
      case Form::curvature:
        throw profile_error("QProfile: curvature form needs q(r, h)");
    }
    if (!std::isfinite(v)) throw profile_error("QProfile: non-finite value");
    return v;
  }

  double operator()(double r, double hcurv) const {
    if (form_ != Form::curvature)
      throw profile_error("QProfile: not a curvature form");
    const double v = q2_(r, hcurv);
    if (!std::isfinite(v)) throw profile_error("QProfile: non-finite value");
    return v;
  }

  const std::vector<std::pair<double, double>>& samples() const {
    return samples_;
  }

private:
  Form form_ = Form::closed;
  std::function<double(double)> q1_;
  std::function<double(double, double)> q2_;
  std::vector<std::pair<double, double>> samples_;
  bool continuous_ = true;
};

}  // namespace nplap
