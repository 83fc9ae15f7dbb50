#pragma once

// Reference target functions (products, sine of products/sums, optionally
// localized by a smooth compactly supported bump) and grid error measurement.

#include <cmath>
#include <optional>
#include <vector>

#include "relucalc/bounds.hpp"
#include "relucalc/core.hpp"
#include "relucalc/sampling.hpp"

namespace relucalc {

// Smooth one-sided ramp: 0 for x <= 0, 1 for x >= delta, strictly between on
// (0, delta); |derivative| <= 48/delta.
inline double smooth_ramp(double x, double delta) {
  if (x <= 0.0) return 0.0;
  if (x >= delta) return 1.0;
  const double fx = std::exp(-delta / x);
  const double fd = std::exp(-delta / (delta - x));
  return fx / (fx + fd);
}

// Smooth plateau: 1 on [a,b], 0 outside (a-delta, b+delta).
inline double smooth_plateau(double x, double a, double b, double delta) {
  return (x < a) ? smooth_ramp(x - a + delta, delta) : smooth_ramp(b - x + delta, delta);
}

struct TargetFunction {
  TargetSpec spec;
  std::optional<double> bump_delta;  // enables smooth localization outside [a,b]^d
};

inline double eval_target(const TargetFunction& target, const std::vector<double>& x) {
  const TargetSpec& s = target.spec;
  if (static_cast<int64_t>(x.size()) != s.d) throw shape_error("eval_target: dimension mismatch");
  double base = 0.0;
  switch (s.family) {
    case TargetFamily::product: {
      double prod = 1.0;
      for (double v : x) prod *= v;
      base = s.gamma * std::pow(s.beta, static_cast<double>(s.d)) * prod;
      break;
    }
    case TargetFamily::sin_product: {
      double prod = 1.0;
      for (double v : x) prod *= v;
      base = s.kappa * std::sin(s.gamma * std::pow(s.beta, static_cast<double>(s.d)) * prod + s.phi);
      break;
    }
    case TargetFamily::sin_sum: {
      double sum = 0.0;
      for (double v : x) sum += v;
      base = s.kappa * std::sin(s.gamma * std::ldexp(1.0, static_cast<int>(s.d)) * sum + s.phi);
      break;
    }
    case TargetFamily::periodic_generic:
      base = s.kappa * std::sin(s.gamma * s.beta * x[0] + s.phi);
      break;
    case TargetFamily::identity:
      base = x[0];
      break;
  }
  if (target.bump_delta) {
    double mult = 1.0;
    for (double v : x) mult *= smooth_plateau(v, s.a, s.b, *target.bump_delta);
    base *= mult;
  }
  return base;
}

// Max of |realize - target| over a seeded low-discrepancy sample of
// [a,b]^d, plus every box corner for d <= 12. The identity family compares
// the first output against the first coordinate.
inline double max_error_on_box(const Network& net, const TargetFunction& target, double a, double b,
                               int64_t samples, uint64_t seed = 0) {
  const int64_t d = net.in_dim();
  if (d != target.spec.d) throw shape_error("max_error_on_box: dimension mismatch");
  if (samples < 1) throw domain_error("max_error_on_box: need at least one sample");

  const auto chunk = [&](int64_t lo, int64_t hi) {
    constexpr int64_t kBlock = 512;
    std::vector<double> xs(static_cast<size_t>(kBlock * d));
    std::vector<double> x(static_cast<size_t>(d));
    double worst = 0.0;
    for (int64_t base = lo; base < hi; base += kBlock) {
      const int64_t count = std::min(kBlock, hi - base);
      for (int64_t i = 0; i < count; ++i)
        halton_point(static_cast<uint64_t>(base + i), seed, d, a, b, xs.data() + i * d);
      const std::vector<double> ys = realize_batch(net, xs, count);
      const int64_t od = net.out_dim();
      for (int64_t i = 0; i < count; ++i) {
        x.assign(xs.begin() + i * d, xs.begin() + (i + 1) * d);
        worst = std::max(worst, std::abs(ys[static_cast<size_t>(i * od)] - eval_target(target, x)));
      }
    }
    return worst;
  };
  double worst = parallel_max(samples, chunk);

  if (d <= 12) {
    std::vector<double> x(static_cast<size_t>(d));
    const int64_t corners = static_cast<int64_t>(1) << d;
    for (int64_t mask = 0; mask < corners; ++mask) {
      for (int64_t j = 0; j < d; ++j) x[static_cast<size_t>(j)] = (mask >> j) & 1 ? b : a;
      worst = std::max(worst, std::abs(realize(net, x)[0] - eval_target(target, x)));
    }
  }
  return worst;
}

// Sampled sup-norm of the realization against the structural growth bound
// in_dim * (param * max{size,1})^length * max{|a|,|b|,1}.
struct GrowthCheck {
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
};

inline GrowthCheck growth_bound_check(const Network& net, double a, double b, int64_t samples,
                                      uint64_t seed = 0) {
  const Metrics m = metrics(net);
  const int64_t d = net.in_dim();
  const auto chunk = [&](int64_t lo, int64_t hi) {
    std::vector<double> x(static_cast<size_t>(d));
    double worst = 0.0;
    for (int64_t i = lo; i < hi; ++i) {
      halton_point(static_cast<uint64_t>(i), seed, d, a, b, x.data());
      for (double y : realize(net, x)) worst = std::max(worst, std::abs(y));
    }
    return worst;
  };
  GrowthCheck result;
  result.measured = parallel_max(samples, chunk);
  result.bound = static_cast<double>(d) *
                 std::pow(static_cast<double>(m.param_count) * std::max(m.size_norm, 1.0),
                          static_cast<double>(m.length)) *
                 std::max({std::abs(a), std::abs(b), 1.0});
  result.pass = result.measured <= result.bound + kBoundSlack;
  return result;
}

}  // namespace relucalc
