#pragma once

// Lower-bound side: the affine-piece bound along lines, the product
// approximation lower bound, oscillation witness sequences, and the
// shallow-incapacity certificate.

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "relucalc/bounds.hpp"
#include "relucalc/core.hpp"
#include "relucalc/targets.hpp"
#include "relucalc/trace.hpp"

namespace relucalc {

// Upper bound (P / max{1,H})^max{1,H} on the number of affine pieces any
// network with P parameters and H hidden layers can produce along a line.
inline double piece_bound(int64_t param_count, int64_t hidden_length) {
  const double h = static_cast<double>(std::max<int64_t>(1, hidden_length));
  return std::pow(static_cast<double>(param_count) / h, h);
}

// Lower bound ((2^d - eps) / (2d))^(1/L) on param * max{size,1} for any
// network of length <= L approximating the d-fold product within eps on a
// box with max{|a|,|b|} >= 2.
inline double product_lower_bound(int64_t d, int64_t L, double eps) {
  if (d < 1 || L < 1) throw domain_error("product_lower_bound: d and L must be >= 1");
  const double pow2d = std::ldexp(1.0, static_cast<int>(d));
  if (!(eps > 0.0 && eps < pow2d)) throw domain_error("product_lower_bound: need eps in (0, 2^d)");
  return std::pow((pow2d - eps) / (2.0 * static_cast<double>(d)),
                  1.0 / static_cast<double>(L));
}

// Equally spaced points where the target alternates between -kappa and
// +kappa; any approximator within eps < kappa of the target needs at least
// 2^d affine pieces along this line.
struct WitnessSequence {
  int64_t d = 0;
  std::vector<std::vector<double>> points;
  std::vector<double> values;
  std::vector<double> step;  // v_k - v_{k-1}, constant
  int64_t count = 0;         // 1, 3, or 2^(d+1)+1
  double kappa = 0.0;
  TargetFunction target;
};

namespace detail {

inline int64_t witness_count(int64_t d) {
  if (d == 1) return 1;
  if (d == 2) return 3;
  return (static_cast<int64_t>(1) << (d + 1)) + 1;
}

// Smallest phase alpha in [start, start + span) with |sin(A*alpha + phi)| = 1,
// i.e. alpha = (pi/2 - phi + m*pi)/A for the unique integer m landing inside.
inline double align_phase(double A, double phi, double start, double span) {
  const double pi = std::numbers::pi;
  const double base = pi / 2.0 - phi;
  const double m = (A > 0.0) ? std::ceil((start * A - base) / pi)
                             : std::floor((start * A - base) / pi);
  double alpha = (base + m * pi) / A;
  const double stride = pi / std::abs(A);
  // Guard against rounding at the interval ends.
  while (alpha < start) alpha += stride;
  while (alpha >= start + span) alpha -= stride;
  if (alpha < start) alpha = start;
  return alpha;
}

}  // namespace detail

// Witnesses for kappa*sin(gamma*beta^d*prod(x) + phi) on [a,b]^d with
// b - a >= 2*pi/(gamma*beta): the points advance along the first coordinate
// with all other coordinates pinned at a constant c with beta*|c| >= 3.
inline WitnessSequence oscillation_witnesses_product(const TargetSpec& spec) {
  if (spec.family != TargetFamily::sin_product)
    throw contract_error("oscillation_witnesses_product: target family must be sin-product");
  spec.validate();
  const double pi = std::numbers::pi;
  if (spec.b - spec.a < 2.0 * pi / (spec.gamma * spec.beta) - 1e-12)
    throw contract_error("oscillation_witnesses_product: need b - a >= 2*pi/(gamma*beta)");
  const int64_t d = spec.d;
  WitnessSequence ws;
  ws.d = d;
  ws.kappa = spec.kappa;
  ws.count = detail::witness_count(d);
  ws.target = TargetFunction{spec, std::nullopt};

  const double c = (std::abs(spec.beta * spec.a) >= 3.0) ? spec.a : 3.0 / spec.beta;
  const double beta_d = std::pow(spec.beta, static_cast<double>(d));
  const double cpow = std::pow(std::abs(c), static_cast<double>(d - 1));
  const double csigned = std::pow(c, static_cast<double>(d - 1));
  const double stride = pi / (spec.gamma * beta_d * cpow);
  const double A = spec.gamma * beta_d * csigned;
  const double alpha = detail::align_phase(A, spec.phi, spec.a, stride);

  ws.step.assign(static_cast<size_t>(d), 0.0);
  ws.step[0] = stride;
  for (int64_t k = 0; k < ws.count; ++k) {
    std::vector<double> v(static_cast<size_t>(d), c);
    v[0] = alpha + static_cast<double>(k) * stride;
    ws.values.push_back(eval_target(ws.target, v));
    ws.points.push_back(std::move(v));
  }
  return ws;
}

// Witnesses for kappa*sin(gamma*2^d*sum(x) + phi) on [a,b]^d with
// b - a >= pi/gamma: the points advance along the diagonal.
inline WitnessSequence oscillation_witnesses_sum(const TargetSpec& spec) {
  if (spec.family != TargetFamily::sin_sum)
    throw contract_error("oscillation_witnesses_sum: target family must be sin-sum");
  spec.validate();
  const double pi = std::numbers::pi;
  if (spec.b - spec.a < pi / spec.gamma - 1e-12)
    throw contract_error("oscillation_witnesses_sum: need b - a >= pi/gamma");
  const int64_t d = spec.d;
  WitnessSequence ws;
  ws.d = d;
  ws.kappa = spec.kappa;
  ws.count = detail::witness_count(d);
  ws.target = TargetFunction{spec, std::nullopt};

  const double pow2d = std::ldexp(1.0, static_cast<int>(d));
  const double stride = pi / (spec.gamma * pow2d * static_cast<double>(d));
  const double A = spec.gamma * pow2d * static_cast<double>(d);
  const double alpha = detail::align_phase(A, spec.phi, spec.a, stride);

  ws.step.assign(static_cast<size_t>(d), stride);
  for (int64_t k = 0; k < ws.count; ++k) {
    const double coord = alpha + static_cast<double>(k) * stride;
    std::vector<double> v(static_cast<size_t>(d), coord);
    ws.values.push_back(eval_target(ws.target, v));
    ws.points.push_back(std::move(v));
  }
  return ws;
}

// Outcome of testing a network against a witness sequence: the piece count
// along the witness line, the 2^d pieces the target demands, and (when the
// network falls short) a concrete point where it misses by more than eps.
struct IncapacityCertificate {
  int64_t pieces = 0;
  int64_t needed = 0;
  bool incapable = false;
  std::optional<std::vector<double>> violating_point;
  std::optional<double> error_at_point;
};

inline IncapacityCertificate shallow_incapacity_certificate(const Network& net,
                                                            const WitnessSequence& ws, double eps) {
  if (ws.d < 3)
    throw domain_error("shallow_incapacity_certificate: d >= 3 required");
  if (net.out_dim() != 1) throw shape_error("shallow_incapacity_certificate: scalar output required");
  if (!(eps > 0.0 && eps < ws.kappa))
    throw contract_error("shallow_incapacity_certificate: need eps in (0,kappa)");

  const std::vector<double>& p = ws.points.front();
  const std::vector<double>& q = ws.points.back();
  const PwlTrace trace = exact_line_trace(net, p, q);

  IncapacityCertificate cert;
  cert.pieces = count_pieces(trace);
  cert.needed = static_cast<int64_t>(1) << ws.d;
  cert.incapable = cert.pieces < cert.needed;
  if (!cert.incapable) return cert;

  const auto check = [&](const std::vector<double>& x) -> std::optional<double> {
    const double err = std::abs(realize(net, x)[0] - eval_target(ws.target, x));
    if (err > eps) return err;
    return std::nullopt;
  };
  // Witness parameters along the trace segment.
  const double denom = static_cast<double>(ws.count - 1);
  const auto t_of = [&](int64_t k) { return static_cast<double>(k) / denom; };

  // First look for a witness triple inside a single affine piece: an affine
  // function tracking two alternating values must miss the third.
  for (int64_t k = 1; k + 1 < ws.count; ++k) {
    const double ta = t_of(k - 1), tb = t_of(k + 1);
    bool inside = false;
    for (size_t i = 0; i + 1 < trace.breakpoints.size(); ++i)
      if (trace.breakpoints[i] <= ta + 1e-15 && tb <= trace.breakpoints[i + 1] + 1e-15) {
        inside = true;
        break;
      }
    if (!inside) continue;
    for (int64_t j = k - 1; j <= k + 1; ++j)
      if (auto err = check(ws.points[static_cast<size_t>(j)])) {
        cert.violating_point = ws.points[static_cast<size_t>(j)];
        cert.error_at_point = *err;
        return cert;
      }
  }
  // Fallback: scan every witness point, then the midpoints between them.
  for (const std::vector<double>& v : ws.points)
    if (auto err = check(v)) {
      cert.violating_point = v;
      cert.error_at_point = *err;
      return cert;
    }
  for (int64_t k = 0; k + 1 < ws.count; ++k) {
    std::vector<double> mid(static_cast<size_t>(ws.d));
    for (int64_t j = 0; j < ws.d; ++j)
      mid[static_cast<size_t>(j)] = 0.5 * (ws.points[static_cast<size_t>(k)][static_cast<size_t>(j)] +
                                           ws.points[static_cast<size_t>(k + 1)][static_cast<size_t>(j)]);
    if (auto err = check(mid)) {
      cert.violating_point = std::move(mid);
      cert.error_at_point = *err;
      return cert;
    }
  }
  return cert;
}

}  // namespace relucalc
