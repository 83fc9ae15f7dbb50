#pragma once

// One-dimensional scaling networks and the parameter-size trade-off
// transforms (output downscaling, size halving/quartering, depth extension).

#include <cmath>
#include <string>
#include <vector>

#include "relucalc/bounds.hpp"
#include "relucalc/calculus.hpp"
#include "relucalc/core.hpp"

namespace relucalc {

namespace detail {

// Chain of width-w two-channel stages realizing x -> (prod of factors) * x.
// Stage k applies factor f_k once; each channel pair carries (x)+ and (-x)+.
// dims = (1, 2w, ..., 2w, 1) with n interior blocks.
inline Network stage_scaling_net(const std::vector<double>& factors, int64_t w) {
  const int64_t n = static_cast<int64_t>(factors.size());
  if (n < 1 || w < 1) throw domain_error("stage_scaling_net: need >= 1 stage and width >= 1");
  Network net;
  Layer first;
  first.weights = Matrix(2 * w, 1);
  first.bias.assign(static_cast<size_t>(2 * w), 0.0);
  for (int64_t i = 0; i < w; ++i) {
    first.weights(2 * i, 0) = 1.0;
    first.weights(2 * i + 1, 0) = -1.0;
  }
  net.layers.push_back(std::move(first));
  for (int64_t k = 1; k < n; ++k) {
    // Interior map: y = f_k * (sum of (+) channels - sum of (-) channels),
    // re-expanded into the two-channel representation.
    Layer mid;
    mid.weights = Matrix(2 * w, 2 * w);
    mid.bias.assign(static_cast<size_t>(2 * w), 0.0);
    const double f = factors[static_cast<size_t>(k - 1)];
    for (int64_t i = 0; i < w; ++i)
      for (int64_t j = 0; j < w; ++j) {
        mid.weights(2 * i, 2 * j) = f;
        mid.weights(2 * i, 2 * j + 1) = -f;
        mid.weights(2 * i + 1, 2 * j) = -f;
        mid.weights(2 * i + 1, 2 * j + 1) = f;
      }
    net.layers.push_back(std::move(mid));
  }
  Layer last;
  last.weights = Matrix(1, 2 * w);
  last.bias.assign(1, 0.0);
  const double f = factors[static_cast<size_t>(n - 1)];
  for (int64_t j = 0; j < w; ++j) {
    last.weights(0, 2 * j) = f;
    last.weights(0, 2 * j + 1) = -f;
  }
  net.layers.push_back(std::move(last));
  return net;
}

// Factors for beta * x over n stages with every factor bounded by
// max(2, |beta|^(1/n)): powers of two first, one exact residual, padding 1s.
// The real product of the factors equals beta exactly, and because all but
// one factor are powers of two the realization computes fl(beta * x).
inline std::vector<double> pow2_split_factors(double beta, int64_t n) {
  std::vector<double> factors(static_cast<size_t>(n), 1.0);
  const double mag = std::abs(beta);
  int64_t doublings = 0;
  double pow2 = 1.0;
  while (pow2 * 2.0 <= mag && doublings < n - 1) {
    pow2 *= 2.0;
    ++doublings;
  }
  for (int64_t k = 0; k < doublings; ++k) factors[static_cast<size_t>(k)] = 2.0;
  factors[static_cast<size_t>(doublings)] = beta / pow2;  // exact: pow2 is a power of two
  return factors;
}

}  // namespace detail

// Realizes x -> (w*beta)^n * x with dims (1, 2w, ..., 2w, 1).
inline Construction scaling_net(double beta, int64_t w, int64_t n) {
  if (beta <= 0.0) throw domain_error("scaling_net: beta must be > 0");
  if (w < 1 || n < 1) throw domain_error("scaling_net: width and depth must be >= 1");
  Network net = detail::stage_scaling_net(std::vector<double>(static_cast<size_t>(n), beta), w);
  const double nn = static_cast<double>(n), ww = static_cast<double>(w);
  BoundReport report = detail::make_report(
      "scaling", net, (4 * nn - 4) * ww * ww + (2 * nn + 4) * ww + 1,
      "(4n-4)w^2+(2n+4)w+1", nn + 1, "n+1", std::max(1.0, beta), "max{1,beta}", 0.0, "exact");
  return {std::move(net), std::move(report)};
}

// Realizes x -> beta * x for any nonzero beta using L width-2 stages, with
// every entry bounded by 2. For L = 0 this is the single affine map (beta).
inline Construction signed_scaling_net(double beta, int64_t L) {
  if (beta == 0.0 || !std::isfinite(beta)) throw domain_error("signed_scaling_net: beta must be nonzero");
  if (L < 0) throw domain_error("signed_scaling_net: L must be >= 0");
  if (static_cast<double>(L) < std::log2(std::abs(beta)))
    throw domain_error("signed_scaling_net: need L >= log2|beta|");
  Network net;
  if (L == 0) {
    Layer only;
    only.weights = Matrix(1, 1);
    only.weights(0, 0) = beta;
    only.bias.assign(1, 0.0);
    net.layers.push_back(std::move(only));
  } else {
    net = detail::stage_scaling_net(detail::pow2_split_factors(beta, L), 1);
  }
  BoundReport report = detail::make_report(
      "signed-scaling", net, 6.0 * static_cast<double>(std::max<int64_t>(L, 1)) + 1, "6*max{L,1}+1",
      static_cast<double>(L + 1), "L+1", 2.0, "2", 0.0, "exact");
  return {std::move(net), std::move(report)};
}

// Scales the realization of a scalar-output network by 2^-L without touching
// the architecture: weights halve, the layer-k bias scales by 2^-k.
inline Construction downscale_outputs(const Network& net) {
  if (net.out_dim() != 1) throw shape_error("downscale_outputs: scalar output required");
  const Metrics before = metrics(net);
  Network out = net;
  double bias_scale = 1.0;
  for (Layer& layer : out.layers) {
    bias_scale *= 0.5;
    for (double& w : layer.weights.data) w *= 0.5;
    for (double& b : layer.bias) b *= bias_scale;
  }
  BoundReport report = detail::make_report(
      "downscale-outputs", out, static_cast<double>(before.param_count), "param(f)",
      static_cast<double>(before.length), "length(f)", 0.5 * before.size_norm, "size(f)/2",
      0.0, "2^-L * realization, exact");
  return {std::move(out), std::move(report)};
}

// Halves the size norm while preserving the realization: downscale the
// outputs by 2^-L, then multiply back with a size-1 width-4 scaling chain.
// Costs one extra identity stage and L+1 scaling layers.
inline Construction halve_size(const Network& net) {
  if (net.out_dim() != 1) throw shape_error("halve_size: scalar output required");
  const Metrics before = metrics(net);
  const int64_t L = before.length;
  Network down = downscale_outputs(net).net;
  Network up = scaling_net(1.0, 2, L).net;  // realizes 2^L * x with entries in {-1,0,1}
  Network out = compose(compose(std::move(up), identity_net(1)), down);
  BoundReport report = detail::make_report(
      "halve-size", out,
      static_cast<double>(before.param_count + before.dims[static_cast<size_t>(before.hidden_length)] +
                          20 * L),
      "param(f)+dims_H(f)+20*length(f)", static_cast<double>(2 * L + 1), "2*length(f)+1",
      std::max(1.0, 0.5 * before.size_norm), "max{1,size(f)/2}", 0.0, "realization preserved");
  return {std::move(out), std::move(report)};
}

// Two halvings: size norm drops to max{1, size/4} at length 4L+3.
inline Construction quarter_size(const Network& net) {
  if (net.out_dim() != 1) throw shape_error("quarter_size: scalar output required");
  const Metrics before = metrics(net);
  const int64_t L = before.length;
  Network out = halve_size(halve_size(net).net).net;
  BoundReport report = detail::make_report(
      "quarter-size", out,
      static_cast<double>(before.param_count + before.dims[static_cast<size_t>(before.hidden_length)] +
                          60 * L + 24),
      "param(f)+dims_H(f)+60*length(f)+24", static_cast<double>(4 * L + 3), "4*length(f)+3",
      std::max(1.0, 0.25 * before.size_norm), "max{1,size(f)/4}", 0.0, "realization preserved");
  return {std::move(out), std::move(report)};
}

// Pads a scalar-output network to exactly length L by appending width-2
// identity stages; the realization is unchanged bit for bit.
inline Construction extend_to_depth(const Network& net, int64_t L) {
  if (net.out_dim() != 1) throw shape_error("extend_to_depth: scalar output required");
  if (L <= net.length()) throw domain_error("extend_to_depth: L must exceed the current length");
  const Metrics before = metrics(net);
  Network out = net;
  for (int64_t k = net.length(); k < L; ++k) out = compose(identity_net(1), out);
  BoundReport report = detail::make_report(
      "extend-to-depth", out,
      static_cast<double>(before.param_count + before.dims[static_cast<size_t>(before.hidden_length)] +
                          4 + 6 * (L - before.length - 1)),
      "param(f)+dims_H(f)+4+6*(L-length(f)-1)", static_cast<double>(L), "L",
      std::max(1.0, before.size_norm), "max{1,size(f)}", 0.0, "realization preserved");
  return {std::move(out), std::move(report)};
}

}  // namespace relucalc
