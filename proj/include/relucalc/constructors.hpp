#pragma once

// Explicit approximation networks for squares and products: the dyadic
// square interpolant, the polarization product, pairwise/tree/d-fold
// products, and the size-reduced product.

#include <cmath>
#include <string>
#include <vector>

#include "relucalc/bounds.hpp"
#include "relucalc/calculus.hpp"
#include "relucalc/core.hpp"
#include "relucalc/transforms.hpp"

namespace relucalc {

// Interpolates x^2 at the dyadic nodes k/2^N on [0,1] with N width-4 hidden
// layers and coincides with max{x,0} outside [0,1].
//
// Each hidden layer carries four channels: three refine the running
// triangle-wave iterate (t, t-1/2, t-1 before clipping) and one nonnegative
// accumulator holds the partial interpolant, which stays >= 0 everywhere.
inline Construction square_net_base(int64_t N) {
  if (N < 1) throw domain_error("square_net_base: N must be >= 1");
  Network net;
  {
    Layer first;  // channels: (x)+, (x-1/2)+, (x-1)+, accumulator (x)+
    first.weights = Matrix(4, 1);
    first.bias.assign(4, 0.0);
    for (int64_t i = 0; i < 4; ++i) first.weights(i, 0) = 1.0;
    first.bias[1] = -0.5;
    first.bias[2] = -1.0;
    net.layers.push_back(std::move(first));
  }
  double inv4k = 1.0;  // 1/4^k for the accumulator update at depth k
  for (int64_t k = 1; k < N; ++k) {
    inv4k *= 0.25;
    Layer mid;
    mid.weights = Matrix(4, 4);
    mid.bias.assign(4, 0.0);
    // t' = 2a - 4b + 2e is the doubled triangle wave of the previous layer.
    for (int64_t i = 0; i < 3; ++i) {
      mid.weights(i, 0) = 2.0;
      mid.weights(i, 1) = -4.0;
      mid.weights(i, 2) = 2.0;
    }
    mid.bias[1] = -0.5;
    mid.bias[2] = -1.0;
    mid.weights(3, 0) = -2.0 * inv4k;
    mid.weights(3, 1) = 4.0 * inv4k;
    mid.weights(3, 2) = -2.0 * inv4k;
    mid.weights(3, 3) = 1.0;
    net.layers.push_back(std::move(mid));
  }
  {
    inv4k *= 0.25;
    Layer last;
    last.weights = Matrix(1, 4);
    last.bias.assign(1, 0.0);
    last.weights(0, 0) = -2.0 * inv4k;
    last.weights(0, 1) = 4.0 * inv4k;
    last.weights(0, 2) = -2.0 * inv4k;
    last.weights(0, 3) = 1.0;
    net.layers.push_back(std::move(last));
  }
  BoundReport report = detail::make_report(
      "square-base", net, static_cast<double>(4 * 2 + (N - 1) * 20 + 5), "8+20(N-1)+5",
      static_cast<double>(N + 1), "N+1", 4.0, "4", std::pow(4.0, static_cast<double>(-N - 1)),
      "4^-(N+1) on [0,1]");
  return {std::move(net), std::move(report)};
}

namespace detail {

// x -> |x|/R with dims (1,2,1).
inline Network abs_over(double R) {
  Network net;
  Layer l1, l2;
  l1.weights = Matrix(2, 1);
  l1.weights(0, 0) = 1.0 / R;
  l1.weights(1, 0) = -1.0 / R;
  l1.bias.assign(2, 0.0);
  l2.weights = Matrix(1, 2);
  l2.weights(0, 0) = 1.0;
  l2.weights(0, 1) = 1.0;
  l2.bias.assign(1, 0.0);
  net.layers.push_back(std::move(l1));
  net.layers.push_back(std::move(l2));
  return net;
}

// Width-1 chain realizing R^2 * x over n stages, every factor <= 4.
inline Network square_rescale_chain(double R, int64_t n) {
  std::vector<double> factors(static_cast<size_t>(n), 4.0);
  double lead = 1.0;
  for (int64_t k = 1; k < n; ++k) lead *= 4.0;
  factors.back() = (R * R) / lead;  // in (1,4]: exact division by a power of four
  return stage_scaling_net(factors, 1);
}

}  // namespace detail

// Approximates x^2 on [-R,R] within R^2 * 4^-(N+1); routes through |x|/R,
// the base square interpolant, and an R^2 rescaling chain.
inline Construction square_net(int64_t N, double R) {
  if (N < 1) throw domain_error("square_net: N must be >= 1");
  if (R <= 1.0) throw domain_error("square_net: R must be > 1");
  const int64_t n = detail::ceil_log2(R);
  Network net = compose(
      compose(compose(detail::square_rescale_chain(R, n), identity_net(1)),
              compose(square_net_base(N).net, identity_net(1))),
      detail::abs_over(R));
  const double err = R * R * std::pow(4.0, static_cast<double>(-N - 1));
  BoundReport report = detail::make_report(
      "square", net, static_cast<double>(metrics(net).param_count), "dims sum",
      static_cast<double>(N + n + 4), "N+ceil(log2 R)+4", 4.0, "4", err, "R^2*4^-(N+1) on [-R,R]");
  return {std::move(net), std::move(report)};
}

// Approximates (x,y) -> x*y on [-R,R]^2 by polarization:
// xy = ((x+y)^2 - x^2 - y^2) / 2 with three parallel square branches.
inline Construction product2_net(int64_t N, double R) {
  if (N < 1) throw domain_error("product2_net: N must be >= 1");
  if (R <= 1.0) throw domain_error("product2_net: R must be > 1");
  Network pre;  // (x,y) -> (x+y, x, y)
  {
    Layer l;
    l.weights = Matrix(3, 2);
    l.weights(0, 0) = 1.0;
    l.weights(0, 1) = 1.0;
    l.weights(1, 0) = 1.0;
    l.weights(2, 1) = 1.0;
    l.bias.assign(3, 0.0);
    pre.layers.push_back(std::move(l));
  }
  Network post;  // (u,v,w) -> (u - v - w)/2
  {
    Layer l;
    l.weights = Matrix(1, 3);
    l.weights(0, 0) = 0.5;
    l.weights(0, 1) = -0.5;
    l.weights(0, 2) = -0.5;
    l.bias.assign(1, 0.0);
    post.layers.push_back(std::move(l));
  }
  const Network sq = square_net(N, 2.0 * R).net;
  Network net = compose(compose(compose(post, identity_net(3)), parallelize({sq, sq, sq})),
                        compose(identity_net(3), pre));
  const double err = 3.0 * R * R * std::pow(2.0, static_cast<double>(-2 * N - 1));
  BoundReport report = detail::make_report(
      "product2", net, static_cast<double>(metrics(net).param_count), "dims sum",
      static_cast<double>(N + detail::ceil_log2(R) + 7), "N+ceil(log2 R)+7", 4.0, "4", err,
      "3R^2*2^-(2N+1) on [-R,R]^2");
  return {std::move(net), std::move(report)};
}

// d parallel copies of the pair product: (x_1..x_2d) -> (x_1x_2,...,x_{2d-1}x_{2d}).
inline Construction pairwise_product_net(int64_t d, int64_t N, double R) {
  if (d < 1) throw domain_error("pairwise_product_net: d must be >= 1");
  const Network pair = product2_net(N, R).net;
  Network net = parallelize(std::vector<Network>(static_cast<size_t>(d), pair));
  const double dd = static_cast<double>(d), NN = static_cast<double>(N);
  const double lg = detail::ceil_log2_clamped(R);
  const double err = 3.0 * R * R * std::sqrt(dd) * std::pow(2.0, static_cast<double>(-2 * N - 1));
  BoundReport report = detail::make_report(
      "pairwise-product", net,
      234 * dd * dd + 49 * dd + NN * (144 * dd * dd + 12 * dd) + lg * (36 * dd * dd + 6 * dd),
      "234d^2+49d+N(144d^2+12d)+ceil(log2 R)(36d^2+6d)",
      static_cast<double>(N + detail::ceil_log2(R) + 7), "N+ceil(log2 R)+7", 4.0, "4", err,
      "3R^2*sqrt(d)*2^-(2N+1) euclidean on [-R,R]^2d");
  return {std::move(net), std::move(report)};
}

namespace detail {

// Stage precisions for the binary product tree: stage i of td halves the
// number of factors and must absorb the Lipschitz blow-up of the later
// stages. Stage i works at radius R^(2^(i-1)), so after the downstream
// amplification every stage contributes a factor R^(2^td); the precision
// therefore carries the full 2^(td-1)*log2(R) term regardless of i. A
// single-stage tree needs no headroom and uses the direct precision from
// the pair-product error bound 3R^2*2^-(2N+1) <= eps.
inline int64_t tree_stage_precision(int64_t td, int64_t i, double R, double eps) {
  if (td == 1)
    return std::max<int64_t>(
        1, static_cast<int64_t>(std::ceil(0.5 * (std::log2(3.0) + 2.0 * std::log2(R) - std::log2(eps) - 1.0))));
  const double v = (8.0 * static_cast<double>(td) - 5.0 * static_cast<double>(i)) / 4.0 +
                   std::pow(2.0, static_cast<double>(td - 1)) * std::log2(R) - 0.5 * std::log2(eps) +
                   0.5;
  return std::max<int64_t>(1, static_cast<int64_t>(std::ceil(v)));
}

}  // namespace detail

// Approximates the product of 2^td inputs on [-R,R]^(2^td) within eps via a
// binary tree of pairwise-product stages joined by identity stages.
inline Construction tree_product_net(int64_t td, double eps, double R) {
  if (td < 1) throw domain_error("tree_product_net: log2 input count must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw domain_error("tree_product_net: eps must be in (0,1)");
  if (R <= 1.0) throw domain_error("tree_product_net: R must be > 1");
  Network net;
  for (int64_t i = 1; i <= td; ++i) {
    const int64_t pairs = static_cast<int64_t>(1) << (td - i);
    const int64_t Ni = detail::tree_stage_precision(td, i, R, eps);
    const double Ri = std::pow(R, std::pow(2.0, static_cast<double>(i - 1)));
    Network stage = pairwise_product_net(pairs, Ni, Ri).net;
    if (i == 1) {
      net = std::move(stage);
    } else {
      net = compose(compose(std::move(stage), identity_net(2 * pairs)), std::move(net));
    }
  }
  const double tdd = static_cast<double>(td);
  const double lg = detail::ceil_log2_clamped(R);
  BoundReport report = detail::make_report(
      "tree-product", net,
      std::pow(2.0, 3 * tdd + 10) + std::pow(2.0, 3 * tdd + 8) * lg -
          std::pow(2.0, 2 * tdd + 7) * std::log2(eps),
      "2^(3t+10)+2^(3t+8)ceil(log2 R)-2^(2t+7)log2(eps)",
      tdd * std::pow(2.0, tdd + 2) + tdd * std::pow(2.0, tdd) * lg - 0.5 * tdd * std::log2(eps),
      "t*2^(t+2)+t*2^t*ceil(log2 R)-(t/2)log2(eps)", 4.0, "4", eps, "eps on [-R,R]^(2^t)");
  return {std::move(net), std::move(report)};
}

// Approximates gamma * beta^d * prod(x_i) on [-R,R]^d within eps. Inputs are
// padded to the next power of two with constant-one channels, gamma folds
// into the first coordinate, and beta^d is applied by a scaling chain.
inline Construction dprod_net(int64_t d, double eps, double R, double gamma, double beta) {
  if (d < 1) throw domain_error("dprod_net: d must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw domain_error("dprod_net: eps must be in (0,1)");
  if (R <= 1.0) throw domain_error("dprod_net: R must be > 1");
  if (gamma <= 0.0 || gamma > 1.0) throw domain_error("dprod_net: gamma must be in (0,1]");
  if (beta < 1.0) throw domain_error("dprod_net: beta must be >= 1");
  const double dd = static_cast<double>(d);
  const double lgR = detail::ceil_log2_clamped(R);
  const double lgB = std::log2(beta);
  const double param_bound =
      8203 * dd * dd * dd + 2048 * dd * dd * dd * lgR - 512 * dd * dd * std::log2(eps) +
      514 * dd * dd * dd * std::max(0.0, lgB);
  const double length_bound = 8 * dd * dd + 2 * dd * dd * lgR + dd * std::log2(1.0 / eps) +
                              dd * dd * detail::ceil_log2_clamped(beta) + 2;

  Network net;
  if (d == 1) {
    // One-factor product: exactly gamma * beta * x.
    net = signed_scaling_net(gamma * beta,
                             std::max<int64_t>(1, detail::ceil_log2(std::max(1.0, gamma * beta))))
              .net;
  } else {
    const int64_t td = detail::ceil_log2(static_cast<double>(d));
    const int64_t D = static_cast<int64_t>(1) << td;
    Network pad;  // x -> (gamma*x_1, x_2, ..., x_d, 1, ..., 1)
    {
      Layer l;
      l.weights = Matrix(D, d);
      l.bias.assign(static_cast<size_t>(D), 0.0);
      l.weights(0, 0) = gamma;
      for (int64_t i = 1; i < d; ++i) l.weights(i, i) = 1.0;
      for (int64_t i = d; i < D; ++i) l.bias[static_cast<size_t>(i)] = 1.0;
      pad.layers.push_back(std::move(l));
    }
    const double beta_d = std::pow(beta, dd);
    Network rescale =
        (beta == 1.0)
            ? signed_scaling_net(1.0, 0).net
            : signed_scaling_net(beta_d, std::max<int64_t>(1, d * detail::ceil_log2(beta))).net;
    Network tree = tree_product_net(td, eps / beta_d, R).net;
    net = compose(compose(std::move(rescale), identity_net(1)),
                  compose(std::move(tree), compose(identity_net(D), pad)));
  }
  BoundReport report = detail::make_report(
      "d-product", net, param_bound,
      "8203d^3+2048d^3*ceil(log2 R)-512d^2*log2(eps)+514d^3*log2(beta)", length_bound,
      "8d^2+2d^2*ceil(log2 R)+d*log2(1/eps)+d^2*ceil(log2 beta)+2", 4.0, "4", eps,
      "eps on [-R,R]^d");
  return {std::move(net), std::move(report)};
}

// Size-norm <= 1 variant of the d-fold product on [a,b]^d: build the
// d-product on the covering symmetric box, then quarter the size.
inline Construction downsized_product_net(int64_t d, double eps, double a, double b, double gamma,
                                          double beta) {
  if (d < 1) throw domain_error("downsized_product_net: d must be >= 1");
  if (eps <= 0.0) throw domain_error("downsized_product_net: eps must be > 0");
  if (b < a) throw domain_error("downsized_product_net: b must be >= a");
  const double R = std::max({2.0, std::abs(a), std::abs(b)});
  const double eps_eff = std::min(eps, 0.5);
  Network net = quarter_size(dprod_net(d, eps_eff, R, gamma, beta).net).net;
  const double dd = static_cast<double>(d);
  const double M = std::max({1.0, detail::ceil_log2_clamped(std::abs(a)),
                             detail::ceil_log2_clamped(std::abs(b)), std::log2(1.0 / eps),
                             detail::ceil_log2_clamped(beta)});
  BoundReport report = detail::make_report(
      "downsized-product", net, 12143 * dd * dd * dd * M,
      "12143d^3*max{1,ceil(log2|a|),ceil(log2|b|),log2(1/eps),ceil(log2 beta)}", 59 * dd * dd * M,
      "59d^2*max{1,ceil(log2|a|),ceil(log2|b|),log2(1/eps),ceil(log2 beta)}", 1.0, "1", eps,
      "eps on [a,b]^d");
  return {std::move(net), std::move(report)};
}

}  // namespace relucalc
