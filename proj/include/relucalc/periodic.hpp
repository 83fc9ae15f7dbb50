#pragma once

// Periodic approximators: deep sawtooth networks, localized hat bumps, sums
// of hats interpolating a Lipschitz periodic function, and the composed
// sine-of-product / sine-of-sum approximators.

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "relucalc/bounds.hpp"
#include "relucalc/calculus.hpp"
#include "relucalc/constructors.hpp"
#include "relucalc/core.hpp"
#include "relucalc/transforms.hpp"

namespace relucalc {

// Unit triangle wave: 0 at even integers, 1 at odd integers, 2-periodic.
// The distance of x to the nearest even integer.
inline double triangle_wave(double x) {
  const double r = x - 2.0 * std::round(0.5 * x);
  return std::abs(r);
}

// Deep sawtooth: realizes the triangle wave at frequency 2^(n+1)/B on [0,B],
// symmetric in x, and (for n >= 1) identically zero for |x| > B.
// dims = (1,4,...,4,1) with length n+2.
inline Construction sawtooth_net(double B, int64_t n) {
  if (!(B > 0.0)) throw domain_error("sawtooth_net: B must be > 0");
  if (n < 0) throw domain_error("sawtooth_net: n must be >= 0");
  Network net;
  {
    Layer first;  // channels (2|x|/B)+, (2|x|/B - 1)+ split over both signs
    first.weights = Matrix(4, 1);
    first.weights(0, 0) = 2.0 / B;
    first.weights(1, 0) = 2.0 / B;
    first.weights(2, 0) = -2.0 / B;
    first.weights(3, 0) = -2.0 / B;
    first.bias = {0.0, -1.0, 0.0, -1.0};
    net.layers.push_back(std::move(first));
  }
  // Doubling step: e(2t) = 2e(t) - 4(e(t) - 1/2)+, duplicated to width 4.
  const std::vector<double> out_row = {1.0, -2.0, 1.0, -2.0};
  const std::vector<double> dbl_row = {1.0, 1.0, -2.0, -2.0};
  for (int64_t k = 0; k < n; ++k) {
    Layer mid;
    mid.weights = Matrix(4, 4);
    const std::vector<double>& prev = (k == 0) ? out_row : dbl_row;
    for (int64_t i = 0; i < 4; ++i)
      for (int64_t j = 0; j < 4; ++j) mid.weights(i, j) = prev[static_cast<size_t>(j)];
    mid.bias = {0.0, 0.0, -0.5, -0.5};
    net.layers.push_back(std::move(mid));
  }
  {
    Layer last;
    last.weights = Matrix(1, 4);
    const std::vector<double>& prev = (n == 0) ? out_row : dbl_row;
    for (int64_t j = 0; j < 4; ++j) last.weights(0, j) = prev[static_cast<size_t>(j)];
    last.bias.assign(1, 0.0);
    net.layers.push_back(std::move(last));
  }
  BoundReport report = detail::make_report(
      "sawtooth", net, static_cast<double>(20 * n + 13), "20n+13", static_cast<double>(n + 2),
      "n+2", std::max(2.0 / B, 2.0), "max{2/B,2}", 0.0, "triangle wave, exact on [-B,B]");
  return {std::move(net), std::move(report)};
}

namespace detail {

// x -> x - a with dims (1,2,1) and entries bounded by max{1,|a|/2}.
inline Network shift_net(double a) {
  Network net;
  Layer l1, l2;
  l1.weights = Matrix(2, 1);
  l1.weights(0, 0) = 1.0;
  l1.weights(1, 0) = -1.0;
  l1.bias = {-0.5 * a, 0.5 * a};
  l2.weights = Matrix(1, 2);
  l2.weights(0, 0) = 1.0;
  l2.weights(0, 1) = -1.0;
  l2.bias = {-0.5 * a};
  net.layers.push_back(std::move(l1));
  net.layers.push_back(std::move(l2));
  return net;
}

// One periodized hat of half-width 2pi/(N+1): supported (mod 2pi) on
// [a, a + 4pi/(N+1)] with peak value coef at the midpoint, truncated to
// [-2^n pi, 2^n pi], and scaled down by 2/(amp * (N+1)). All entries <= 2.
inline Network hat_net(double a, double coef, double amp, int64_t N, int64_t n) {
  const double pi = std::numbers::pi;
  const double shift = a - (static_cast<double>(N - 1) * pi) / static_cast<double>(N + 1);
  const double gate = static_cast<double>(N - 1) / static_cast<double>(N + 1);
  Network saw = sawtooth_net(std::ldexp(pi, static_cast<int>(n)), n - 1).net;
  Network post;  // y -> (coef/amp) * (y - gate)+
  {
    Layer l1, l2;
    l1.weights = Matrix(1, 1);
    l1.weights(0, 0) = 1.0;
    l1.bias = {-gate};
    l2.weights = Matrix(1, 1);
    l2.weights(0, 0) = coef / amp;
    l2.bias = {0.0};
    post.layers.push_back(std::move(l1));
    post.layers.push_back(std::move(l2));
  }
  return compose(compose(compose(post, identity_net(1)), std::move(saw)),
                 compose(identity_net(1), shift_net(shift)));
}

// Piecewise-linear interpolant of g at 2N+3 equispaced knots on [-2pi,2pi],
// constant outside; dims (1,2,2N+3,2,2,2,1). Entries stay <= 2 by building
// the quarter-scale interpolant and multiplying by four afterwards.
inline Network flat_periodic_interpolant(const std::function<double(double)>& g, int64_t N) {
  const double pi = std::numbers::pi;
  const int64_t M = 2 * N + 2;
  const double step = 4.0 * pi / static_cast<double>(M);
  std::vector<double> knots(static_cast<size_t>(M + 1));
  std::vector<double> values(static_cast<size_t>(M + 1));
  for (int64_t k = 0; k <= M; ++k) {
    knots[static_cast<size_t>(k)] = static_cast<double>(k) * step - 2.0 * pi;
    values[static_cast<size_t>(k)] = g(knots[static_cast<size_t>(k)]);
  }
  Network body;
  {
    Layer l1, l2;
    l1.weights = Matrix(M + 1, 1);
    l1.bias.assign(static_cast<size_t>(M + 1), 0.0);
    l2.weights = Matrix(1, M + 1);
    l2.bias = {0.25 * g(0.0)};
    for (int64_t k = 0; k <= M; ++k) {
      l1.weights(k, 0) = 0.25;
      l1.bias[static_cast<size_t>(k)] = -0.25 * knots[static_cast<size_t>(k)];
      const double right = (k < M) ? (values[static_cast<size_t>(k + 1)] - values[static_cast<size_t>(k)]) / step : 0.0;
      const double left = (k > 0) ? (values[static_cast<size_t>(k)] - values[static_cast<size_t>(k - 1)]) / step : 0.0;
      l2.weights(0, k) = right - left;  // slope change at the knot
    }
    body.layers.push_back(std::move(l1));
    body.layers.push_back(std::move(l2));
  }
  Network rescale = signed_scaling_net(4.0, 2).net;
  return compose(compose(std::move(rescale), identity_net(1)),
                 compose(std::move(body), identity_net(1)));
}

inline void check_periodic_contract(const std::function<double(double)>& g, double C, double eps,
                                    int64_t N) {
  const double pi = std::numbers::pi;
  if (N < 1) throw contract_error("periodic approximator: N must be >= 1");
  if (!(eps > 0.0 && eps <= 1.0)) throw contract_error("periodic approximator: eps must be in (0,1]");
  if (C < 1.0) throw contract_error("periodic approximator: C must be >= 1");
  if (eps * static_cast<double>(N + 1) < 2.0 * pi - 1e-12)
    throw contract_error("periodic approximator: need eps*(N+1) >= 2*pi");
  if (std::abs(g(0.0)) > 2.0) throw contract_error("periodic approximator: need |g(0)| <= 2");
  if (std::abs(g(2.0 * pi) - g(0.0)) > 1e-6)
    throw contract_error("periodic approximator: g is not 2*pi-periodic");
}

}  // namespace detail

// Interpolates a 1-Lipschitz 2pi-periodic g on [-2pi,2pi] within eps with a
// fixed 6-layer architecture, constant g(0) outside.
inline Construction flat_periodic_net(const std::function<double(double)>& g, int64_t N, double eps) {
  detail::check_periodic_contract(g, std::abs(g(0.0)) + std::numbers::pi + 1.0, eps, N);
  Network net = detail::flat_periodic_interpolant(g, N);
  const double NN = static_cast<double>(N);
  BoundReport report = detail::make_report(
      "flat-periodic", net, 4 * NN * NN, "4N^2", 6.0, "6", 2.0, "2", eps, "eps on [-2pi,2pi]");
  return {std::move(net), std::move(report)};
}

// Approximates a 1-Lipschitz 2pi-periodic g with |g(0)| <= 2 and range in
// [-C,C] on [-2^n pi, 2^n pi] within eps; the realization is 1-Lipschitz and
// equals g(0) outside the window. Built from N periodized hats at the nodes
// c_j = 2j*pi/(N+1), fanned out, summed, and rescaled.
inline Construction periodic_lipschitz_net(const std::function<double(double)>& g, int64_t n,
                                           int64_t N, double C, double eps) {
  const double pi = std::numbers::pi;
  if (n < 1) throw contract_error("periodic_lipschitz_net: n must be >= 1");
  detail::check_periodic_contract(g, C, eps, N);
  const double offset = g(0.0);

  Network net;
  if (n == 1) {
    net = detail::flat_periodic_interpolant(g, N);
  } else {
    const double amp = C + 2.0;  // hat coefficients live in [-(C+2), C+2]
    std::vector<Network> hats;
    hats.reserve(static_cast<size_t>(N));
    for (int64_t j = 1; j <= N; ++j) {
      const double cj = 2.0 * static_cast<double>(j) * pi / static_cast<double>(N + 1);
      const double cj_prev = 2.0 * static_cast<double>(j - 1) * pi / static_cast<double>(N + 1);
      hats.push_back(detail::hat_net(cj_prev, g(cj) - offset, amp, N, n));
    }
    Network fan;  // 1 -> N copies
    {
      Layer l;
      l.weights = Matrix(N, 1);
      for (int64_t i = 0; i < N; ++i) l.weights(i, 0) = 1.0;
      l.bias.assign(static_cast<size_t>(N), 0.0);
      fan.layers.push_back(std::move(l));
    }
    Network sum;  // N -> 1
    {
      Layer l;
      l.weights = Matrix(1, N);
      for (int64_t j = 0; j < N; ++j) l.weights(0, j) = 1.0;
      l.bias.assign(1, 0.0);
      sum.layers.push_back(std::move(l));
    }
    Network add_offset;
    {
      Layer l;
      l.weights = Matrix(1, 1);
      l.weights(0, 0) = 1.0;
      l.bias = {offset};
      add_offset.layers.push_back(std::move(l));
    }
    // Undo the 2/(amp*(N+1)) hat normalization with a bounded-entry chain.
    // The stage count follows C so the length claim holds; the stage width
    // absorbs the amplitude headroom while keeping every factor <= 2.
    const double total = amp * static_cast<double>(N + 1) / 2.0;
    const int64_t stages = std::max<int64_t>(1, detail::ceil_log2(C));
    const double root = std::pow(total, 1.0 / static_cast<double>(stages));
    const int64_t w = std::max<int64_t>(1, static_cast<int64_t>(std::ceil(root / 2.0)));
    const double beta = root / static_cast<double>(w);
    Network rescale = scaling_net(beta, w, stages).net;
    net = compose(compose(std::move(add_offset), identity_net(1)),
                  compose(compose(std::move(rescale), std::move(sum)),
                          compose(compose(identity_net(N), parallelize(hats)),
                                  compose(identity_net(N), fan))));
  }
  const double NN = static_cast<double>(N), nn = static_cast<double>(n);
  BoundReport report = detail::make_report(
      "periodic-lipschitz", net, (24.0 + 18.0 * nn + 5.0 * std::max(0.0, std::log2(C))) * NN * NN,
      "(24+18n+5log2(C))N^2", nn + std::max(0.0, std::log2(C)) + 9.0, "n+log2(C)+9", 2.0, "2", eps,
      "eps on [-2^n pi, 2^n pi]");
  return {std::move(net), std::move(report)};
}

// Approximates g(gamma*beta*x) on [-R,R] within eps for 1-Lipschitz
// 2pi-periodic g with |g(0)| <= 2: a signed scaling into the periodic window
// followed by the periodic approximator.
inline Construction scaled_periodic_net(const std::function<double(double)>& g, double R,
                                        double gamma, double beta, double eps) {
  const double pi = std::numbers::pi;
  if (!(R > 0.0)) throw contract_error("scaled_periodic_net: R must be > 0");
  if (gamma <= 0.0 || gamma > 1.0) throw contract_error("scaled_periodic_net: gamma must be in (0,1]");
  if (beta < 1.0) throw contract_error("scaled_periodic_net: beta must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw contract_error("scaled_periodic_net: eps must be in (0,1)");
  const double R_eff = std::max(2.0, R);
  const int64_t n = std::max<int64_t>(1, detail::ceil_log2(beta * R_eff));
  const int64_t N = static_cast<int64_t>(std::ceil(2.0 * pi / eps)) - 1;
  // Any 1-Lipschitz 2pi-periodic g with |g(0)| <= 2 has range within [-6,6].
  Network inner = periodic_lipschitz_net(g, n, N, 6.0, eps).net;
  const double s = gamma * beta;
  Network scale = signed_scaling_net(s, std::max<int64_t>(0, detail::ceil_log2(std::max(1.0, s)))).net;
  Network net = compose(compose(std::move(inner), identity_net(1)), std::move(scale));
  const double m = std::max({1.0, detail::ceil_log2_clamped(R), detail::ceil_log2_clamped(beta)});
  BoundReport report = detail::make_report(
      "scaled-periodic", net, 4584.0 * m / (eps * eps),
      "4584*max{1,ceil(log2 R),ceil(log2 beta)}/eps^2", 16.0 * m,
      "16*max{1,ceil(log2 R),ceil(log2 beta)}", 2.0, "2", eps, "eps on [-R,R]");
  return {std::move(net), std::move(report)};
}

namespace detail {

// kappa-amplitude wrapper: approximate g/kappa to eps/kappa, then scale the
// output back by kappa.
inline Network stretch_amplitude(Network unit, double kappa) {
  Network scale = signed_scaling_net(kappa, std::max<int64_t>(1, ceil_log2(std::max(1.0, kappa)))).net;
  return compose(compose(std::move(scale), identity_net(1)), std::move(unit));
}

}  // namespace detail

// Approximates kappa*sin(gamma*beta^d*prod(x_i) + phi) on [a,b]^d within
// eps < kappa, with all entries bounded by 1 after two size halvings.
inline Construction sin_of_product_net(const TargetSpec& spec, double eps) {
  if (spec.family != TargetFamily::sin_product)
    throw contract_error("sin_of_product_net: target family must be sin-product");
  spec.validate();
  if (!(eps > 0.0 && eps < spec.kappa)) throw contract_error("sin_of_product_net: need eps in (0,kappa)");
  const double pi = std::numbers::pi;
  const double kappa = spec.kappa, phi = spec.phi;
  const double eps_unit = eps / kappa;
  const auto g_unit = [phi](double t) { return std::sin(t + phi); };
  const double R_dom = std::max({2.0, std::abs(spec.a), std::abs(spec.b)});

  Network unit;
  if (spec.d == 1) {
    unit = scaled_periodic_net(g_unit, R_dom, spec.gamma, spec.beta, eps_unit).net;
  } else {
    const int64_t n =
        std::max<int64_t>(1, static_cast<int64_t>(std::ceil(static_cast<double>(spec.d) *
                                                            std::log2(spec.beta * R_dom))) -
                                 1);
    const int64_t N = static_cast<int64_t>(std::ceil(4.0 * pi / eps_unit)) - 1;
    Network periodic = periodic_lipschitz_net(g_unit, n, N, 1.0, 0.5 * eps_unit).net;
    Network product = dprod_net(spec.d, 0.5 * eps_unit, R_dom, spec.gamma, spec.beta).net;
    unit = compose(compose(std::move(periodic), identity_net(1)), std::move(product));
  }
  Network net = halve_size(halve_size(detail::stretch_amplitude(std::move(unit), kappa)).net).net;

  const double dd = static_cast<double>(spec.d);
  const double c = 13968.0 *
                   detail::ceil_log2_clamped(std::max({2.0, std::abs(spec.a), std::abs(spec.b), spec.beta})) *
                   std::max(1.0, kappa * kappa * kappa);
  BoundReport report = detail::make_report(
      "sin-product", net, c * dd * dd * dd / (eps * eps),
      "13968*ceil(log2 max{2,|a|,|b|,beta})*max{1,kappa^3}*d^3/eps^2", c * dd * dd / eps,
      "13968*ceil(log2 max{2,|a|,|b|,beta})*max{1,kappa^3}*d^2/eps", 1.0, "1", eps,
      "eps on [a,b]^d");
  return {std::move(net), std::move(report)};
}

// Approximates kappa*sin(gamma*2^d*sum(x_i) + phi) on [a,b]^d within
// eps < kappa, with all entries bounded by 1 after one size halving.
inline Construction sin_of_sum_net(const TargetSpec& spec, double eps) {
  if (spec.family != TargetFamily::sin_sum)
    throw contract_error("sin_of_sum_net: target family must be sin-sum");
  spec.validate();
  if (!(eps > 0.0 && eps < spec.kappa)) throw contract_error("sin_of_sum_net: need eps in (0,kappa)");
  const double pi = std::numbers::pi;
  const double kappa = spec.kappa, phi = spec.phi, gamma = spec.gamma;
  const double eps_unit = eps / kappa;
  const auto g_unit = [phi](double t) { return std::sin(t + phi); };
  const int64_t d = spec.d;

  const double box = std::max({2.0, std::abs(spec.a), std::abs(spec.b)});
  const int64_t n = 2 * d * std::max<int64_t>(1, detail::ceil_log2(std::max(1.0, gamma) * box));
  const int64_t N = static_cast<int64_t>(std::ceil(2.0 * pi / eps_unit)) - 1;

  Network ones;  // x -> sum(x_i)
  {
    Layer l;
    l.weights = Matrix(1, d);
    for (int64_t j = 0; j < d; ++j) l.weights(0, j) = 1.0;
    l.bias.assign(1, 0.0);
    ones.layers.push_back(std::move(l));
  }
  const double s = gamma * std::ldexp(1.0, static_cast<int>(d));
  Network scale =
      signed_scaling_net(s, d + std::max<int64_t>(0, detail::ceil_log2(std::max(1.0, gamma)))).net;
  Network periodic = periodic_lipschitz_net(g_unit, n, N, 1.0, eps_unit).net;
  Network unit = compose(compose(std::move(periodic), identity_net(1)),
                         compose(std::move(scale), std::move(ones)));
  Network net = halve_size(detail::stretch_amplitude(std::move(unit), kappa)).net;

  const double dd = static_cast<double>(d);
  const double c = 4634.0 * std::max(1.0, kappa * kappa * kappa) *
                   detail::ceil_log2_clamped(std::max(1.0, gamma) * box);
  BoundReport report = detail::make_report(
      "sin-sum", net, c * dd * dd / (eps * eps),
      "4634*max{kappa^3,1}*ceil(log2(max{1,gamma}max{2,|a|,|b|}))*d^2/eps^2", c * dd,
      "4634*max{kappa^3,1}*ceil(log2(max{1,gamma}max{2,|a|,|b|}))*d", 1.0, "1", eps,
      "eps on [a,b]^d");
  return {std::move(net), std::move(report)};
}

}  // namespace relucalc
