#pragma once

// Exact piecewise-linear description of a scalar-output network restricted
// to a segment: per-neuron affine coefficients are propagated through every
// layer, each ReLU inserts breakpoints at the zero crossings of its
// pre-activation, and collinear output pieces are coalesced at the end.

#include <algorithm>
#include <cmath>
#include <vector>

#include "relucalc/core.hpp"

namespace relucalc {

// Breakpoints merge below this parameter distance.
inline constexpr double kBreakpointMergeTol = 1e-12;
// Adjacent pieces merge when slopes and intercepts agree to this relative
// tolerance.
inline constexpr double kPieceMergeTol = 1e-10;

struct PwlTrace {
  std::vector<double> p, q;          // segment endpoints, x(t) = p + t(q-p)
  std::vector<double> breakpoints;   // t_0 = 0 < ... < t_m = 1
  std::vector<double> slopes;        // per piece, output = slope*t + intercept
  std::vector<double> intercepts;

  double value_at(double t) const {
    size_t piece = breakpoints.size() - 2;
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i)
      if (t < breakpoints[i + 1]) {
        piece = i;
        break;
      }
    return slopes[piece] * t + intercepts[piece];
  }
};

inline int64_t count_pieces(const PwlTrace& trace) {
  return static_cast<int64_t>(trace.slopes.size());
}

inline PwlTrace exact_line_trace(const Network& net, const std::vector<double>& p,
                                 const std::vector<double>& q) {
  if (net.out_dim() != 1) throw shape_error("exact_line_trace: scalar output required");
  const int64_t d = net.in_dim();
  if (static_cast<int64_t>(p.size()) != d || static_cast<int64_t>(q.size()) != d)
    throw shape_error("exact_line_trace: endpoint dimension mismatch");
  double seg = 0.0;
  for (int64_t j = 0; j < d; ++j) seg = std::max(seg, std::abs(q[static_cast<size_t>(j)] - p[static_cast<size_t>(j)]));
  if (seg == 0.0) throw domain_error("exact_line_trace: zero-length segment");

  std::vector<double> bps = {0.0, 1.0};
  // Post-activation affine coefficients, interval-major: [interval][neuron].
  std::vector<double> slope(static_cast<size_t>(d)), icept(static_cast<size_t>(d));
  for (int64_t j = 0; j < d; ++j) {
    slope[static_cast<size_t>(j)] = q[static_cast<size_t>(j)] - p[static_cast<size_t>(j)];
    icept[static_cast<size_t>(j)] = p[static_cast<size_t>(j)];
  }
  int64_t width = d;

  std::vector<double> pre_s, pre_c, next_s, next_c, next_bps, cuts;
  const int64_t L = net.length();
  for (int64_t k = 0; k < L; ++k) {
    const Layer& layer = net.layers[static_cast<size_t>(k)];
    const int64_t rows = layer.weights.rows, cols = layer.weights.cols;
    const int64_t m = static_cast<int64_t>(bps.size()) - 1;
    pre_s.assign(static_cast<size_t>(m * rows), 0.0);
    pre_c.assign(static_cast<size_t>(m * rows), 0.0);
    for (int64_t i = 0; i < m; ++i) {
      const double* s_in = slope.data() + i * width;
      const double* c_in = icept.data() + i * width;
      double* s_out = pre_s.data() + i * rows;
      double* c_out = pre_c.data() + i * rows;
      for (int64_t r = 0; r < rows; ++r) {
        double s_acc = 0.0, c_acc = 0.0;
        const double* w = layer.weights.data.data() + r * cols;
        for (int64_t j = 0; j < cols; ++j) {
          s_acc += w[j] * s_in[j];
          c_acc += w[j] * c_in[j];
        }
        s_out[r] = s_acc;
        c_out[r] = c_acc + layer.bias[static_cast<size_t>(r)];
      }
    }
    if (k + 1 == L) {
      slope.swap(pre_s);
      icept.swap(pre_c);
      width = rows;
      break;
    }
    // Split intervals at the zero crossings of every pre-activation, then
    // clamp: inactive neurons become the zero function on the interval.
    next_bps.clear();
    next_s.clear();
    next_c.clear();
    next_bps.push_back(0.0);
    for (int64_t i = 0; i < m; ++i) {
      const double ta = bps[static_cast<size_t>(i)], tb = bps[static_cast<size_t>(i + 1)];
      cuts.clear();
      const double* s_in = pre_s.data() + i * rows;
      const double* c_in = pre_c.data() + i * rows;
      for (int64_t r = 0; r < rows; ++r) {
        if (s_in[r] == 0.0) continue;
        const double t = -c_in[r] / s_in[r];
        if (t > ta + kBreakpointMergeTol && t < tb - kBreakpointMergeTol) cuts.push_back(t);
      }
      std::sort(cuts.begin(), cuts.end());
      cuts.push_back(tb);
      double lo = ta;
      for (double hi : cuts) {
        if (hi - lo < kBreakpointMergeTol) continue;
        const double mid = 0.5 * (lo + hi);
        for (int64_t r = 0; r < rows; ++r) {
          const bool active = s_in[r] * mid + c_in[r] > 0.0;
          next_s.push_back(active ? s_in[r] : 0.0);
          next_c.push_back(active ? c_in[r] : 0.0);
        }
        next_bps.push_back(hi);
        lo = hi;
      }
      next_bps.back() = tb;
    }
    bps.swap(next_bps);
    slope.swap(next_s);
    icept.swap(next_c);
    width = rows;
  }

  // Coalesce collinear neighbours of the scalar output.
  PwlTrace trace;
  trace.p = p;
  trace.q = q;
  trace.breakpoints.push_back(bps.front());
  const int64_t m = static_cast<int64_t>(bps.size()) - 1;
  for (int64_t i = 0; i < m; ++i) {
    const double s = slope[static_cast<size_t>(i)], c = icept[static_cast<size_t>(i)];
    if (!trace.slopes.empty()) {
      const double ps = trace.slopes.back(), pc = trace.intercepts.back();
      const bool same_slope = std::abs(s - ps) <= kPieceMergeTol * std::max(1.0, std::abs(s));
      const bool same_icept = std::abs(c - pc) <= kPieceMergeTol * std::max(1.0, std::abs(c));
      if (same_slope && same_icept) {
        trace.breakpoints.back() = bps[static_cast<size_t>(i + 1)];
        continue;
      }
    }
    trace.slopes.push_back(s);
    trace.intercepts.push_back(c);
    trace.breakpoints.push_back(bps[static_cast<size_t>(i + 1)]);
  }
  return trace;
}

// Sampling fallback for piece counting: counts sign-clean second-difference
// spikes over a uniform parameter grid. Underestimates when two kinks fall
// inside one grid cell, so traces are validated with >=.
inline int64_t sampled_kink_count(const Network& net, const std::vector<double>& p,
                                  const std::vector<double>& q, int64_t samples) {
  if (net.out_dim() != 1) throw shape_error("sampled_kink_count: scalar output required");
  const int64_t d = net.in_dim();
  std::vector<double> f(static_cast<size_t>(samples));
  constexpr int64_t kBlock = 4096;
  std::vector<double> xs(static_cast<size_t>(kBlock * d));
  for (int64_t base = 0; base < samples; base += kBlock) {
    const int64_t count = std::min(kBlock, samples - base);
    for (int64_t i = 0; i < count; ++i) {
      const double t = static_cast<double>(base + i) / static_cast<double>(samples - 1);
      for (int64_t j = 0; j < d; ++j)
        xs[static_cast<size_t>(i * d + j)] =
            p[static_cast<size_t>(j)] + t * (q[static_cast<size_t>(j)] - p[static_cast<size_t>(j)]);
    }
    const std::vector<double> ys = realize_batch(net, xs.data(), count);
    for (int64_t i = 0; i < count; ++i) f[static_cast<size_t>(base + i)] = ys[static_cast<size_t>(i)];
  }
  // A kink strictly between grid points spikes two consecutive second
  // differences, so runs of consecutive spikes count once.
  int64_t kinks = 0;
  bool in_run = false;
  for (int64_t i = 1; i + 1 < samples; ++i) {
    const double dd = f[static_cast<size_t>(i - 1)] - 2.0 * f[static_cast<size_t>(i)] +
                      f[static_cast<size_t>(i + 1)];
    const bool spike = std::abs(dd) > 1e-7 * std::max(1.0, std::abs(f[static_cast<size_t>(i)]));
    if (spike && !in_run) ++kinks;
    in_run = spike;
  }
  return kinks + 1;
}

}  // namespace relucalc
