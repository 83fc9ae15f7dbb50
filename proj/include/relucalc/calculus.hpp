#pragma once

// Network calculus: composition, parallelization, and identity networks.

#include <vector>

#include "relucalc/core.hpp"

namespace relucalc {

namespace detail {

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows, b.cols);
  for (int64_t i = 0; i < a.rows; ++i)
    for (int64_t k = 0; k < a.cols; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int64_t j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
  std::vector<double> y(static_cast<size_t>(a.rows), 0.0);
  for (int64_t i = 0; i < a.rows; ++i) {
    double acc = 0.0;
    for (int64_t j = 0; j < a.cols; ++j) acc += a(i, j) * x[static_cast<size_t>(j)];
    y[static_cast<size_t>(i)] = acc;
  }
  return y;
}

}  // namespace detail

// Composition f . g: the inner output layer fuses with the outer input layer
// into a single affine map, so length(f . g) = length(f) + length(g) - 1.
inline Network compose(const Network& outer, const Network& inner) {
  if (outer.in_dim() != inner.out_dim())
    throw shape_error("compose: outer expects " + std::to_string(outer.in_dim()) +
                      " inputs, inner produces " + std::to_string(inner.out_dim()));
  Network out;
  out.layers.reserve(inner.layers.size() + outer.layers.size() - 1);
  for (size_t k = 0; k + 1 < inner.layers.size(); ++k) out.layers.push_back(inner.layers[k]);
  const Layer& last_in = inner.layers.back();
  const Layer& first_out = outer.layers.front();
  Layer fused;
  fused.weights = detail::matmul(first_out.weights, last_in.weights);
  fused.bias = detail::matvec(first_out.weights, last_in.bias);
  for (size_t i = 0; i < fused.bias.size(); ++i) fused.bias[i] += first_out.bias[i];
  out.layers.push_back(std::move(fused));
  for (size_t k = 1; k < outer.layers.size(); ++k) out.layers.push_back(outer.layers[k]);
  return out;
}

// Block-diagonal stacking of equal-length networks; computes the tuple of
// the member realizations on the concatenated input.
inline Network parallelize(const std::vector<Network>& nets) {
  if (nets.empty()) throw shape_error("parallelize: need at least one network");
  const int64_t L = nets.front().length();
  for (const Network& n : nets)
    if (n.length() != L) throw shape_error("parallelize: networks must have equal length");
  Network out;
  out.layers.resize(static_cast<size_t>(L));
  for (int64_t k = 0; k < L; ++k) {
    int64_t rows = 0, cols = 0;
    for (const Network& n : nets) {
      rows += n.layers[static_cast<size_t>(k)].weights.rows;
      cols += n.layers[static_cast<size_t>(k)].weights.cols;
    }
    Layer& layer = out.layers[static_cast<size_t>(k)];
    layer.weights = Matrix(rows, cols);
    layer.bias.assign(static_cast<size_t>(rows), 0.0);
    int64_t r0 = 0, c0 = 0;
    for (const Network& n : nets) {
      const Layer& block = n.layers[static_cast<size_t>(k)];
      for (int64_t i = 0; i < block.weights.rows; ++i) {
        for (int64_t j = 0; j < block.weights.cols; ++j)
          layer.weights(r0 + i, c0 + j) = block.weights(i, j);
        layer.bias[static_cast<size_t>(r0 + i)] = block.bias[static_cast<size_t>(i)];
      }
      r0 += block.weights.rows;
      c0 += block.weights.cols;
    }
  }
  return out;
}

// Width-2d network realizing the identity on R^d, all entries in {-1,0,1}.
inline Network identity_net(int64_t d) {
  if (d < 1) throw domain_error("identity_net: d must be >= 1");
  Network net;
  Layer l1, l2;
  l1.weights = Matrix(2 * d, d);
  l1.bias.assign(static_cast<size_t>(2 * d), 0.0);
  l2.weights = Matrix(d, 2 * d);
  l2.bias.assign(static_cast<size_t>(d), 0.0);
  for (int64_t i = 0; i < d; ++i) {
    l1.weights(2 * i, i) = 1.0;
    l1.weights(2 * i + 1, i) = -1.0;
    l2.weights(i, 2 * i) = 1.0;
    l2.weights(i, 2 * i + 1) = -1.0;
  }
  net.layers.push_back(std::move(l1));
  net.layers.push_back(std::move(l2));
  return net;
}

}  // namespace relucalc
