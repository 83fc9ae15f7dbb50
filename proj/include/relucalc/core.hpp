#pragma once

// Structured representation of feed-forward ReLU networks as finite lists of
// affine layers, plus the basic structural functionals (parameter count,
// length, layer dims, size norms) and forward evaluation.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace relucalc {

using std::int64_t;

struct error : std::runtime_error {
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Dimension mismatch between layers, inputs, or outputs.
struct shape_error : error {
  explicit shape_error(const std::string& what) : error(what) {}
};

// Argument outside the documented domain of an operation.
struct domain_error : error {
  explicit domain_error(const std::string& what) : error(what) {}
};

// Violated precondition of a construction (e.g. target function contract).
struct contract_error : error {
  explicit contract_error(const std::string& what) : error(what) {}
};

// Malformed serialized network or report.
struct parse_error : error {
  explicit parse_error(const std::string& what) : error(what) {}
};

// Dense row-major matrix. Networks here are narrow, so no sparse storage.
struct Matrix {
  int64_t rows = 0;
  int64_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int64_t r, int64_t c) : rows(r), cols(c), data(static_cast<size_t>(r * c), 0.0) {}

  double& operator()(int64_t i, int64_t j) { return data[static_cast<size_t>(i * cols + j)]; }
  double operator()(int64_t i, int64_t j) const { return data[static_cast<size_t>(i * cols + j)]; }
};

struct Layer {
  Matrix weights;            // l_k x l_{k-1}
  std::vector<double> bias;  // l_k
};

// A network is the ordered list of its affine layers. Value object: the
// calculus operations never mutate their arguments.
struct Network {
  std::vector<Layer> layers;

  int64_t length() const { return static_cast<int64_t>(layers.size()); }
  int64_t in_dim() const { return layers.front().weights.cols; }
  int64_t out_dim() const { return layers.back().weights.rows; }
};

struct Metrics {
  int64_t param_count = 0;
  int64_t length = 0;
  int64_t hidden_length = 0;
  std::vector<int64_t> dims;  // l_0 .. l_L
  double size_norm = 0.0;
  double in_size = 0.0;
  double out_size = 0.0;
  double ent = 0.0;  // max{1, ln(size_norm)} * param_count
};

inline void validate(const Network& net) {
  if (net.layers.empty()) throw shape_error("network must have at least one layer");
  for (size_t k = 0; k < net.layers.size(); ++k) {
    const Layer& layer = net.layers[k];
    if (layer.weights.rows < 1 || layer.weights.cols < 1)
      throw shape_error("layer " + std::to_string(k + 1) + ": empty weight matrix");
    if (static_cast<int64_t>(layer.bias.size()) != layer.weights.rows)
      throw shape_error("layer " + std::to_string(k + 1) + ": bias length does not match rows");
    if (static_cast<int64_t>(layer.weights.data.size()) != layer.weights.rows * layer.weights.cols)
      throw shape_error("layer " + std::to_string(k + 1) + ": weight buffer size mismatch");
    if (k > 0 && layer.weights.cols != net.layers[k - 1].weights.rows)
      throw shape_error("layer " + std::to_string(k + 1) + ": input width does not chain");
    for (double w : layer.weights.data)
      if (!std::isfinite(w)) throw shape_error("layer " + std::to_string(k + 1) + ": non-finite weight");
    for (double b : layer.bias)
      if (!std::isfinite(b)) throw shape_error("layer " + std::to_string(k + 1) + ": non-finite bias");
  }
}

namespace detail {

inline double sup_norm(const Matrix& m) {
  double s = 0.0;
  for (double v : m.data) s = std::max(s, std::abs(v));
  return s;
}

inline double sup_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

inline double layer_size(const Layer& layer) {
  return std::max(sup_norm(layer.weights), sup_norm(layer.bias));
}

}  // namespace detail

inline Metrics metrics(const Network& net) {
  Metrics m;
  m.length = net.length();
  m.hidden_length = m.length - 1;
  m.dims.reserve(static_cast<size_t>(m.length) + 1);
  m.dims.push_back(net.layers.front().weights.cols);
  for (const Layer& layer : net.layers) m.dims.push_back(layer.weights.rows);
  for (int64_t k = 1; k <= m.length; ++k)
    m.param_count += m.dims[static_cast<size_t>(k)] * (m.dims[static_cast<size_t>(k - 1)] + 1);
  for (const Layer& layer : net.layers) m.size_norm = std::max(m.size_norm, detail::layer_size(layer));
  // Boundary sizes select layer r*H + 1; for a single-layer network both
  // ends coincide with that one layer.
  m.in_size = detail::layer_size(net.layers.front());
  m.out_size = detail::layer_size(net.layers.back());
  m.ent = std::max(1.0, std::log(m.size_norm)) * static_cast<double>(m.param_count);
  return m;
}

// Forward pass: componentwise max{.,0} after every layer except the last.
inline std::vector<double> realize(const Network& net, const std::vector<double>& x) {
  if (static_cast<int64_t>(x.size()) != net.in_dim())
    throw shape_error("realize: input has length " + std::to_string(x.size()) + ", expected " +
                      std::to_string(net.in_dim()));
  std::vector<double> cur = x;
  std::vector<double> next;
  const int64_t L = net.length();
  for (int64_t k = 0; k < L; ++k) {
    const Layer& layer = net.layers[static_cast<size_t>(k)];
    const int64_t rows = layer.weights.rows, cols = layer.weights.cols;
    next.assign(static_cast<size_t>(rows), 0.0);
    for (int64_t i = 0; i < rows; ++i) {
      double acc = 0.0;
      const double* w = layer.weights.data.data() + i * cols;
      for (int64_t j = 0; j < cols; ++j) acc += w[j] * cur[static_cast<size_t>(j)];
      acc += layer.bias[static_cast<size_t>(i)];
      next[static_cast<size_t>(i)] = (k + 1 < L) ? (acc > 0.0 ? acc : 0.0) : acc;
    }
    cur.swap(next);
  }
  return cur;
}

inline double realize_scalar(const Network& net, const std::vector<double>& x) {
  if (net.out_dim() != 1) throw shape_error("realize_scalar: network output is not scalar");
  return realize(net, x)[0];
}

inline double realize_scalar(const Network& net, double x) {
  return realize_scalar(net, std::vector<double>{x});
}

// Batched forward pass over n inputs stored row-major in xs (n x in_dim).
// Same per-sample operation order as realize, so results agree bitwise.
inline std::vector<double> realize_batch(const Network& net, const double* xs, int64_t n) {
  const int64_t d = net.in_dim();
  std::vector<double> cur(xs, xs + n * d);
  std::vector<double> next;
  const int64_t L = net.length();
  int64_t width = d;
  for (int64_t k = 0; k < L; ++k) {
    const Layer& layer = net.layers[static_cast<size_t>(k)];
    const int64_t rows = layer.weights.rows, cols = layer.weights.cols;
    next.assign(static_cast<size_t>(n * rows), 0.0);
    const bool relu = (k + 1 < L);
    for (int64_t s = 0; s < n; ++s) {
      const double* in = cur.data() + s * width;
      double* out = next.data() + s * rows;
      for (int64_t i = 0; i < rows; ++i) {
        double acc = 0.0;
        const double* w = layer.weights.data.data() + i * cols;
        for (int64_t j = 0; j < cols; ++j) acc += w[j] * in[j];
        acc += layer.bias[static_cast<size_t>(i)];
        out[i] = relu ? (acc > 0.0 ? acc : 0.0) : acc;
      }
    }
    cur.swap(next);
    width = rows;
  }
  return cur;
}

inline std::vector<double> realize_batch(const Network& net, const std::vector<double>& xs, int64_t n) {
  if (static_cast<int64_t>(xs.size()) < n * net.in_dim())
    throw shape_error("realize_batch: buffer too small");
  return realize_batch(net, xs.data(), n);
}

}  // namespace relucalc
