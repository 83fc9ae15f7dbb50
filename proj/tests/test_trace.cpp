#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "relucalc/analysis.hpp"
#include "relucalc/calculus.hpp"
#include "relucalc/core.hpp"
#include "relucalc/periodic.hpp"
#include "relucalc/trace.hpp"
#include "test_util.hpp"

using namespace relucalc;

TEST_CASE("trace of an affine restriction is one piece") {
  const PwlTrace trace = exact_line_trace(identity_net(1), {-1.0}, {1.0});
  CHECK(count_pieces(trace) == 1);
  CHECK(trace.value_at(0.25) == Catch::Approx(-0.5).margin(1e-12));
}

TEST_CASE("trace of ReLU has two pieces with the breakpoint at the kink") {
  Network relu;  // x -> max(x, 0) written as a 2-layer net
  Layer l1, l2;
  l1.weights = Matrix(1, 1);
  l1.weights(0, 0) = 1.0;
  l1.bias = {0.0};
  l2.weights = Matrix(1, 1);
  l2.weights(0, 0) = 1.0;
  l2.bias = {0.0};
  relu.layers = {l1, l2};
  const PwlTrace trace = exact_line_trace(relu, {-1.0}, {1.0});
  REQUIRE(count_pieces(trace) == 2);
  CHECK(trace.breakpoints[1] == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("trace of the depth-2 sawtooth has 8 pieces on [0,1]") {
  const Network saw = sawtooth_net(1.0, 2).net;
  const PwlTrace trace = exact_line_trace(saw, {0.0}, {1.0});
  CHECK(count_pieces(trace) == 8);
  CHECK(sampled_kink_count(saw, {0.0}, {1.0}, 100000) == 8);
}

TEST_CASE("sawtooth piece counts double per layer") {
  for (int64_t n = 0; n <= 5; ++n) {
    const Network saw = sawtooth_net(1.0, n).net;
    CHECK(count_pieces(exact_line_trace(saw, {0.0}, {1.0})) == (int64_t(1) << (n + 1)));
  }
}

TEST_CASE("trace rejects invalid segments") {
  CHECK_THROWS_AS(exact_line_trace(identity_net(1), {0.5}, {0.5}), domain_error);
  CHECK_THROWS_AS(exact_line_trace(identity_net(1), {0.0, 0.0}, {1.0, 1.0}), shape_error);
  CHECK_THROWS_AS(exact_line_trace(identity_net(2), {0.0, 0.0}, {1.0, 1.0}), shape_error);
}

TEST_CASE("trace matches dense sampling on random nets") {
  std::mt19937_64 rng(71);
  for (int rep = 0; rep < 100; ++rep) {
    const auto dims = testutil::random_dims(rng, 32, 4, -1, 1);
    const Network net = testutil::random_net(rng, dims);
    const auto p = testutil::random_point(rng, net.in_dim(), -3.0, 3.0);
    const auto q = testutil::random_point(rng, net.in_dim(), -3.0, 3.0);
    bool distinct = false;
    for (size_t j = 0; j < p.size(); ++j) distinct |= p[j] != q[j];
    if (!distinct) continue;
    const PwlTrace trace = exact_line_trace(net, p, q);

    // Trace values agree with forward passes along the segment.
    std::vector<double> x(p.size());
    for (int s = 0; s <= 500; ++s) {
      const double t = double(s) / 500.0;
      for (size_t j = 0; j < p.size(); ++j) x[j] = p[j] + t * (q[j] - p[j]);
      const double direct = realize(net, x)[0];
      REQUIRE(std::abs(trace.value_at(t) - direct) <= 1e-9 * std::max(1.0, std::abs(direct)));
    }

    // The exact trace never reports fewer pieces than the sampling oracle,
    // and never exceeds the structural piece bound.
    const Metrics m = metrics(net);
    const int64_t pieces = count_pieces(trace);
    REQUIRE(pieces >= sampled_kink_count(net, p, q, 100000));
    REQUIRE(double(pieces) <= piece_bound(m.param_count, m.hidden_length));
  }
}

TEST_CASE("depth-2 traces have at most width+1 pieces") {
  std::mt19937_64 rng(72);
  for (int rep = 0; rep < 100; ++rep) {
    const int64_t w = std::uniform_int_distribution<int64_t>(1, 24)(rng);
    const int64_t d = std::uniform_int_distribution<int64_t>(1, 4)(rng);
    const Network net = testutil::random_net(rng, {d, w, 1});
    const auto p = testutil::random_point(rng, d, -3.0, 3.0);
    const auto q = testutil::random_point(rng, d, -3.0, 3.0);
    if (p == q) continue;
    CHECK(count_pieces(exact_line_trace(net, p, q)) <= w + 1);
  }
}
