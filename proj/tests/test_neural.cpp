#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>

#include "commlab/neural/adam.hpp"
#include "commlab/neural/mlp.hpp"
#include "commlab/neural/qhead.hpp"
#include "commlab/neural/replay.hpp"
#include "oracles.hpp"

using namespace commlab;
using namespace commlab::neural;

namespace {

// 1-1-1 net with the given weights.
Mlp tiny(double w1, double b1, double w2, double b2) {
  auto net = Mlp::zeros(1, 1, 1);
  auto p = net.mutable_parameters();
  p[0] = w1;
  p[1] = b1;
  p[2] = w2;
  p[3] = b2;
  return net;
}

Transition numbered(int i) {
  Transition t;
  t.move = i % 5;
  t.reward = i;
  return t;
}

}  // namespace

TEST_CASE("mlp_init shapes, bounds and determinism") {
  Rng rng(1);
  const auto net = Mlp::init(8, 32, 5, rng);
  CHECK(net.w1().size() == 8 * 32);
  CHECK(net.b1().size() == 32);
  CHECK(net.w2().size() == 32 * 5);
  CHECK(net.b2().size() == 5);
  for (double w : net.w1()) CHECK(std::abs(w) <= 1.0 / std::sqrt(8.0));
  for (double w : net.w2()) CHECK(std::abs(w) <= 1.0 / std::sqrt(32.0));
  for (double b : net.b1()) CHECK(b == 0.0);
  for (double b : net.b2()) CHECK(b == 0.0);

  Rng again(1);
  CHECK(Mlp::init(8, 32, 5, again) == net);
  CHECK_THROWS_AS(Mlp::init(0, 32, 5, rng), std::invalid_argument);
  CHECK_THROWS_AS(Mlp::init(8, 0, 5, rng), std::invalid_argument);
  CHECK_THROWS_AS(Mlp::init(8, 32, 0, rng), std::invalid_argument);
}

TEST_CASE("forward examples") {
  const auto zeros = Mlp::zeros(8, 32, 5);
  const std::vector<double> x(8, 0.7);
  for (double o : zeros.predict(x)) CHECK(o == 0.0);

  const auto net = tiny(2, 1, 3, 0);
  CHECK(net.predict(std::vector<double>{1.0})[0] == 9.0);
  CHECK(net.predict(std::vector<double>{-1.0})[0] == 0.0);
  CHECK_THROWS_AS(net.forward(std::vector<double>{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("backward: zero output gradient gives zero parameter gradients") {
  Rng rng(3);
  const auto net = Mlp::init(8, 32, 5, rng);
  MlpGradients g(net.shape());
  net.backward(net.forward(std::vector<double>(8, 0.3)), std::vector<double>(5, 0.0), g);
  for (double v : g.values) CHECK(v == 0.0);
}

TEST_CASE("backward: a dead ReLU unit passes no gradient") {
  const auto net = tiny(2, 1, 3, 0);
  MlpGradients g(net.shape());
  net.backward(net.forward(std::vector<double>{-1.0}), std::vector<double>{1.0}, g);
  // w1, b1, w2 see nothing; only the output bias does.
  CHECK(g.values[0] == 0.0);
  CHECK(g.values[1] == 0.0);
  CHECK(g.values[2] == 0.0);
  CHECK(g.values[3] == 1.0);
}

TEST_CASE("backward rejects stale or foreign caches") {
  Rng rng(5);
  auto net = Mlp::init(3, 4, 2, rng);
  const auto cache = net.forward(std::vector<double>{1, 2, 3});
  MlpGradients g(net.shape());
  net.mutable_parameters()[0] += 0.1;
  CHECK_THROWS_AS(net.backward(cache, std::vector<double>{1, 1}, g), std::invalid_argument);

  const auto other = Mlp::init(3, 5, 2, rng);
  const auto other_cache = other.forward(std::vector<double>{1, 2, 3});
  CHECK_THROWS_AS(net.backward(other_cache, std::vector<double>{1, 1}, g),
                  std::invalid_argument);
}

TEST_CASE("property: analytic gradients match central finite differences") {
  Rng rng(2718);
  int checked = 0;
  while (checked < 100) {
    const std::size_t in = 1 + rng.index(8), hidden = 1 + rng.index(8), out = 1 + rng.index(5);
    const auto net = Mlp::init(in, hidden, out, rng);
    std::vector<double> x(in), g(out);
    for (auto& v : x) v = rng.uniform(-1, 1);
    for (auto& v : g) v = rng.uniform(-1, 1);
    const auto cache = net.forward(x);
    // Finite differences are meaningless across a ReLU kink.
    bool near_kink = false;
    for (double z : cache.hidden_pre) near_kink |= std::abs(z) < 1e-3;
    if (near_kink) continue;

    MlpGradients analytic(net.shape());
    net.backward(cache, g, analytic);
    const auto numeric = oracle::finite_difference_gradient(net, x, g);
    for (std::size_t i = 0; i < numeric.size(); ++i) {
      const double a = analytic.values[i], n = numeric[i];
      const double scale = std::max(std::abs(a), std::abs(n));
      CAPTURE(i);
      CHECK((std::abs(a - n) <= 1e-4 * scale || std::abs(a - n) < 1e-9));
    }
    ++checked;
  }
}

TEST_CASE("adam: zero gradients leave parameters unchanged and count the step") {
  Rng rng(11);
  auto net = Mlp::init(8, 32, 5, rng);
  const auto before = net;
  AdamState state(net.shape());
  adam_step(net, MlpGradients(net.shape()), state, 1e-3);
  CHECK(state.t == 1);
  CHECK(net == before);
}

TEST_CASE("adam: first step moves each parameter by about lr") {
  Rng rng(12);
  auto net = Mlp::init(2, 3, 2, rng);
  const auto before = net;
  AdamState state(net.shape());
  MlpGradients g(net.shape());
  for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] = (i % 2 ? 0.37 : -5.0);
  adam_step(net, g, state, 1e-3);
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    const double delta = net.parameters()[i] - before.parameters()[i];
    CHECK(std::abs(std::abs(delta) - 1e-3) < 1e-8);
    CHECK((delta < 0) == (g.values[i] > 0));
  }
}

TEST_CASE("adam converges on (w - 3)^2 like the textbook iteration") {
  // w is the output bias of a 1-1-1 net; the other parameters get no gradient.
  auto net = tiny(0, 0, 0, 0);
  AdamState state(net.shape());
  const int steps = 20000;
  for (int t = 0; t < steps; ++t) {
    MlpGradients g(net.shape());
    g.values[3] = 2.0 * (net.parameters()[3] - 3.0);
    adam_step(net, g, state, 1e-3);
  }
  const double w = net.parameters()[3];
  CHECK(std::abs(w - 3.0) < 0.01);
  CHECK(w == doctest::Approx(oracle::adam_quadratic(0.0, 3.0, 1e-3, steps)).epsilon(1e-12));
  CHECK(state.t == static_cast<std::uint64_t>(steps));
}

TEST_CASE("adam rejects mismatched shapes") {
  auto net = Mlp::zeros(2, 2, 2);
  AdamState state(net.shape());
  CHECK_THROWS_AS(adam_step(net, MlpGradients(Mlp::zeros(2, 3, 2).shape()), state, 1e-3),
                  std::invalid_argument);
}

TEST_CASE("property: one small Adam step decreases a convex regression loss") {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    auto net = Mlp::init(3, 6, 2, rng);
    std::vector<std::vector<double>> xs(16, std::vector<double>(3));
    std::vector<double> ys(16);
    for (auto& x : xs) {
      for (auto& v : x) v = rng.uniform(-1, 1);
    }
    for (auto& y : ys) y = rng.uniform(-2, 2);
    const auto loss_and_grad = [&](const Mlp& m, MlpGradients* g) {
      double loss = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto c = m.forward(xs[i]);
        const double d = c.output[0] - ys[i];
        loss += d * d / xs.size();
        if (g) m.backward(c, std::vector<double>{2 * d / xs.size(), 0.0}, *g);
      }
      return loss;
    };
    MlpGradients g(net.shape());
    const double before = loss_and_grad(net, &g);
    AdamState state(net.shape());
    adam_step(net, g, state, 1e-4);
    CHECK(loss_and_grad(net, nullptr) < before);
  }
}

TEST_CASE("qhead refreshes its target network on schedule") {
  Rng rng(4);
  auto head = QHead::create(2, 3, 2, rng);
  MlpGradients g(head.online.shape());
  std::fill(g.values.begin(), g.values.end(), 1.0);
  const auto initial = head.target;
  head.apply(g, 1e-2, 3);
  head.apply(g, 1e-2, 3);
  CHECK(head.target == initial);
  CHECK(&head.bootstrap(3) == &head.target);
  head.apply(g, 1e-2, 3);
  CHECK(head.target == head.online);
  CHECK(&head.bootstrap(0) == &head.online);
}

TEST_CASE("replay buffer evicts the oldest transition when full") {
  ReplayBuffer buf(2000);
  for (int i = 0; i < 2001; ++i) buf.push(numbered(i));
  CHECK(buf.size() == 2000);
  CHECK(buf.at(0) == numbered(1));
  CHECK(buf.at(1999) == numbered(2000));
}

TEST_CASE("replay buffer keeps insertion order until eviction") {
  ReplayBuffer buf(4);
  for (int i = 0; i < 3; ++i) buf.push(numbered(i));
  for (int i = 0; i < 3; ++i) CHECK(buf.at(i) == numbered(i));
  for (int i = 3; i < 6; ++i) buf.push(numbered(i));
  for (int i = 0; i < 4; ++i) CHECK(buf.at(i) == numbered(i + 2));
  CHECK_THROWS_AS(buf.at(4), std::out_of_range);
}

TEST_CASE("replay sampling") {
  Rng rng(8);
  ReplayBuffer one(10);
  one.push(numbered(42));
  const auto single = one.sample(1, rng);
  REQUIRE(single);
  CHECK(single->front() == numbered(42));

  ReplayBuffer buf(2000);
  for (int i = 0; i < 31; ++i) buf.push(numbered(i));
  CHECK_FALSE(buf.sample(32, rng).has_value());
  for (int i = 31; i < 2000; ++i) buf.push(numbered(i));
  const auto batch = buf.sample(32, rng);
  REQUIRE(batch);
  CHECK(batch->size() == 32);
  for (const auto& t : *batch) {
    CHECK(t.reward >= 0);
    CHECK(t.reward < 2000);
    CHECK(t == numbered(static_cast<int>(t.reward)));
  }

  Rng a(5), b(5);
  CHECK(*buf.sample(32, a) == *buf.sample(32, b));
}

TEST_CASE("replay sampling is uniform across slots") {
  ReplayBuffer buf(16);
  for (int i = 0; i < 16; ++i) buf.push(numbered(i));
  Rng rng(31);
  std::vector<int> counts(16, 0);
  const int draws = 160000;
  for (int k = 0; k < draws / 16; ++k) {
    for (const auto& t : *buf.sample(16, rng)) ++counts[static_cast<int>(t.reward)];
  }
  const double expected = draws / 16.0;
  const double sigma = std::sqrt(draws * (1.0 / 16) * (15.0 / 16));
  for (int c : counts) CHECK(std::abs(c - expected) <= 3 * sigma);
}
