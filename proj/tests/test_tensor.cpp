#include <doctest.h>

#include <cmath>

#include "rome/tensor.hpp"
#include "test_util.hpp"

using namespace rome;
using namespace rome::testutil;

TEST_CASE("matmul identity and hand arithmetic") {
    Graph g;
    Tensor eye = g.constant({2, 2}, {1, 0, 0, 1});
    Tensor x = g.constant({2, 3}, {1, 2, 3, 4, 5, 6});
    std::vector<double> prod = g.matmul(eye, x).value();
    CHECK(prod == x.value());

    Tensor a = g.constant({2, 2}, {1, 2, 3, 4});
    Tensor b = g.constant({2, 1}, {1, 1});
    auto c = g.matmul(a, b).value();
    CHECK(c[0] == doctest::Approx(3.0));
    CHECK(c[1] == doctest::Approx(7.0));

    CHECK_THROWS_AS(g.matmul(b, a), DimensionError);
    Tensor bad = g.constant({3, 2}, {1, 2, 3, 4, 5, 6});
    CHECK_THROWS_AS(g.matmul(a, bad), DimensionError);
}

TEST_CASE("matmul gradient matches finite differences") {
    Rng rng(0xA1);
    auto a_data = random_vec(12, rng);
    auto b_data = random_vec(8, rng);

    Graph g;
    Tensor a = g.leaf({3, 4}, a_data, true);
    Tensor b = g.leaf({4, 2}, b_data, true);
    Tensor loss = g.sum(g.matmul(a, b));
    g.backward(loss);

    auto f_a = [&](const std::vector<double>& x) {
        Graph h;
        return h.sum(h.matmul(h.leaf({3, 4}, x, false), h.constant({4, 2}, b_data))).scalar();
    };
    CHECK(max_grad_rel_err(f_a, a_data, a.grad()) < 1e-4);
    auto f_b = [&](const std::vector<double>& x) {
        Graph h;
        return h.sum(h.matmul(h.constant({3, 4}, a_data), h.leaf({4, 2}, x, false))).scalar();
    };
    CHECK(max_grad_rel_err(f_b, b_data, b.grad()) < 1e-4);
}

TEST_CASE("elementwise identities and gradients") {
    Rng rng(0xA2);
    auto a_data = random_vec(6, rng);
    auto b_data = random_vec(6, rng, 0.5, 2.0);  // away from 0 for div

    Graph g;
    Tensor a = g.constant({6}, a_data);
    Tensor zero = g.constant({6}, std::vector<double>(6, 0.0));
    Tensor one = g.constant({6}, std::vector<double>(6, 1.0));
    CHECK(g.add(a, zero).value() == a_data);
    CHECK(g.mul(a, one).value() == a_data);
    CHECK_THROWS_AS(g.div(a, zero), NumericError);
    Tensor short_vec = g.constant({3}, {1, 2, 3});
    CHECK_THROWS_AS(g.add(a, short_vec), DimensionError);

    using Op = Tensor (Graph::*)(Tensor, Tensor);
    for (Op op : {&Graph::add, &Graph::sub, &Graph::mul, &Graph::div}) {
        Graph h;
        Tensor x = h.leaf({6}, a_data, true);
        Tensor y = h.leaf({6}, b_data, true);
        Tensor w = h.constant({6}, random_vec(6, rng));
        Tensor loss = h.sum(h.mul((h.*op)(x, y), w));
        h.backward(loss);
        auto f_x = [&](const std::vector<double>& v) {
            Graph k;
            Tensor xx = k.leaf({6}, v, false);
            Tensor yy = k.constant({6}, b_data);
            return k.sum(k.mul((k.*op)(xx, yy), k.constant({6}, w.value()))).scalar();
        };
        CHECK(max_grad_rel_err(f_x, a_data, x.grad()) < 1e-4);
        auto f_y = [&](const std::vector<double>& v) {
            Graph k;
            Tensor xx = k.constant({6}, a_data);
            Tensor yy = k.leaf({6}, v, false);
            return k.sum(k.mul((k.*op)(xx, yy), k.constant({6}, w.value()))).scalar();
        };
        CHECK(max_grad_rel_err(f_y, b_data, y.grad()) < 1e-4);
    }
}

TEST_CASE("unary ops") {
    Graph g;
    Tensor x = g.constant({2}, {-1.0, 2.0});
    auto r = g.relu(x).value();
    CHECK(r[0] == 0.0);
    CHECK(r[1] == 2.0);

    Rng rng(0xA3);
    auto pos = random_vec(5, rng, 0.1, 3.0);
    Tensor p = g.constant({5}, pos);
    auto roundtrip = g.exp(g.log(p)).value();
    for (std::size_t i = 0; i < pos.size(); ++i) {
        CHECK(roundtrip[i] == doctest::Approx(pos[i]).epsilon(1e-12));
    }
    Tensor nonpos = g.constant({2}, {1.0, 0.0});
    CHECK_THROWS_AS(g.log(nonpos), NumericError);

    auto data = random_vec(5, rng);
    Graph h;
    Tensor y = h.leaf({5}, data, true);
    Tensor loss = h.sum(h.exp(y));
    h.backward(loss);
    auto f = [&](const std::vector<double>& v) {
        Graph k;
        return k.sum(k.exp(k.leaf({5}, v, false))).scalar();
    };
    CHECK(max_grad_rel_err(f, data, y.grad()) < 1e-4);

    Graph s;
    Tensor z = s.leaf({3}, {1.0, -2.0, 3.0}, true);
    Tensor sl = s.sum(s.scale(z, -2.5));
    s.backward(sl);
    for (double gval : z.grad()) CHECK(gval == -2.5);
}

TEST_CASE("softmax simplex, stability, jacobian") {
    Graph g;
    auto u = g.softmax(g.constant({3}, {5.0, 5.0, 5.0}), 1.0).value();
    for (double v : u) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    auto big = g.softmax(g.constant({2}, {1e4, 0.0}), 1.0).value();
    CHECK(big[0] == doctest::Approx(1.0));
    CHECK(big[1] == doctest::Approx(0.0));

    Rng rng(0xA4);
    for (int rep = 0; rep < 20; ++rep) {
        auto logits = random_vec(5, rng, -1e4, 1e4);
        Graph h;
        auto soft = h.softmax(h.constant({5}, logits), 1.0).value();
        double total = 0.0;
        for (double v : soft) {
            CHECK(v >= 0.0);
            total += v;
        }
        CHECK(std::abs(total - 1.0) < 1e-12);
    }

    auto logits = random_vec(4, rng);
    auto w = random_vec(4, rng);
    const double tau = 0.7;
    Graph h;
    Tensor a = h.leaf({4}, logits, true);
    Tensor loss = h.sum(h.mul(h.softmax(a, tau), h.constant({4}, w)));
    h.backward(loss);
    auto f = [&](const std::vector<double>& v) {
        Graph k;
        return k.sum(k.mul(k.softmax(k.leaf({4}, v, false), tau), k.constant({4}, w))).scalar();
    };
    CHECK(max_grad_rel_err(f, logits, a.grad()) < 1e-4);
}

TEST_CASE("cross entropy") {
    Graph g;
    Tensor logits = g.constant({2, 3}, std::vector<double>(6, 0.4));
    Tensor loss = g.cross_entropy(logits, {0, 2});
    CHECK(loss.scalar() == doctest::Approx(std::log(3.0)).epsilon(1e-12));

    // raising the true-class logit lowers the loss monotonically
    double prev = 1e300;
    for (double boost : {0.0, 2.0, 5.0, 20.0}) {
        Graph h;
        Tensor l = h.constant({1, 3}, {boost, 0.0, 0.0});
        double v = h.cross_entropy(l, {0}).scalar();
        CHECK(v < prev);
        prev = v;
    }

    CHECK_THROWS_AS(g.cross_entropy(logits, {0, 3}), ContractError);

    Rng rng(0xA5);
    auto data = random_vec(12, rng);
    std::vector<int> labels = {2, 0, 3};
    Graph h;
    Tensor l = h.leaf({3, 4}, data, true);
    h.backward(h.cross_entropy(l, labels));
    auto f = [&](const std::vector<double>& v) {
        Graph k;
        return k.cross_entropy(k.leaf({3, 4}, v, false), labels).scalar();
    };
    CHECK(max_grad_rel_err(f, data, l.grad()) < 1e-4);
}

TEST_CASE("backward contract") {
    Graph g;
    Tensor x = g.leaf({4}, {1, 2, 3, 4}, true);
    Tensor disconnected = g.leaf({2}, {7, 8}, true);
    Tensor loss = g.sum(x);
    g.backward(loss);
    for (double v : x.grad()) CHECK(v == 1.0);
    for (double v : disconnected.grad()) CHECK(v == 0.0);

    CHECK_THROWS_AS(g.backward(x), ContractError);
}

TEST_CASE("three-layer composite gradient and determinism") {
    Rng rng(0xA6);
    auto w1 = random_vec(8, rng), w2 = random_vec(8, rng), w3 = random_vec(4, rng);
    auto x = random_vec(4, rng);
    std::vector<int> labels = {1};

    auto build = [&](Graph& g, const std::vector<double>& w1v, bool rg) {
        Tensor xin = g.constant({1, 4}, x);
        Tensor W1 = g.leaf({4, 2}, w1v, rg);
        Tensor W2 = g.constant({2, 4}, w2);
        Tensor W3 = g.constant({4, 4}, {w3[0], 0, 0, 0, 0, w3[1], 0, 0, 0, 0, w3[2], 0, 0, 0, 0,
                                        w3[3]});
        Tensor h1 = g.relu(g.matmul(xin, W1));
        Tensor h2 = g.relu(g.matmul(h1, W2));
        Tensor logits = g.matmul(h2, W3);
        return std::pair{g.cross_entropy(logits, labels), W1};
    };

    Graph g;
    auto [loss, W1] = build(g, w1, true);
    g.backward(loss);
    auto f = [&](const std::vector<double>& v) {
        Graph k;
        return build(k, v, false).first.scalar();
    };
    CHECK(max_grad_rel_err(f, w1, W1.grad()) < 1e-4);

    // two identical replays produce bitwise-identical gradients
    Graph g2;
    auto [loss2, W1b] = build(g2, w1, true);
    g2.backward(loss2);
    CHECK(W1.grad() == W1b.grad());
}

TEST_CASE("stop_gradient and straight-through identity") {
    Graph g;
    Tensor x = g.leaf({3}, {1.0, 2.0, 3.0}, true);
    Tensor sg = g.stop_gradient(x);
    CHECK(sg.value() == x.value());

    Tensor loss = g.sum(sg);
    g.backward(loss);
    for (double v : x.grad()) CHECK(v == 0.0);

    // y = x + stop_gradient(h - x): value h, gradient 1
    Graph k;
    Tensor xs = k.leaf({2}, {0.3, 0.7}, true);
    Tensor h = k.constant({2}, {1.0, 0.0});
    Tensor y = k.add(xs, k.stop_gradient(k.sub(h, xs)));
    CHECK(y.value() == h.value());
    k.backward(k.sum(y));
    for (double v : xs.grad()) CHECK(v == 1.0);
}

TEST_CASE("expand, element, mul_scalar, add_rowvec, concat_cols") {
    Graph g;
    Tensor s = g.leaf({}, {2.5}, true);
    Tensor e = g.expand(s, {2, 2});
    CHECK(e.value() == std::vector<double>{2.5, 2.5, 2.5, 2.5});
    g.backward(g.sum(e));
    CHECK(s.grad()[0] == 4.0);

    Graph k;
    Tensor v = k.leaf({3}, {1.0, 2.0, 3.0}, true);
    Tensor picked = k.element(v, 1);
    CHECK(picked.scalar() == 2.0);
    Tensor x = k.leaf({2, 2}, {1, 1, 1, 1}, true);
    Tensor scaled = k.mul_scalar(x, picked);
    Tensor row = k.leaf({2}, {10.0, 20.0}, true);
    Tensor shifted = k.add_rowvec(scaled, row);
    Tensor cat = k.concat_cols({shifted, x});
    CHECK(cat.shape() == Shape{2, 4});
    k.backward(k.sum(cat));
    CHECK(v.grad() == std::vector<double>{0.0, 4.0, 0.0});
    CHECK(row.grad() == std::vector<double>{2.0, 2.0});
    for (double gv : x.grad()) CHECK(gv == 3.0);
}

TEST_CASE("non-finite results are refused") {
    Graph g;
    Tensor big = g.constant({1}, {1e308});
    CHECK_THROWS_AS(g.mul(big, big), NumericError);
}
