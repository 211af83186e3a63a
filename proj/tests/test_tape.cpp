#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "provcf/adam.hpp"
#include "provcf/rng.hpp"
#include "provcf/tape.hpp"

#include "oracles.hpp"

using namespace provcf;
using Catch::Approx;

namespace {

Tensor random_param(std::size_t r, std::size_t c, Rng& rng, double lo = -1.0, double hi = 1.0) {
    Tensor t(r, c);
    for (auto& x : t.data) x = rng.uniform(lo, hi);
    t.set_requires_grad();
    return t;
}

// keep values away from the relu/leaky kink so finite differences are clean
Tensor random_param_offzero(std::size_t r, std::size_t c, Rng& rng) {
    Tensor t(r, c);
    for (auto& x : t.data) {
        const double v = rng.uniform(0.15, 1.0);
        x = rng.uniform() < 0.5 ? -v : v;
    }
    t.set_requires_grad();
    return t;
}

} // namespace

TEST_CASE("sigmoid basics") {
    Tape t;
    Var x = t.constant(Tensor::full(1, 1, 0.0));
    Var y = t.sigmoid(x);
    REQUIRE(t.val(y).at(0, 0) == Approx(0.5));

    Tensor p = Tensor::full(1, 1, 0.0);
    p.set_requires_grad();
    Tape t2;
    Var lx = t2.leaf(p);
    Var ly = t2.sigmoid(lx);
    t2.backward(ly);
    REQUIRE(p.grad[0] == Approx(0.25));
}

TEST_CASE("backward accumulates; second pass doubles leaf grads") {
    Rng rng(7);
    Tensor a = random_param(3, 3, rng);
    Tape t;
    Var la = t.leaf(a);
    Var loss = t.sum(t.mul(la, la));
    t.backward(loss);
    const std::vector<double> once = a.grad;
    t.backward(loss);
    for (std::size_t k = 0; k < once.size(); ++k) REQUIRE(a.grad[k] == Approx(2.0 * once[k]));
}

TEST_CASE("shape mismatch errors name the primitive") {
    Tape t;
    Var a = t.constant(Tensor::zeros(2, 3));
    Var b = t.constant(Tensor::zeros(2, 3));
    try {
        (void)t.matmul(a, b);
        FAIL("expected ShapeError");
    } catch (const ShapeError& e) {
        REQUIRE(std::string(e.what()).find("matmul") != std::string::npos);
    }
    REQUIRE_THROWS_AS(t.mul(a, t.constant(Tensor::zeros(3, 2))), ShapeError);
    REQUIRE_THROWS_AS(t.concat_cols(a, t.constant(Tensor::zeros(3, 3))), ShapeError);
}

TEST_CASE("forward is deterministic for fixed inputs") {
    Rng rng(11);
    Tensor a = random_param(4, 5, rng);
    Tensor b = random_param(5, 3, rng);
    auto run = [&]() {
        Tape t;
        Var r = t.sum(t.sigmoid(t.matmul(t.leaf(a), t.leaf(b))));
        return t.val(r).at(0, 0);
    };
    const double v1 = run();
    const double v2 = run();
    REQUIRE(std::memcmp(&v1, &v2, sizeof v1) == 0);
}

TEST_CASE("gradients match central finite differences per primitive") {
    Rng rng(42);

    SECTION("matmul + add bias + sigmoid") {
        Tensor a = random_param(4, 3, rng);
        Tensor b = random_param(3, 5, rng);
        Tensor bias = random_param(1, 5, rng);
        auto check = oracles::finite_diff_check({&a, &b, &bias}, [&](Tape& t) {
            return t.sum(t.sigmoid(t.add(t.matmul(t.leaf(a), t.leaf(b)), t.leaf(bias))));
        });
        INFO("max rel err " << check.max_rel_err);
        REQUIRE(check.failures == 0);
    }

    SECTION("hadamard, sub, scale, add_scalar") {
        Tensor a = random_param(3, 4, rng);
        Tensor b = random_param(3, 4, rng);
        auto check = oracles::finite_diff_check({&a, &b}, [&](Tape& t) {
            Var m = t.mul(t.leaf(a), t.leaf(b));
            Var s = t.sub(m, t.scale(t.leaf(b), 0.3));
            return t.sum(t.add_scalar(s, 1.5));
        });
        REQUIRE(check.failures == 0);
    }

    SECTION("relu and leaky_relu away from the kink") {
        Tensor a = random_param_offzero(4, 4, rng);
        auto check = oracles::finite_diff_check({&a}, [&](Tape& t) {
            return t.sum(t.add(t.relu(t.leaf(a)), t.leaky_relu(t.leaf(a), 0.2)));
        });
        REQUIRE(check.failures == 0);
    }

    SECTION("exp, log, pow on positive inputs") {
        Tensor a = random_param(3, 3, rng, 0.2, 2.0);
        auto check = oracles::finite_diff_check({&a}, [&](Tape& t) {
            Var l = t.leaf(a);
            return t.sum(t.add(t.exp_(t.scale(l, 0.5)), t.add(t.log_(l), t.pow_(l, -0.5))));
        });
        REQUIRE(check.failures == 0);
    }

    SECTION("transpose, row_softmax, pick") {
        Tensor a = random_param(4, 3, rng);
        auto check = oracles::finite_diff_check({&a}, [&](Tape& t) {
            Var sm = t.row_softmax(t.transpose(t.leaf(a)));
            return t.pick(sm, 1, 2);
        });
        REQUIRE(check.failures == 0);
    }

    SECTION("masked_row_softmax over a fixed support") {
        Tensor a = random_param(4, 4, rng);
        Tensor support(4, 4);
        Rng srng(5);
        for (auto& s : support.data) s = srng.uniform() < 0.5 ? 1.0 : 0.0;
        support.at(2, 0) = 1.0; // keep at least one nonempty row entry
        Tensor weights = random_param(4, 4, rng);
        auto check = oracles::finite_diff_check({&a}, [&](Tape& t) {
            Var sm = t.masked_row_softmax(t.leaf(a), support);
            return t.sum(t.mul(sm, t.constant(weights)));
        });
        REQUIRE(check.failures == 0);
    }

    SECTION("mean_rows, row_sum, scale_rows, scale_cols, concat_cols") {
        Tensor a = random_param(4, 3, rng);
        Tensor s = random_param(4, 1, rng, 0.5, 1.5);
        Tensor c = random_param(3, 1, rng, 0.5, 1.5);
        auto check = oracles::finite_diff_check({&a, &s, &c}, [&](Tape& t) {
            Var la = t.leaf(a);
            Var scaled = t.scale_cols(t.scale_rows(la, t.leaf(s)), t.leaf(c));
            Var cat = t.concat_cols(scaled, t.row_sum(la));
            return t.sum(t.mean_rows(cat));
        });
        REQUIRE(check.failures == 0);
    }

    SECTION("bce against a 0/1 target") {
        Rng prng(9);
        Tensor p(6, 1);
        for (auto& x : p.data) x = prng.uniform(0.05, 0.95);
        p.set_requires_grad();
        Tensor target(6, 1);
        for (auto& x : target.data) x = prng.uniform() < 0.5 ? 0.0 : 1.0;
        auto check = oracles::finite_diff_check(
            {&p}, [&](Tape& t) { return t.bce(t.leaf(p), target); });
        REQUIRE(check.failures == 0);
    }

    SECTION("dropout with a replayed mask") {
        Tensor a = random_param(5, 5, rng);
        auto check = oracles::finite_diff_check({&a}, [&](Tape& t) {
            Rng drng(123); // same mask every call
            return t.sum(t.dropout(t.leaf(a), 0.4, drng));
        });
        REQUIRE(check.failures == 0);
    }

    SECTION("scatter_edges with shared sources") {
        Tensor vals = random_param(3, 1, rng);
        std::vector<ScatterCell> cells{{0, 1, 0}, {1, 0, 0}, {1, 2, 1}, {2, 1, 1}, {0, 2, 2}};
        Tensor weights = random_param(3, 3, rng);
        auto check = oracles::finite_diff_check({&vals}, [&](Tape& t) {
            Var m = t.scatter_edges(t.leaf(vals), cells, 3);
            return t.sum(t.mul(m, t.constant(weights)));
        });
        REQUIRE(check.failures == 0);
    }
}

TEST_CASE("scatter_edges leaves off-support cells exactly zero") {
    Rng rng(3);
    Tensor vals = random_param(2, 1, rng);
    std::vector<ScatterCell> cells{{0, 1, 0}, {2, 0, 1}};
    Tape t;
    Var m = t.scatter_edges(t.leaf(vals), cells, 3);
    const Tensor& out = t.val(m);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            const bool on = (i == 0 && j == 1) || (i == 2 && j == 0);
            if (!on) REQUIRE(out.at(i, j) == 0.0);
        }
}

TEST_CASE("adam: zero gradient leaves parameter unchanged") {
    Tensor p = Tensor::full(1, 1, 0.7);
    p.set_requires_grad();
    AdamOptimizer opt({0.01, 0.9, 0.999, 1e-8}, {&p});
    opt.zero_grad();
    opt.step();
    REQUIRE(p.at(0, 0) == Approx(0.7));
}

TEST_CASE("adam: constant gradient moves opposite its sign") {
    Tensor p = Tensor::full(1, 1, 0.0);
    p.set_requires_grad();
    AdamOptimizer opt({0.01, 0.9, 0.999, 1e-8}, {&p});
    for (int i = 0; i < 20; ++i) {
        p.zero_grad();
        p.grad[0] = 2.5;
        opt.step();
    }
    REQUIRE(p.at(0, 0) < 0.0);
}

TEST_CASE("adam matches an independent scalar transcription on x^2") {
    Tensor p = Tensor::full(1, 1, 1.0);
    p.set_requires_grad();
    AdamOptimizer opt({0.01, 0.9, 0.999, 1e-8}, {&p});
    oracles::ScalarAdam ref{0.01, 0.9, 0.999, 1e-8};
    double x_ref = 1.0;
    for (int i = 0; i < 200; ++i) {
        p.zero_grad();
        Tape t;
        Var l = t.mul(t.leaf(p), t.leaf(p));
        t.backward(Var{l.id});
        opt.step();
        x_ref = ref.step(x_ref, 2.0 * x_ref);
        REQUIRE(p.at(0, 0) == Approx(x_ref).margin(1e-12));
    }
    REQUIRE(std::fabs(p.at(0, 0)) < 0.1);
}

TEST_CASE("adam without gradients is a contract error") {
    Tensor p = Tensor::full(2, 2, 1.0);
    p.set_requires_grad();
    AdamOptimizer opt({0.01, 0.9, 0.999, 1e-8}, {&p});
    p.grad.clear();
    REQUIRE_THROWS_AS(opt.step(), ContractError);
}
