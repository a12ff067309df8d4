#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bge/dsl.hpp"
#include "bge/encoder.hpp"
#include "bge/heads.hpp"
#include "bge/metrics.hpp"
#include "helpers.hpp"

using namespace bge;

namespace {

// Toy graph: flow source into a 0-junction with a capacitor and resistor;
// the dual graph has 4 nodes and 8 edges.
struct Toy {
    DualGraph graph;
    GraphRuntime rt;
    EncoderState enc;
    HeadState head;
    Mat x;        // n_in x 2
    Mat target;   // 2 x k_out
    double delta = 0.1;

    Toy(HeadKind head_kind, int layers) {
        graph = compile(build_bond_matrix(parse_dsl(test::sf_j0_dsl())), {{1, 'f'}, {1, 'e'}});
        rt = make_runtime(graph);
        EncoderConfig cfg;
        cfg.layers = layers;
        cfg.modes_per_layer = layers == 2 ? std::vector<int>{3, 5} : std::vector<int>{3};
        cfg.alpha_bgc = 0.6;
        cfg.fs = 2.0;
        std::mt19937_64 rng(2024);
        enc = init_encoder(graph, cfg, 8, rng);
        head = init_head(head_kind, 2, enc.d0, 4, 6, rng);
        std::mt19937_64 data_rng(7);
        x = test::random_mat(8, 2, data_rng);
        target = test::random_mat(2, 4, data_rng);
    }

    double loss() const {
        const Mat hout = encode(rt, enc, x, Exec::Serial);
        Mat head_in(2, enc.d0);
        for (int c = 0; c < 2; ++c)
            for (int j = 0; j < enc.d0; ++j) head_in.at(c, j) = hout.at(rt.observed[c], j);
        return huber_loss(head_forward(head, head_in), target, delta);
    }

    void grads(EncoderState& genc, HeadState& ghead) const {
        EncodeCache cache;
        const Mat hout = encode(rt, enc, x, Exec::Serial, &cache);
        Mat head_in(2, enc.d0);
        for (int c = 0; c < 2; ++c)
            for (int j = 0; j < enc.d0; ++j) head_in.at(c, j) = hout.at(rt.observed[c], j);
        HeadCache hc;
        const Mat pred = head_forward(head, head_in, &hc);
        const Mat dpred = huber_grad(pred, target, delta);
        Mat din;
        head_backward(head, hc, dpred, ghead, &din);
        Mat dhout(rt.n_nodes, enc.d0);
        for (int c = 0; c < 2; ++c)
            for (int j = 0; j < enc.d0; ++j) dhout.at(rt.observed[c], j) = din.at(c, j);
        encoder_backward(rt, enc, cache, dhout, genc, Exec::Serial);
    }
};

// central finite differences over every entry of every group
void check_all_groups(Toy& toy, double eps, double tol) {
    EncoderState genc = zeros_like(toy.enc);
    HeadState ghead = zeros_like(toy.head);
    toy.grads(genc, ghead);

    auto params = param_views(toy.enc);
    auto head_params = param_views(toy.head);
    params.insert(params.end(), head_params.begin(), head_params.end());
    auto grads = param_views(genc);
    auto head_grads = param_views(ghead);
    grads.insert(grads.end(), head_grads.begin(), head_grads.end());

    REQUIRE(params.size() == grads.size());
    size_t checked = 0, worst_group_fails = 0;
    for (size_t gi = 0; gi < params.size(); ++gi) {
        CAPTURE(params[gi].name);
        REQUIRE(params[gi].count == grads[gi].count);
        for (size_t i = 0; i < params[gi].count; ++i) {
            double& p = params[gi].data[i];
            const double saved = p;
            p = saved + eps;
            const double lp = toy.loss();
            p = saved - eps;
            const double lm = toy.loss();
            p = saved;
            const double fd = (lp - lm) / (2.0 * eps);
            const double an = grads[gi].data[i];
            ++checked;
            if (test::rel_err(an, fd) >= tol) {
                CAPTURE(i);
                CAPTURE(an);
                CAPTURE(fd);
                ++worst_group_fails;
                CHECK(test::rel_err(an, fd) < tol);
            }
        }
    }
    CHECK(checked > 500);  // the toy really exercises every group
    CHECK(worst_group_fails == 0);
}

}  // namespace

TEST_CASE("informed linear pipeline matches central differences everywhere") {
    Toy toy(HeadKind::Linear, 2);
    check_all_groups(toy, 1e-5, 1e-4);
}

TEST_CASE("informed mlp pipeline matches central differences everywhere") {
    Toy toy(HeadKind::MLP, 1);
    check_all_groups(toy, 1e-5, 1e-4);
}

TEST_CASE("bgl weight gradient at a random point") {
    // finite-difference check of d(sum(out * R))/dW through one full layer
    Toy toy(HeadKind::Linear, 1);
    std::mt19937_64 rng(99);
    const Mat r = test::random_mat(toy.rt.n_nodes, toy.enc.d0, rng);

    auto weighted_out = [&]() {
        const Mat out = encode(toy.rt, toy.enc, toy.x, Exec::Serial);
        double s = 0.0;
        for (size_t i = 0; i < out.size(); ++i) s += out.a[i] * r.a[i];
        return s;
    };

    EncodeCache cache;
    encode(toy.rt, toy.enc, toy.x, Exec::Serial, &cache);
    EncoderState genc = zeros_like(toy.enc);
    encoder_backward(toy.rt, toy.enc, cache, r, genc, Exec::Serial);

    const double eps = 1e-6;
    std::uniform_int_distribution<int> pick(0, toy.enc.d0 - 1);
    for (int trial = 0; trial < 20; ++trial) {
        const int a = pick(rng), b = pick(rng);
        double& p = toy.enc.w[0].at(a, b);
        const double saved = p;
        p = saved + eps;
        const double lp = weighted_out();
        p = saved - eps;
        const double lm = weighted_out();
        p = saved;
        CHECK(test::rel_err(genc.w[0].at(a, b), (lp - lm) / (2.0 * eps)) < 1e-4);
    }
}

TEST_CASE("raw head gradients match central differences") {
    std::mt19937_64 rng(17);
    for (HeadKind kind : {HeadKind::Linear, HeadKind::MLP}) {
        HeadState head = init_head(kind, 2, 6, 5, 4, rng);
        const Mat input = test::random_mat(2, 6, rng);
        const Mat target = test::random_mat(2, 5, rng);

        HeadCache hc;
        const Mat pred = head_forward(head, input, &hc);
        HeadState ghead = zeros_like(head);
        head_backward(head, hc, huber_grad(pred, target, 0.1), ghead, nullptr);

        auto params = param_views(head);
        auto grads = param_views(ghead);
        const double eps = 1e-5;
        for (size_t gi = 0; gi < params.size(); ++gi) {
            CAPTURE(params[gi].name);
            for (size_t i = 0; i < params[gi].count; ++i) {
                double& p = params[gi].data[i];
                const double saved = p;
                p = saved + eps;
                const double lp = huber_loss(head_forward(head, input), target, 0.1);
                p = saved - eps;
                const double lm = huber_loss(head_forward(head, input), target, 0.1);
                p = saved;
                CHECK(test::rel_err(grads[gi].data[i], (lp - lm) / (2.0 * eps)) < 1e-4);
            }
        }
    }
}
