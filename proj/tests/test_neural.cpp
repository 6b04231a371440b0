#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "curvex/neural.hpp"
#include "curvex/presets.hpp"
#include "curvex/rng.hpp"

using namespace curvex;

namespace {

SampleMatrix random_matrix(std::size_t n, std::size_t dim, std::uint64_t seed,
                           double noise = 0.05) {
    SampleMatrix m;
    m.n = n;
    m.dim = dim;
    m.features.resize(n * dim);
    m.hk.resize(n);
    m.target.resize(n);
    Rng rng(seed);
    for (double& v : m.features) v = rng.uniform(-1.5, 1.5);
    for (std::size_t s = 0; s < n; ++s) {
        m.target[s] = rng.uniform(-0.6, -0.01);
        m.hk[s] = m.target[s] + rng.uniform(-noise, noise);
    }
    return m;
}

} // namespace

TEST_CASE("zero weights pass hk through") {
    ErrorNet net = make_net(6, {8, 8, 8, 8}, 6, 0.015625, 1);
    for (Layer& l : net.layers) {
        std::fill(l.W.begin(), l.W.end(), 0.0);
        std::fill(l.b.begin(), l.b.end(), 0.0);
    }
    Rng rng(2);
    for (int k = 0; k < 20; ++k) {
        std::vector<double> x(6);
        for (double& v : x) v = rng.uniform(-2, 2);
        const double hk = rng.uniform(-0.5, 0.5);
        CHECK(forward(net, x, hk) == hk);
    }
}

TEST_CASE("trainable parameter counts match the published architecture rows") {
    struct Row {
        int eta;
        std::size_t expected;
    };
    const Row rows[] = {{6, 53951}, {7, 53691}, {8, 45961},
                        {9, 53691}, {10, 53691}, {11, 45961}};
    for (const Row& r : rows) {
        const EtaPreset p = preset_for_eta(r.eta);
        const ErrorNet net = make_net(
            p.m_iota, {p.hidden_width, p.hidden_width, p.hidden_width, p.hidden_width}, r.eta,
            std::ldexp(1.0, -r.eta), 0);
        CHECK(net.parameter_count() == r.expected);
    }
}

TEST_CASE("batch forward equals scalar forward") {
    const ErrorNet net = make_net(10, {32, 32, 32, 32}, 7, 0.0078125, 3);
    const SampleMatrix m = random_matrix(77, 10, 4);
    const auto batch = batch_forward(net, m.features, m.n, m.hk);
    for (std::size_t s = 0; s < m.n; ++s) {
        std::vector<double> x(m.features.begin() + static_cast<std::ptrdiff_t>(s * m.dim),
                              m.features.begin() + static_cast<std::ptrdiff_t>((s + 1) * m.dim));
        CHECK(batch[s] == forward(net, x, m.hk[s])); // bitwise
    }
    SUBCASE("batch of one") {
        SampleMatrix one;
        one.n = 1;
        one.dim = m.dim;
        one.features.assign(m.features.begin(), m.features.begin() + 10);
        one.hk = {m.hk[0]};
        one.target = {m.target[0]};
        CHECK(batch_forward(net, one.features, 1, one.hk)[0] == batch[0]);
    }
    SUBCASE("permuting rows permutes outputs") {
        SampleMatrix rev;
        rev.n = m.n;
        rev.dim = m.dim;
        rev.features.resize(m.features.size());
        rev.hk.resize(m.n);
        for (std::size_t s = 0; s < m.n; ++s) {
            const std::size_t src = m.n - 1 - s;
            std::copy(m.features.begin() + static_cast<std::ptrdiff_t>(src * m.dim),
                      m.features.begin() + static_cast<std::ptrdiff_t>((src + 1) * m.dim),
                      rev.features.begin() + static_cast<std::ptrdiff_t>(s * m.dim));
            rev.hk[s] = m.hk[src];
        }
        const auto back = batch_forward(net, rev.features, rev.n, rev.hk);
        for (std::size_t s = 0; s < m.n; ++s) CHECK(back[s] == batch[m.n - 1 - s]);
    }
    SUBCASE("ragged input is rejected") {
        std::vector<double> bad(m.features.begin(), m.features.end() - 1);
        CHECK_THROWS_AS(batch_forward(net, bad, m.n, m.hk), DataError);
    }
}

TEST_CASE("f32 and f64 inference stay close on unit-scale inputs") {
    const ErrorNet net = make_net(12, {24, 24, 24, 24}, 7, 0.0078125, 5);
    const SampleMatrix m = random_matrix(500, 12, 6);
    const auto d64 = batch_forward(net, m.features, m.n, m.hk);
    const auto d32 = batch_forward_f32(net, m.features, m.n, m.hk);
    for (std::size_t s = 0; s < m.n; ++s) CHECK(std::abs(d64[s] - d32[s]) < 1e-4);
}

TEST_CASE("backprop gradient matches central finite differences") {
    // randomize biases so no pre-activation sits exactly on a ReLU kink
    // (the freshly initialized net has zero biases, and a fully killed layer
    // would otherwise park downstream units at z = 0, where one-sided slopes
    // differ)
    ErrorNet net = make_net(3, {4, 4, 4, 4}, 6, 0.015625, 7);
    {
        Rng brng(5150);
        for (Layer& l : net.layers)
            for (double& b : l.b) b = brng.uniform(-0.3, 0.3);
    }
    const SampleMatrix batch = random_matrix(16, 3, 8);
    const double l2 = 1e-4;

    std::vector<double> grad;
    loss_and_gradient(net, batch, l2, &grad);

    std::vector<double> theta = flatten_parameters(net);
    Rng rng(9);
    int checked = 0;
    while (checked < 100) {
        const std::size_t k = static_cast<std::size_t>(rng.below(theta.size()));
        const double eps = 1e-5 * std::max(1.0, std::abs(theta[k]));
        ErrorNet probe = net;
        std::vector<double> tp = theta;
        tp[k] = theta[k] + eps;
        assign_parameters(probe, tp);
        const double fp = loss_and_gradient(probe, batch, l2, nullptr);
        tp[k] = theta[k] - eps;
        assign_parameters(probe, tp);
        const double fm = loss_and_gradient(probe, batch, l2, nullptr);
        const double numeric = (fp - fm) / (2.0 * eps);
        const double denom = std::max({std::abs(grad[k]), std::abs(numeric), 1e-8});
        CHECK(std::abs(grad[k] - numeric) / denom < 1e-6);
        ++checked;
    }
}

TEST_CASE("overfitting a tiny batch drives training RMSE down") {
    const SampleMatrix train = random_matrix(64, 6, 10, 0.08);
    SampleMatrix valid = train;
    TrainConfig cfg;
    cfg.batch_size = 64;
    cfg.max_epochs = 2000;
    cfg.lr_init = 2e-3;
    cfg.lr_min = 2e-4;
    cfg.lr_halve_patience = 200;
    cfg.early_stop_patience = 2000;
    cfg.l2_factor = 0.0;
    cfg.seed = 11;
    std::vector<EpochStats> history;
    curvex::train(train, valid, 6, {16, 16, 16, 16}, 6, 0.015625, cfg, &history);
    double best = 1e9;
    for (const EpochStats& r : history) best = std::min(best, r.train_rmse);
    CHECK(best < 1e-3);
}

TEST_CASE("pure-skip optimum shrinks the correction under L2") {
    // targets equal the hk inputs: the best correction is identically zero
    SampleMatrix train = random_matrix(256, 5, 12, 0.0);
    for (std::size_t s = 0; s < train.n; ++s) train.target[s] = train.hk[s];
    SampleMatrix valid = train;
    TrainConfig cfg;
    cfg.batch_size = 64;
    cfg.max_epochs = 250;
    cfg.lr_init = 1e-3;
    cfg.lr_min = 1e-5;
    cfg.lr_halve_patience = 60;
    cfg.early_stop_patience = 250;
    cfg.l2_factor = 1e-4;
    cfg.seed = 13;
    const ErrorNet before = make_net(5, {12, 12, 12, 12}, 6, 0.015625, cfg.seed);
    const ErrorNet after = curvex::train(train, valid, 5, {12, 12, 12, 12}, 6, 0.015625, cfg, nullptr);
    auto weight_norm = [](const ErrorNet& n) {
        double acc = 0.0;
        for (const Layer& l : n.layers)
            for (double w : l.W) acc += w * w;
        return acc;
    };
    CHECK(weight_norm(after) < weight_norm(before));
    // and the fitted corrections are small
    const auto pred = batch_forward(after, train.features, train.n, train.hk);
    double mae = 0.0;
    for (std::size_t s = 0; s < train.n; ++s) mae += std::abs(pred[s] - train.target[s]);
    mae /= static_cast<double>(train.n);
    CHECK(mae < 0.01);
}

TEST_CASE("training is deterministic and the LR schedule is monotone") {
    const SampleMatrix train = random_matrix(512, 6, 14, 0.05);
    const SampleMatrix valid = random_matrix(128, 6, 15, 0.05);
    TrainConfig cfg;
    cfg.batch_size = 64;
    cfg.max_epochs = 25;
    cfg.lr_halve_patience = 3;
    cfg.early_stop_patience = 25;
    cfg.seed = 16;

    std::vector<EpochStats> h1, h2;
    const ErrorNet n1 = curvex::train(train, valid, 6, {16, 16, 16, 16}, 6, 0.015625, cfg, &h1);
    const ErrorNet n2 = curvex::train(train, valid, 6, {16, 16, 16, 16}, 6, 0.015625, cfg, &h2);

    const std::string p1 = "net_det_1.json", p2 = "net_det_2.json";
    save_json(n1, p1);
    save_json(n2, p2);
    std::ifstream f1(p1), f2(p2);
    const std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    const std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    f1.close();
    f2.close();
    std::remove(p1.c_str());
    std::remove(p2.c_str());
    CHECK(s1 == s2); // bitwise identical exports

    REQUIRE(h1.size() == h2.size());
    CHECK(h1.size() <= static_cast<std::size_t>(cfg.max_epochs));
    double best = 1e300;
    int stagnant = 0;
    for (std::size_t e = 0; e < h1.size(); ++e) {
        CHECK(h1[e].valid_mae == h2[e].valid_mae);
        if (e > 0) {
            CHECK(h1[e].lr <= h1[e - 1].lr); // monotone, never below the floor
            CHECK(h1[e].lr >= cfg.lr_min - 1e-18);
            if (h1[e].lr < h1[e - 1].lr) {
                CHECK(stagnant >= cfg.lr_halve_patience);
                stagnant = 0;
            }
        }
        if (h1[e].valid_mae < best - 1e-12) {
            best = h1[e].valid_mae;
            stagnant = 0;
        } else {
            ++stagnant;
        }
    }
}

TEST_CASE("early stopping halts after the stated stagnation window") {
    const SampleMatrix train = random_matrix(256, 4, 17, 0.0);
    const SampleMatrix valid = random_matrix(64, 4, 18, 0.0);
    TrainConfig cfg;
    cfg.batch_size = 64;
    cfg.max_epochs = 400;
    cfg.lr_init = 0.0; // frozen weights: validation stagnates immediately
    cfg.lr_min = 0.0;
    cfg.lr_halve_patience = 5;
    cfg.early_stop_patience = 12;
    cfg.seed = 19;
    std::vector<EpochStats> history;
    curvex::train(train, valid, 4, {8, 8, 8, 8}, 6, 0.015625, cfg, &history);
    // first epoch sets the best mark, then exactly the patience window runs
    CHECK(history.size() == 13);
}

TEST_CASE("model JSON round trip preserves forward outputs exactly") {
    const SampleMatrix train = random_matrix(256, 6, 20, 0.05);
    const SampleMatrix valid = random_matrix(64, 6, 21, 0.05);
    TrainConfig cfg;
    cfg.batch_size = 64;
    cfg.max_epochs = 5;
    cfg.seed = 22;
    const ErrorNet net = curvex::train(train, valid, 6, {16, 16, 16, 16}, 6, 0.015625, cfg, nullptr);

    const std::string path = "net_rt_test.json";
    save_json(net, path);
    const ErrorNet re = load_net(path);
    std::remove(path.c_str());

    CHECK(re.eta == net.eta);
    CHECK(re.h == net.h);
    const auto a = batch_forward(net, train.features, train.n, train.hk);
    const auto b = batch_forward(re, train.features, train.n, train.hk);
    for (std::size_t s = 0; s < train.n; ++s) CHECK(a[s] == b[s]);
}

TEST_CASE("corrupt model payloads are rejected") {
    const ErrorNet net = make_net(4, {8, 8, 8, 8}, 6, 0.015625, 23);
    const std::string path = "net_bad_test.json";
    save_json(net, path);

    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    const auto pos = text.find("\"W_b64\": \"");
    REQUIRE(pos != std::string::npos);
    // truncate the first weight payload by 8 encoded characters
    text.erase(pos + 10, 8);
    std::ofstream out(path);
    out << text;
    out.close();

    CHECK_THROWS_AS(load_net(path), DataError);
    std::remove(path.c_str());
}

TEST_CASE("non-finite loss aborts with diagnostics") {
    SampleMatrix train = random_matrix(64, 4, 24, 0.0);
    train.target[0] = std::numeric_limits<double>::quiet_NaN();
    const SampleMatrix valid = random_matrix(32, 4, 25, 0.0);
    TrainConfig cfg;
    cfg.batch_size = 64;
    cfg.max_epochs = 3;
    cfg.seed = 26;
    CHECK_THROWS_AS(curvex::train(train, valid, 4, {8, 8, 8, 8}, 6, 0.015625, cfg, nullptr),
                    NumericalError);
}

TEST_CASE("base64 payloads survive a round trip") {
    Rng rng(27);
    for (std::size_t len : {0u, 1u, 2u, 3u, 17u, 1000u}) {
        std::vector<float> data(len);
        for (float& v : data) v = static_cast<float>(rng.uniform(-5, 5));
        const auto back = base64_decode(base64_encode(data));
        REQUIRE(back.size() == data.size());
        for (std::size_t k = 0; k < len; ++k) CHECK(back[k] == data[k]);
    }
    CHECK_THROWS_AS(base64_decode("!!!!"), DataError);
}
