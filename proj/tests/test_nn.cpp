#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "serf/nn.hpp"
#include "serf/optim.hpp"
#include "serf/scalar_math.hpp"

using namespace serf;

namespace {

LayerSpec hidden(std::size_t width, ActivationTag tag, bool bn = false, double dropout = 0.0) {
    LayerSpec l;
    l.width = width;
    l.activation = make_activation(tag);
    l.batch_norm = bn;
    l.dropout_rate = dropout;
    return l;
}

void set_identity(Tensor2& w) {
    for (std::size_t i = 0; i < w.rows(); ++i)
        for (std::size_t j = 0; j < w.cols(); ++j) w(i, j) = (i == j) ? 1.0 : 0.0;
}

Tensor2 random_batch(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Tensor2 x(rows, cols);
    Rng rng(seed);
    rng.fill_normal(0.0, 1.0, x.data(), x.size());
    return x;
}

double net_loss(Network& net, const Tensor2& x, const std::vector<int>& labels) {
    Rng unused(0);
    const Tensor2 logits = net.forward(x, Mode::train, unused);
    return loss_softmax_ce(logits, labels).loss;
}

// Central difference over one parameter entry; h snapped to an exact value.
double fd_param_grad(Network& net, Tensor2* param, std::size_t k, const Tensor2& x,
                     const std::vector<int>& labels) {
    const double saved = param->data()[k];
    volatile double vh = 1e-5 * std::max(1.0, std::fabs(saved));
    const double h = vh;
    param->data()[k] = saved + h;
    const double up = net_loss(net, x, labels);
    param->data()[k] = saved - h;
    const double down = net_loss(net, x, labels);
    param->data()[k] = saved;
    return (up - down) / (2.0 * h);
}

void check_backprop_matches_fd(const NetworkSpec& spec, double rel_tol, double abs_floor) {
    Network net(spec);
    const Tensor2 x = random_batch(5, spec.input_dim, 4242);
    std::vector<int> labels;
    for (std::size_t i = 0; i < x.rows(); ++i)
        labels.push_back(static_cast<int>(i % spec.output_dim));

    Rng unused(0);
    ForwardCache cache;
    const Tensor2 logits = net.forward(x, Mode::train, unused, &cache);
    const SoftmaxCeResult ce = loss_softmax_ce(logits, labels);
    const std::vector<Tensor2> grads = net.backward(cache, ce.dlogits);
    const std::vector<Tensor2*> params = net.params();
    REQUIRE(grads.size() == params.size());

    for (std::size_t p = 0; p < params.size(); ++p) {
        REQUIRE(grads[p].rows() == params[p]->rows());
        REQUIRE(grads[p].cols() == params[p]->cols());
        for (std::size_t k = 0; k < params[p]->size(); ++k) {
            const double got = grads[p].data()[k];
            const double fd = fd_param_grad(net, params[p], k, x, labels);
            const double tol = std::max(rel_tol * std::max(std::fabs(got), std::fabs(fd)),
                                        abs_floor);
            CAPTURE(p);
            CAPTURE(k);
            CAPTURE(got);
            CAPTURE(fd);
            CHECK(std::fabs(got - fd) <= tol);
        }
    }
}

}  // namespace

TEST_CASE("identity weights pass the input straight through") {
    NetworkSpec spec;
    spec.input_dim = 3;
    spec.layers = {hidden(3, ActivationTag::identity)};
    spec.output_dim = 3;
    Network net(spec);
    set_identity(net.layers()[0].w);
    set_identity(net.layers()[1].w);

    const Tensor2 x = random_batch(4, 3, 17);
    Rng rng(0);
    const Tensor2 logits = net.forward(x, Mode::train, rng);
    REQUIRE(logits.rows() == 4);
    REQUIRE(logits.cols() == 3);
    CHECK(std::memcmp(logits.data(), x.data(), x.size() * sizeof(double)) == 0);
}

TEST_CASE("eval forward is bitwise deterministic") {
    NetworkSpec spec;
    spec.input_dim = 5;
    spec.layers = {hidden(8, ActivationTag::serf, true, 0.4),
                   hidden(6, ActivationTag::mish, false, 0.2)};
    spec.output_dim = 3;
    spec.seed = 9;
    Network net(spec);

    const Tensor2 x = random_batch(7, 5, 23);
    Rng train_rng(1);
    (void)net.forward(x, Mode::train, train_rng);  // move running stats off their init

    Rng ra(100), rb(200);
    const Tensor2 a = net.forward(x, Mode::eval, ra);
    const Tensor2 b = net.forward(x, Mode::eval, rb);
    CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

TEST_CASE("hand-set 2x2 weights reproduce a direct serf computation") {
    NetworkSpec spec;
    spec.input_dim = 2;
    spec.layers = {hidden(2, ActivationTag::serf)};
    spec.output_dim = 2;
    Network net(spec);

    Tensor2& w = net.layers()[0].w;
    w(0, 0) = 1.2;
    w(0, 1) = -0.7;
    w(1, 0) = 0.3;
    w(1, 1) = 0.8;
    Tensor2& b = net.layers()[0].b;
    b(0, 0) = 0.1;
    b(0, 1) = -0.2;
    set_identity(net.layers()[1].w);

    Tensor2 x(2, 2);
    x(0, 0) = 0.5;
    x(0, 1) = -1.0;
    x(1, 0) = 2.0;
    x(1, 1) = 0.25;

    Rng rng(0);
    const Tensor2 logits = net.forward(x, Mode::eval, rng);
    // z entries worked out by hand from x, w, b above
    CHECK(logits(0, 0) == doctest::Approx(::serf::serf(0.4)).epsilon(1e-14));
    CHECK(logits(0, 1) == doctest::Approx(::serf::serf(-1.35)).epsilon(1e-14));
    CHECK(logits(1, 0) == doctest::Approx(::serf::serf(2.575)).epsilon(1e-14));
    CHECK(logits(1, 1) == doctest::Approx(::serf::serf(-1.4)).epsilon(1e-14));
}

TEST_CASE("uniform logits cost ln C and dlogits rows sum to zero") {
    for (std::size_t classes : {2, 3, 10}) {
        CAPTURE(classes);
        Tensor2 logits(4, classes, 0.37);
        std::vector<int> labels = {0, 1, 0, static_cast<int>(classes - 1)};
        const SoftmaxCeResult r = loss_softmax_ce(logits, labels);
        CHECK(oracle::close_abs(r.loss, std::log(static_cast<double>(classes)), 1e-14));
        for (std::size_t i = 0; i < 4; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < classes; ++j) s += r.dlogits(i, j);
            CHECK(std::fabs(s) <= 1e-16);
        }
    }
}

TEST_CASE("dlogits matches finite differences on a random 4x3 batch") {
    Tensor2 logits = random_batch(4, 3, 71);
    for (std::size_t k = 0; k < logits.size(); ++k) logits.data()[k] *= 2.0;
    const std::vector<int> labels = {2, 0, 1, 1};
    const SoftmaxCeResult r = loss_softmax_ce(logits, labels);
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        for (std::size_t j = 0; j < logits.cols(); ++j) {
            const double saved = logits(i, j);
            volatile double vh = 1e-6;
            const double h = vh;
            logits(i, j) = saved + h;
            const double up = loss_softmax_ce(logits, labels).loss;
            logits(i, j) = saved - h;
            const double down = loss_softmax_ce(logits, labels).loss;
            logits(i, j) = saved;
            const double fd = (up - down) / (2.0 * h);
            CHECK(oracle::close_abs(r.dlogits(i, j), fd, 1e-6));
        }
    }
}

TEST_CASE("bad labels and label counts are rejected") {
    Tensor2 logits(2, 3, 0.0);
    CHECK_THROWS_AS((void)loss_softmax_ce(logits, {0}), std::invalid_argument);
    CHECK_THROWS_AS((void)loss_softmax_ce(logits, {0, 3}), std::invalid_argument);
    CHECK_THROWS_AS((void)loss_softmax_ce(logits, {-1, 0}), std::invalid_argument);
}

TEST_CASE("backprop matches finite differences on a two layer serf net") {
    NetworkSpec spec;
    spec.input_dim = 2;
    spec.layers = {hidden(3, ActivationTag::serf), hidden(2, ActivationTag::serf)};
    spec.output_dim = 2;
    spec.seed = 5;
    check_backprop_matches_fd(spec, 1e-5, 1e-7);
}

TEST_CASE("backprop matches finite differences for every activation, BN on and off") {
    for (ActivationTag tag : all_activation_tags()) {
        for (bool bn : {false, true}) {
            CAPTURE(tag_name(tag));
            CAPTURE(bn);
            NetworkSpec spec;
            spec.input_dim = 3;
            spec.layers = {hidden(8, tag, bn), hidden(5, tag, bn), hidden(4, tag)};
            spec.output_dim = 3;
            spec.seed = 31;
            check_backprop_matches_fd(spec, 1e-4, 1e-6);
        }
    }
}

TEST_CASE("gradients flow through the eval-mode BN path too") {
    NetworkSpec spec;
    spec.input_dim = 3;
    spec.layers = {hidden(4, ActivationTag::swish, true)};
    spec.output_dim = 2;
    spec.seed = 13;
    Network net(spec);
    const Tensor2 x = random_batch(6, 3, 90);
    const std::vector<int> labels = {0, 1, 0, 1, 1, 0};

    Rng warm(3);
    (void)net.forward(x, Mode::train, warm);  // give running stats something real

    auto eval_loss = [&](Network& n) {
        Rng unused(0);
        return loss_softmax_ce(n.forward(x, Mode::eval, unused), labels).loss;
    };
    Rng unused(0);
    ForwardCache cache;
    const Tensor2 logits = net.forward(x, Mode::eval, unused, &cache);
    const SoftmaxCeResult ce = loss_softmax_ce(logits, labels);
    const std::vector<Tensor2> grads = net.backward(cache, ce.dlogits);
    const std::vector<Tensor2*> params = net.params();

    for (std::size_t p = 0; p < params.size(); ++p) {
        for (std::size_t k = 0; k < params[p]->size(); ++k) {
            const double saved = params[p]->data()[k];
            volatile double vh = 1e-5 * std::max(1.0, std::fabs(saved));
            const double h = vh;
            params[p]->data()[k] = saved + h;
            const double up = eval_loss(net);
            params[p]->data()[k] = saved - h;
            const double down = eval_loss(net);
            params[p]->data()[k] = saved;
            const double fd = (up - down) / (2.0 * h);
            const double got = grads[p].data()[k];
            CHECK(std::fabs(got - fd) <=
                  std::max(1e-4 * std::max(std::fabs(got), std::fabs(fd)), 1e-6));
        }
    }
}

TEST_CASE("zero dlogits produce zero gradients") {
    NetworkSpec spec;
    spec.input_dim = 4;
    spec.layers = {hidden(6, ActivationTag::gelu, true), hidden(5, ActivationTag::tanh)};
    spec.output_dim = 3;
    Network net(spec);
    const Tensor2 x = random_batch(5, 4, 3);
    Rng rng(0);
    ForwardCache cache;
    const Tensor2 logits = net.forward(x, Mode::train, rng, &cache);
    const Tensor2 zeros(logits.rows(), logits.cols(), 0.0);
    for (const Tensor2& g : net.backward(cache, zeros)) {
        for (std::size_t k = 0; k < g.size(); ++k) CHECK(g.data()[k] == 0.0);
    }
}

TEST_CASE("dropout masks block gradients for the dropped units") {
    NetworkSpec spec;
    spec.input_dim = 4;
    spec.layers = {hidden(8, ActivationTag::serf, false, 0.6)};
    spec.output_dim = 2;
    spec.seed = 77;
    Network net(spec);
    const Tensor2 x = random_batch(1, 4, 55);  // batch of one keeps columns attributable
    const std::vector<int> labels = {1};

    Rng rng(123);
    ForwardCache cache;
    const Tensor2 logits = net.forward(x, Mode::train, rng, &cache);
    const Tensor2& mask = cache.layers[0].mask;
    REQUIRE(mask.size() == 8);
    std::size_t dropped = 0;
    for (std::size_t j = 0; j < 8; ++j)
        if (mask(0, j) == 0.0) ++dropped;
    REQUIRE(dropped > 0);  // rate 0.6 on 8 units with this seed drops some

    const SoftmaxCeResult ce = loss_softmax_ce(logits, labels);
    const std::vector<Tensor2> grads = net.backward(cache, ce.dlogits);
    const Tensor2& dw = grads[0];  // hidden weights, fan_in x 8
    const Tensor2& db = grads[1];
    for (std::size_t j = 0; j < 8; ++j) {
        if (mask(0, j) != 0.0) continue;
        CHECK(db(0, j) == 0.0);
        for (std::size_t i = 0; i < dw.rows(); ++i) CHECK(dw(i, j) == 0.0);
    }
}

TEST_CASE("train-mode BN output is centered and unit-variance before gamma beta") {
    NetworkSpec spec;
    spec.input_dim = 4;
    spec.layers = {hidden(6, ActivationTag::identity, true)};
    spec.output_dim = 2;
    spec.seed = 2;
    // Large weight scale keeps the batch variance far above epsilon, where
    // normalized variance lands within 1e-8 of one.
    spec.initializer = make_random_normal(0.0, 50.0);
    Network net(spec);
    const Tensor2 x = random_batch(64, 4, 8);
    Rng rng(0);
    ForwardCache cache;
    (void)net.forward(x, Mode::train, rng, &cache);

    const Tensor2& xhat = cache.layers[0].xhat;
    for (std::size_t j = 0; j < xhat.cols(); ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < xhat.rows(); ++i) mean += xhat(i, j);
        mean /= static_cast<double>(xhat.rows());
        double var = 0.0;
        for (std::size_t i = 0; i < xhat.rows(); ++i) {
            const double d = xhat(i, j) - mean;
            var += d * d;
        }
        var /= static_cast<double>(xhat.rows());
        CAPTURE(j);
        CHECK(std::fabs(mean) <= 1e-10);
        CHECK(std::fabs(var - 1.0) <= 1e-8);
    }

    // At ordinary scale the epsilon in the denominator caps how close the
    // variance can get to one: var/(var+eps), an epsilon-level gap.
    NetworkSpec plain = spec;
    plain.initializer = make_initializer(InitTag::glorot_normal);
    Network net2(plain);
    ForwardCache cache2;
    (void)net2.forward(x, Mode::train, rng, &cache2);
    const Tensor2& xhat2 = cache2.layers[0].xhat;
    for (std::size_t j = 0; j < xhat2.cols(); ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < xhat2.rows(); ++i) mean += xhat2(i, j);
        mean /= static_cast<double>(xhat2.rows());
        double var = 0.0;
        for (std::size_t i = 0; i < xhat2.rows(); ++i) {
            const double d = xhat2(i, j) - mean;
            var += d * d;
        }
        var /= static_cast<double>(xhat2.rows());
        CHECK(std::fabs(mean) <= 1e-10);
        CHECK(std::fabs(var - 1.0) <= 2e-4);
    }
}

TEST_CASE("same seed and config give bitwise identical parameters after training") {
    auto run = [] {
        NetworkSpec spec;
        spec.input_dim = 6;
        spec.layers = {hidden(8, ActivationTag::serf, true, 0.3),
                       hidden(5, ActivationTag::swish)};
        spec.output_dim = 4;
        spec.seed = 404;
        Network net(spec);
        Optimizer opt(make_adam(0.003));
        Rng data_rng(19);
        Rng drop_rng(7);
        for (int step = 0; step < 5; ++step) {
            Tensor2 x(10, 6);
            data_rng.fill_normal(0.0, 1.0, x.data(), x.size());
            std::vector<int> labels;
            for (int i = 0; i < 10; ++i)
                labels.push_back(static_cast<int>(data_rng.next_u64() % 4));
            ForwardCache cache;
            const Tensor2 logits = net.forward(x, Mode::train, drop_rng, &cache);
            const SoftmaxCeResult ce = loss_softmax_ce(logits, labels);
            const std::vector<Tensor2> grads = net.backward(cache, ce.dlogits);
            opt.step(net.params(), grad_ptrs(grads));
        }
        return net;
    };
    Network a = run();
    Network b = run();
    const std::vector<const Tensor2*> pa = static_cast<const Network&>(a).params();
    const std::vector<const Tensor2*> pb = static_cast<const Network&>(b).params();
    REQUIRE(pa.size() == pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i) {
        REQUIRE(pa[i]->size() == pb[i]->size());
        CHECK(std::memcmp(pa[i]->data(), pb[i]->data(), pa[i]->size() * sizeof(double)) == 0);
    }
    // Running stats ride along with the same guarantee.
    CHECK(std::memcmp(a.layers()[0].bn.running_mean.data(), b.layers()[0].bn.running_mean.data(),
                      a.layers()[0].bn.running_mean.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(a.layers()[0].bn.running_var.data(), b.layers()[0].bn.running_var.data(),
                      a.layers()[0].bn.running_var.size() * sizeof(double)) == 0);
}

TEST_CASE("shape and spec misuse is rejected with a dimension report") {
    NetworkSpec spec;
    spec.input_dim = 4;
    spec.layers = {hidden(3, ActivationTag::relu)};
    spec.output_dim = 2;
    Network net(spec);
    Rng rng(0);
    const Tensor2 wrong(2, 5);
    try {
        (void)net.forward(wrong, Mode::eval, rng);
        FAIL("expected a shape error");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find('5') != std::string::npos);
        CHECK(msg.find('4') != std::string::npos);
    }

    NetworkSpec bad = spec;
    bad.layers.clear();
    CHECK_THROWS_AS((void)Network(bad), std::invalid_argument);
    bad = spec;
    bad.layers[0].width = 0;
    CHECK_THROWS_AS((void)Network(bad), std::invalid_argument);
    bad = spec;
    bad.layers[0].dropout_rate = 1.0;
    CHECK_THROWS_AS((void)Network(bad), std::invalid_argument);
    bad = spec;
    bad.input_dim = 0;
    CHECK_THROWS_AS((void)Network(bad), std::invalid_argument);
    bad = spec;
    bad.output_dim = 0;
    CHECK_THROWS_AS((void)Network(bad), std::invalid_argument);
}

TEST_CASE("weight draws ignore the activation choice") {
    NetworkSpec a;
    a.input_dim = 3;
    a.layers = {hidden(7, ActivationTag::relu), hidden(4, ActivationTag::relu)};
    a.output_dim = 2;
    a.seed = 321;
    NetworkSpec b = a;
    b.layers[0].activation = make_activation(ActivationTag::serf);
    b.layers[1].activation = make_activation(ActivationTag::gelu);

    Network na(a), nb(b);
    for (std::size_t li = 0; li < na.layers().size(); ++li) {
        const Tensor2& wa = na.layers()[li].w;
        const Tensor2& wb = nb.layers()[li].w;
        REQUIRE(wa.size() == wb.size());
        CHECK(std::memcmp(wa.data(), wb.data(), wa.size() * sizeof(double)) == 0);
    }
}
