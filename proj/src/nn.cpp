#include "serf/nn.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "serf/scalar_math.hpp"
#include "serf/tensor_ops.hpp"

namespace serf {

namespace {

void validate_spec(const NetworkSpec& spec) {
    if (spec.input_dim < 1) throw std::invalid_argument("network input_dim must be >= 1");
    if (spec.output_dim < 1) throw std::invalid_argument("network output_dim must be >= 1");
    if (spec.layers.empty()) throw std::invalid_argument("network needs at least one hidden layer");
    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
        const LayerSpec& l = spec.layers[i];
        if (l.width < 1) {
            throw std::invalid_argument("layer " + std::to_string(i) + " width must be >= 1");
        }
        if (!(l.dropout_rate >= 0.0 && l.dropout_rate < 1.0)) {
            throw std::invalid_argument("layer " + std::to_string(i) +
                                        " dropout_rate must lie in [0, 1), got " +
                                        std::to_string(l.dropout_rate));
        }
    }
}

void add_bias_rows(Tensor2& z, const Tensor2& b) {
    for (std::size_t i = 0; i < z.rows(); ++i) {
        double* zi = z.row(i);
        for (std::size_t j = 0; j < z.cols(); ++j) zi[j] += b(0, j);
    }
}

Tensor2 column_means(const Tensor2& z) {
    Tensor2 m(1, z.cols());
    for (std::size_t j = 0; j < z.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < z.rows(); ++i) s += z(i, j);
        m(0, j) = s / static_cast<double>(z.rows());
    }
    return m;
}

}  // namespace

Network::Network(const NetworkSpec& spec) : spec_(spec) {
    validate_spec(spec_);
    // All weight draws happen here, in layer order, before any activation is
    // looked at, so two specs differing only in activations share weights.
    Rng rng(spec_.seed);
    std::size_t fan_in = spec_.input_dim;
    layers_.reserve(spec_.layers.size() + 1);
    for (const LayerSpec& l : spec_.layers) {
        DenseLayer dense;
        dense.w = init_weights(spec_.initializer, fan_in, l.width, rng);
        dense.b = Tensor2(1, l.width);
        dense.activation = l.activation;
        dense.dropout_rate = l.dropout_rate;
        dense.has_bn = l.batch_norm;
        if (l.batch_norm) {
            dense.bn.gamma = Tensor2(1, l.width, 1.0);
            dense.bn.beta = Tensor2(1, l.width, 0.0);
            dense.bn.running_mean = Tensor2(1, l.width, 0.0);
            dense.bn.running_var = Tensor2(1, l.width, 1.0);
        }
        layers_.push_back(std::move(dense));
        fan_in = l.width;
    }
    DenseLayer head;
    head.w = init_weights(spec_.initializer, fan_in, spec_.output_dim, rng);
    head.b = Tensor2(1, spec_.output_dim);
    head.activation = make_activation(ActivationTag::identity);
    layers_.push_back(std::move(head));
}

std::vector<Tensor2*> Network::params() {
    std::vector<Tensor2*> out;
    for (DenseLayer& l : layers_) {
        out.push_back(&l.w);
        out.push_back(&l.b);
        if (l.has_bn) {
            out.push_back(&l.bn.gamma);
            out.push_back(&l.bn.beta);
        }
    }
    return out;
}

std::vector<const Tensor2*> Network::params() const {
    std::vector<const Tensor2*> out;
    for (const DenseLayer& l : layers_) {
        out.push_back(&l.w);
        out.push_back(&l.b);
        if (l.has_bn) {
            out.push_back(&l.bn.gamma);
            out.push_back(&l.bn.beta);
        }
    }
    return out;
}

Tensor2 Network::forward(const Tensor2& x, Mode mode, Rng& rng, ForwardCache* cache) {
    if (x.cols() != spec_.input_dim) {
        throw std::invalid_argument("forward: input has " + std::to_string(x.cols()) +
                                    " features, network expects " +
                                    std::to_string(spec_.input_dim));
    }
    ForwardCache local;
    ForwardCache& c = cache ? *cache : local;
    c.mode = mode;
    c.layers.assign(layers_.size(), LayerCache{});

    const Tensor2* cur = &x;
    for (std::size_t li = 0; li < layers_.size(); ++li) {
        DenseLayer& layer = layers_[li];
        LayerCache& lc = c.layers[li];
        lc.x = *cur;
        lc.z = matmul(lc.x, layer.w);
        add_bias_rows(lc.z, layer.b);

        if (layer.has_bn) {
            const std::size_t w = lc.z.cols();
            lc.inv_std = Tensor2(1, w);
            if (mode == Mode::train) {
                lc.mean = column_means(lc.z);
                Tensor2 var(1, w);
                for (std::size_t j = 0; j < w; ++j) {
                    double s = 0.0;
                    for (std::size_t i = 0; i < lc.z.rows(); ++i) {
                        const double d = lc.z(i, j) - lc.mean(0, j);
                        s += d * d;
                    }
                    var(0, j) = s / static_cast<double>(lc.z.rows());
                }
                const double m = layer.bn.momentum;
                for (std::size_t j = 0; j < w; ++j) {
                    lc.inv_std(0, j) = 1.0 / std::sqrt(var(0, j) + layer.bn.epsilon);
                    layer.bn.running_mean(0, j) =
                        (1.0 - m) * layer.bn.running_mean(0, j) + m * lc.mean(0, j);
                    layer.bn.running_var(0, j) =
                        (1.0 - m) * layer.bn.running_var(0, j) + m * var(0, j);
                }
            } else {
                lc.mean = layer.bn.running_mean;
                for (std::size_t j = 0; j < w; ++j) {
                    lc.inv_std(0, j) =
                        1.0 / std::sqrt(layer.bn.running_var(0, j) + layer.bn.epsilon);
                }
            }
            lc.xhat = Tensor2(lc.z.rows(), w);
            lc.a_in = Tensor2(lc.z.rows(), w);
            for (std::size_t i = 0; i < lc.z.rows(); ++i) {
                for (std::size_t j = 0; j < w; ++j) {
                    const double xh = (lc.z(i, j) - lc.mean(0, j)) * lc.inv_std(0, j);
                    lc.xhat(i, j) = xh;
                    lc.a_in(i, j) = layer.bn.gamma(0, j) * xh + layer.bn.beta(0, j);
                }
            }
        } else {
            lc.a_in = lc.z;
        }

        lc.h = Tensor2(lc.a_in.rows(), lc.a_in.cols());
        batch_value(layer.activation, lc.a_in.data(), lc.h.data(), lc.a_in.size());

        if (mode == Mode::train && layer.dropout_rate > 0.0) {
            const double rate = layer.dropout_rate;
            const double scale = 1.0 / (1.0 - rate);
            lc.mask = Tensor2(lc.h.rows(), lc.h.cols());
            lc.out = Tensor2(lc.h.rows(), lc.h.cols());
            for (std::size_t k = 0; k < lc.h.size(); ++k) {
                const double keep = rng.uniform01() >= rate ? scale : 0.0;
                lc.mask.data()[k] = keep;
                lc.out.data()[k] = lc.h.data()[k] * keep;
            }
        } else {
            lc.out = lc.h;
        }
        cur = &lc.out;
    }
    return c.layers.back().out;
}

std::vector<Tensor2> Network::backward(const ForwardCache& cache, const Tensor2& dlogits) {
    if (cache.layers.size() != layers_.size()) {
        throw std::invalid_argument("backward: cache does not match this network");
    }
    require_shape(dlogits, cache.layers.back().out.rows(), cache.layers.back().out.cols(),
                  "backward dlogits");

    // Slot layout must mirror params(): per layer w, b[, gamma, beta].
    std::vector<std::size_t> first_slot(layers_.size());
    std::size_t nslots = 0;
    for (std::size_t li = 0; li < layers_.size(); ++li) {
        first_slot[li] = nslots;
        nslots += layers_[li].has_bn ? 4 : 2;
    }
    std::vector<Tensor2> grads(nslots);

    Tensor2 d = dlogits;
    for (std::size_t li = layers_.size(); li-- > 0;) {
        const DenseLayer& layer = layers_[li];
        const LayerCache& lc = cache.layers[li];

        if (lc.mask.size() > 0) {
            for (std::size_t k = 0; k < d.size(); ++k) d.data()[k] *= lc.mask.data()[k];
        }

        Tensor2 gact(lc.a_in.rows(), lc.a_in.cols());
        batch_grad(layer.activation, lc.a_in.data(), gact.data(), lc.a_in.size());
        Tensor2 da = d;
        for (std::size_t k = 0; k < da.size(); ++k) da.data()[k] *= gact.data()[k];

        Tensor2 dz;
        if (layer.has_bn) {
            const std::size_t w = da.cols();
            const double batch = static_cast<double>(da.rows());
            Tensor2 dgamma(1, w);
            Tensor2 dbeta(1, w);
            for (std::size_t j = 0; j < w; ++j) {
                double sg = 0.0, sb = 0.0;
                for (std::size_t i = 0; i < da.rows(); ++i) {
                    sg += da(i, j) * lc.xhat(i, j);
                    sb += da(i, j);
                }
                dgamma(0, j) = sg;
                dbeta(0, j) = sb;
            }
            dz = Tensor2(da.rows(), w);
            if (cache.mode == Mode::train) {
                for (std::size_t j = 0; j < w; ++j) {
                    const double g = layer.bn.gamma(0, j);
                    double s1 = 0.0, s2 = 0.0;
                    for (std::size_t i = 0; i < da.rows(); ++i) {
                        const double dxh = da(i, j) * g;
                        s1 += dxh;
                        s2 += dxh * lc.xhat(i, j);
                    }
                    for (std::size_t i = 0; i < da.rows(); ++i) {
                        const double dxh = da(i, j) * g;
                        dz(i, j) =
                            lc.inv_std(0, j) * (dxh - (s1 + lc.xhat(i, j) * s2) / batch);
                    }
                }
            } else {
                for (std::size_t j = 0; j < w; ++j) {
                    const double scale = layer.bn.gamma(0, j) * lc.inv_std(0, j);
                    for (std::size_t i = 0; i < da.rows(); ++i) dz(i, j) = da(i, j) * scale;
                }
            }
            grads[first_slot[li] + 2] = std::move(dgamma);
            grads[first_slot[li] + 3] = std::move(dbeta);
        } else {
            dz = std::move(da);
        }

        grads[first_slot[li]] = matmul(transpose(lc.x), dz);
        Tensor2 db(1, dz.cols());
        for (std::size_t j = 0; j < dz.cols(); ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < dz.rows(); ++i) s += dz(i, j);
            db(0, j) = s;
        }
        grads[first_slot[li] + 1] = std::move(db);

        if (li > 0) d = matmul(dz, transpose(layer.w));
    }
    return grads;
}

SoftmaxCeResult loss_softmax_ce(const Tensor2& logits, const std::vector<int>& labels) {
    const std::size_t batch = logits.rows();
    const std::size_t classes = logits.cols();
    if (labels.size() != batch) {
        throw std::invalid_argument("loss: " + std::to_string(labels.size()) + " labels for " +
                                    std::to_string(batch) + " logit rows");
    }
    SoftmaxCeResult r;
    r.dlogits = Tensor2(batch, classes);
    double total = 0.0;
    for (std::size_t i = 0; i < batch; ++i) {
        const int label = labels[i];
        if (label < 0 || static_cast<std::size_t>(label) >= classes) {
            throw std::invalid_argument("loss: label " + std::to_string(label) + " at row " +
                                        std::to_string(i) + " outside [0, " +
                                        std::to_string(classes) + ")");
        }
        const double* zi = logits.row(i);
        double m = zi[0];
        for (std::size_t j = 1; j < classes; ++j) m = std::max(m, zi[j]);
        double sum = 0.0;
        for (std::size_t j = 0; j < classes; ++j) sum += detail::exp_d(zi[j] - m);
        const double lse = m + detail::log_d(sum);
        total += lse - zi[label];
        for (std::size_t j = 0; j < classes; ++j) {
            const double p = detail::exp_d(zi[j] - lse);
            const double onehot = (static_cast<std::size_t>(label) == j) ? 1.0 : 0.0;
            r.dlogits(i, j) = (p - onehot) / static_cast<double>(batch);
        }
    }
    r.loss = total / static_cast<double>(batch);
    return r;
}

std::vector<const Tensor2*> grad_ptrs(const std::vector<Tensor2>& grads) {
    std::vector<const Tensor2*> out;
    out.reserve(grads.size());
    for (const Tensor2& g : grads) out.push_back(&g);
    return out;
}

}  // namespace serf
