#include "serf/optim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace serf {

namespace {

void validate(const OptimizerConfig& c) {
    if (!(c.lr > 0.0) || !std::isfinite(c.lr)) {
        throw std::invalid_argument("optimizer requires lr > 0, got " + std::to_string(c.lr));
    }
    switch (c.tag) {
        case OptimTag::sgd:
            if (!(c.momentum >= 0.0 && c.momentum < 1.0)) {
                throw std::invalid_argument("sgd requires 0 <= momentum < 1, got " +
                                            std::to_string(c.momentum));
            }
            break;
        case OptimTag::adam:
            if (!(c.beta1 > 0.0 && c.beta1 < 1.0) || !(c.beta2 > 0.0 && c.beta2 < 1.0)) {
                throw std::invalid_argument("adam requires betas in (0, 1), got beta1=" +
                                            std::to_string(c.beta1) +
                                            " beta2=" + std::to_string(c.beta2));
            }
            if (!(c.eps > 0.0)) {
                throw std::invalid_argument("adam requires eps > 0, got " + std::to_string(c.eps));
            }
            break;
        case OptimTag::adagrad:
            if (!(c.eps > 0.0)) {
                throw std::invalid_argument("adagrad requires eps > 0, got " +
                                            std::to_string(c.eps));
            }
            break;
    }
}

}  // namespace

OptimizerConfig make_sgd(double lr, double momentum) {
    OptimizerConfig c;
    c.tag = OptimTag::sgd;
    c.lr = lr;
    c.momentum = momentum;
    validate(c);
    return c;
}

OptimizerConfig make_adam(double lr, double beta1, double beta2, double eps) {
    OptimizerConfig c;
    c.tag = OptimTag::adam;
    c.lr = lr;
    c.beta1 = beta1;
    c.beta2 = beta2;
    c.eps = eps;
    validate(c);
    return c;
}

OptimizerConfig make_adagrad(double lr, double eps) {
    OptimizerConfig c;
    c.tag = OptimTag::adagrad;
    c.lr = lr;
    c.eps = eps;
    validate(c);
    return c;
}

const char* optim_name(OptimTag tag) {
    switch (tag) {
        case OptimTag::sgd: return "sgd";
        case OptimTag::adam: return "adam";
        case OptimTag::adagrad: return "adagrad";
    }
    return "?";
}

std::optional<OptimTag> parse_optim_tag(std::string_view name) {
    if (name == "sgd") return OptimTag::sgd;
    if (name == "adam") return OptimTag::adam;
    if (name == "adagrad") return OptimTag::adagrad;
    return std::nullopt;
}

Optimizer::Optimizer(const OptimizerConfig& config) : config_(config) { validate(config_); }

void Optimizer::step(const std::vector<Tensor2*>& params,
                     const std::vector<const Tensor2*>& grads) {
    if (params.size() != grads.size()) {
        throw std::invalid_argument("step: " + std::to_string(params.size()) + " params vs " +
                                    std::to_string(grads.size()) + " grads");
    }
    if (t_ == 0) {
        slot_a_.reserve(params.size());
        for (const Tensor2* p : params) {
            slot_a_.emplace_back(p->rows(), p->cols());
        }
        if (config_.tag == OptimTag::adam) {
            slot_b_.reserve(params.size());
            for (const Tensor2* p : params) {
                slot_b_.emplace_back(p->rows(), p->cols());
            }
        }
    } else if (params.size() != slot_a_.size()) {
        throw std::invalid_argument("step: parameter count changed from " +
                                    std::to_string(slot_a_.size()) + " to " +
                                    std::to_string(params.size()));
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        require_shape(*params[i], slot_a_[i].rows(), slot_a_[i].cols(), "step param");
        require_shape(*grads[i], slot_a_[i].rows(), slot_a_[i].cols(), "step grad");
    }

    ++t_;
    const double lr = config_.lr;
    switch (config_.tag) {
        case OptimTag::sgd: {
            const double mu = config_.momentum;
            for (std::size_t i = 0; i < params.size(); ++i) {
                double* p = params[i]->data();
                const double* g = grads[i]->data();
                double* v = slot_a_[i].data();
                const std::size_t n = params[i]->size();
                for (std::size_t k = 0; k < n; ++k) {
                    v[k] = mu * v[k] - lr * g[k];
                    p[k] += v[k];
                }
            }
            break;
        }
        case OptimTag::adam: {
            const double b1 = config_.beta1;
            const double b2 = config_.beta2;
            const double eps = config_.eps;
            beta1_pow_ *= b1;
            beta2_pow_ *= b2;
            const double m_corr = 1.0 / (1.0 - beta1_pow_);
            const double v_corr = 1.0 / (1.0 - beta2_pow_);
            for (std::size_t i = 0; i < params.size(); ++i) {
                double* p = params[i]->data();
                const double* g = grads[i]->data();
                double* m = slot_a_[i].data();
                double* v = slot_b_[i].data();
                const std::size_t n = params[i]->size();
                for (std::size_t k = 0; k < n; ++k) {
                    m[k] = b1 * m[k] + (1.0 - b1) * g[k];
                    v[k] = b2 * v[k] + (1.0 - b2) * (g[k] * g[k]);
                    const double m_hat = m[k] * m_corr;
                    const double v_hat = v[k] * v_corr;
                    p[k] -= lr * m_hat / (std::sqrt(v_hat) + eps);
                }
            }
            break;
        }
        case OptimTag::adagrad: {
            const double eps = config_.eps;
            for (std::size_t i = 0; i < params.size(); ++i) {
                double* p = params[i]->data();
                const double* g = grads[i]->data();
                double* acc = slot_a_[i].data();
                const std::size_t n = params[i]->size();
                for (std::size_t k = 0; k < n; ++k) {
                    acc[k] += g[k] * g[k];
                    p[k] -= lr * g[k] / (std::sqrt(acc[k]) + eps);
                }
            }
            break;
        }
    }
}

}  // namespace serf
