#include "serf/init.hpp"

#include <cmath>
#include <stdexcept>

namespace serf {

Initializer make_initializer(InitTag tag) {
    Initializer init;
    init.tag = tag;
    return init;
}

Initializer make_random_uniform(double a, double b) {
    if (!(a < b)) {
        throw std::invalid_argument("random_uniform requires a < b, got a=" + std::to_string(a) +
                                    " b=" + std::to_string(b));
    }
    Initializer init;
    init.tag = InitTag::random_uniform;
    init.a = a;
    init.b = b;
    return init;
}

Initializer make_random_normal(double mu, double sigma) {
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("random_normal requires sigma > 0, got sigma=" +
                                    std::to_string(sigma));
    }
    Initializer init;
    init.tag = InitTag::random_normal;
    init.mu = mu;
    init.sigma = sigma;
    return init;
}

const char* init_name(InitTag tag) {
    switch (tag) {
        case InitTag::glorot_uniform: return "glorot_uniform";
        case InitTag::glorot_normal: return "glorot_normal";
        case InitTag::he_uniform: return "he_uniform";
        case InitTag::he_normal: return "he_normal";
        case InitTag::lecun_normal: return "lecun_normal";
        case InitTag::random_uniform: return "random_uniform";
        case InitTag::random_normal: return "random_normal";
    }
    return "?";
}

std::optional<InitTag> parse_init_tag(std::string_view name) {
    if (name == "glorot_uniform") return InitTag::glorot_uniform;
    if (name == "glorot_normal") return InitTag::glorot_normal;
    if (name == "he_uniform") return InitTag::he_uniform;
    if (name == "he_normal") return InitTag::he_normal;
    if (name == "lecun_normal") return InitTag::lecun_normal;
    if (name == "random_uniform") return InitTag::random_uniform;
    if (name == "random_normal") return InitTag::random_normal;
    return std::nullopt;
}

Tensor2 init_weights(const Initializer& init, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    if (fan_in < 1 || fan_out < 1) {
        throw std::invalid_argument("init_weights requires fan_in >= 1 and fan_out >= 1");
    }
    const double fi = static_cast<double>(fan_in);
    const double fo = static_cast<double>(fan_out);

    Tensor2 w(fan_in, fan_out);
    switch (init.tag) {
        case InitTag::glorot_uniform: {
            const double limit = std::sqrt(6.0 / (fi + fo));
            rng.fill_uniform(-limit, limit, w.data(), w.size());
            break;
        }
        case InitTag::glorot_normal:
            rng.fill_normal(0.0, std::sqrt(2.0 / (fi + fo)), w.data(), w.size());
            break;
        case InitTag::he_uniform: {
            const double limit = std::sqrt(6.0 / fi);
            rng.fill_uniform(-limit, limit, w.data(), w.size());
            break;
        }
        case InitTag::he_normal:
            rng.fill_normal(0.0, std::sqrt(2.0 / fi), w.data(), w.size());
            break;
        case InitTag::lecun_normal:
            rng.fill_normal(0.0, std::sqrt(1.0 / fi), w.data(), w.size());
            break;
        case InitTag::random_uniform:
            rng.fill_uniform(init.a, init.b, w.data(), w.size());
            break;
        case InitTag::random_normal:
            rng.fill_normal(init.mu, init.sigma, w.data(), w.size());
            break;
    }
    return w;
}

}  // namespace serf
