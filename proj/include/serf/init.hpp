#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "serf/rng.hpp"
#include "serf/tensor.hpp"

namespace serf {

enum class InitTag {
    glorot_uniform,
    glorot_normal,
    he_uniform,
    he_normal,
    lecun_normal,
    random_uniform,
    random_normal,
};

// Weight initializer. The scaled families derive their spread from the fan
// counts; random_uniform draws on [a, b), random_normal from N(mu, sigma^2).
struct Initializer {
    InitTag tag = InitTag::glorot_uniform;
    double a = -0.05;
    double b = 0.05;
    double mu = 0.0;
    double sigma = 0.05;
};

Initializer make_initializer(InitTag tag);
Initializer make_random_uniform(double a, double b);      // requires a < b
Initializer make_random_normal(double mu, double sigma);  // requires sigma > 0

const char* init_name(InitTag tag);
std::optional<InitTag> parse_init_tag(std::string_view name);

// fan_in x fan_out matrix drawn from rng. Target variances:
// glorot 2/(fan_in+fan_out), he 2/fan_in, lecun 1/fan_in; the uniform
// variants use the bound that matches the same variance.
Tensor2 init_weights(const Initializer& init, std::size_t fan_in, std::size_t fan_out, Rng& rng);

}  // namespace serf
