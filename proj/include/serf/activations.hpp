#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace serf {

enum class ActivationTag {
    serf,
    swish,
    mish,
    gelu,
    relu,
    leaky_relu,
    elu,
    selu,
    sigmoid,
    tanh,
    identity,
};

inline constexpr double kSeluAlpha = 0x1.ac5afad782cf1p+0;   // 1.6732632423543772
inline constexpr double kSeluLambda = 0x1.0cfabd6a91132p+0;  // 1.0507009873554805
inline constexpr double kDefaultLeakySlope = 0.01;
inline constexpr double kDefaultEluAlpha = 1.0;

// A concrete activation: the kind plus its parameter where one applies
// (leaky_relu slope, elu alpha). Build through make_activation so the
// parameter is validated.
struct Activation {
    ActivationTag tag = ActivationTag::identity;
    double param = 0.0;
};

// Throws std::invalid_argument for a parameter outside the valid range
// (slope in [0,1), alpha positive finite) or a parameter supplied for a
// kind that takes none.
Activation make_activation(ActivationTag tag, std::optional<double> param = std::nullopt);

const char* tag_name(ActivationTag tag);
std::optional<ActivationTag> parse_activation_tag(std::string_view name);
const std::vector<ActivationTag>& all_activation_tags();

double value(const Activation& a, double x);
double grad(const Activation& a, double x);
double second_grad(const Activation& a, double x);

// Pointwise maps over arrays. Dispatch to the AVX2 kernels when active;
// either path yields bit-identical output.
void batch_value(const Activation& a, const double* x, double* y, std::size_t n);
void batch_grad(const Activation& a, const double* x, double* y, std::size_t n);

// serf(x) = x * erf(ln(1 + e^x))
double serf(double x);
double serf_grad(double x);
double serf_second_grad(double x);

// serf'(x) = precond(x) * swish(x) + gate(x), with
//   precond(x) = 2/sqrt(pi) * exp(-softplus(x)^2)
//   swish(x)   = x * sigmoid(x)
//   gate(x)    = erf(softplus(x))   (the singularity-free form of serf(x)/x)
// total is the gradient assembled from the three parts; it is bit-identical
// to serf_grad(x). precond underflows to exactly 0 once softplus(x)^2
// exceeds the exp underflow threshold (x above roughly 27.3); gate stays
// strictly positive for all finite x.
struct SerfDecomposition {
    double precond;
    double swish_val;
    double gate;
    double total;
};
SerfDecomposition serf_decompose(double x);

}  // namespace serf
