#include "serf/activations.hpp"

#include <cmath>
#include <stdexcept>

#include "kernels_avx2.hpp"
#include "math_tables.hpp"
#include "serf/scalar_math.hpp"
#include "serf/simd.hpp"

// The scalar formulas below are the reference semantics for the AVX2 loops
// in kernels_avx2.cpp: same operations in the same order, so keep the two
// files in sync. Groupings that look redundant (x*sig before multiplying by
// something tiny, sp*E before scaling) are load-bearing: they keep every
// intermediate finite for inputs out to +-1e308.

namespace serf {

using detail::exp_d;
using detail::expm1_d;
using detail::kInvSqrt2;
using detail::kInvSqrt2Pi;

Activation make_activation(ActivationTag tag, std::optional<double> param) {
    switch (tag) {
        case ActivationTag::leaky_relu: {
            double slope = param.value_or(kDefaultLeakySlope);
            if (!(slope >= 0.0 && slope < 1.0)) {
                throw std::invalid_argument("leaky_relu slope must lie in [0, 1), got " +
                                            std::to_string(slope));
            }
            return {tag, slope};
        }
        case ActivationTag::elu: {
            double alpha = param.value_or(kDefaultEluAlpha);
            if (!(alpha > 0.0) || !std::isfinite(alpha)) {
                throw std::invalid_argument("elu alpha must be positive and finite, got " +
                                            std::to_string(alpha));
            }
            return {tag, alpha};
        }
        default:
            if (param.has_value()) {
                throw std::invalid_argument(std::string(tag_name(tag)) +
                                            " does not take a parameter");
            }
            return {tag, 0.0};
    }
}

const char* tag_name(ActivationTag tag) {
    switch (tag) {
        case ActivationTag::serf: return "serf";
        case ActivationTag::swish: return "swish";
        case ActivationTag::mish: return "mish";
        case ActivationTag::gelu: return "gelu";
        case ActivationTag::relu: return "relu";
        case ActivationTag::leaky_relu: return "leaky_relu";
        case ActivationTag::elu: return "elu";
        case ActivationTag::selu: return "selu";
        case ActivationTag::sigmoid: return "sigmoid";
        case ActivationTag::tanh: return "tanh";
        case ActivationTag::identity: return "identity";
    }
    return "?";
}

const std::vector<ActivationTag>& all_activation_tags() {
    static const std::vector<ActivationTag> tags = {
        ActivationTag::serf,    ActivationTag::swish,      ActivationTag::mish,
        ActivationTag::gelu,    ActivationTag::relu,       ActivationTag::leaky_relu,
        ActivationTag::elu,     ActivationTag::selu,       ActivationTag::sigmoid,
        ActivationTag::tanh,    ActivationTag::identity,
    };
    return tags;
}

std::optional<ActivationTag> parse_activation_tag(std::string_view name) {
    for (ActivationTag t : all_activation_tags()) {
        if (name == tag_name(t)) return t;
    }
    return std::nullopt;
}

double serf(double x) {
    double sp = softplus(x);
    double g = erf(sp);
    return x * g;
}

SerfDecomposition serf_decompose(double x) {
    double sp = softplus(x);
    double sig = sigmoid(x);
    double p = erf_derivative(sp);
    double sw = x * sig;
    double g = erf(sp);
    double total = std::fma(sw, p, g);
    return {p, sw, g, total};
}

double serf_grad(double x) {
    return serf_decompose(x).total;
}

double serf_second_grad(double x) {
    double sp = softplus(x);
    double sig = sigmoid(x);
    double E = exp_d(-(sp * sp));
    double xs = x * sig;
    double spE = sp * E;
    double bracket = E * (1.0 - sig) - 2.0 * (spE * sig);
    return kTwoOverSqrtPi * (2.0 * (E * sig) + xs * bracket);
}

namespace {

double swish_value(double x) {
    double sig = sigmoid(x);
    return x * sig;
}

double swish_grad(double x) {
    double sig = sigmoid(x);
    return std::fma(x, sig * (1.0 - sig), sig);
}

double swish_second(double x) {
    double sig = sigmoid(x);
    double d = sig * (1.0 - sig);
    return d * std::fma(x, 1.0 - 2.0 * sig, 2.0);
}

double mish_value(double x) {
    double sp = softplus(x);
    double t = serf::tanh(sp);
    return x * t;
}

double mish_grad(double x) {
    double sp = softplus(x);
    double t = serf::tanh(sp);
    double sig = sigmoid(x);
    double S = (1.0 - t) * (1.0 + t);
    double xs = x * sig;
    return std::fma(xs, S, t);
}

double mish_second(double x) {
    double sp = softplus(x);
    double t = serf::tanh(sp);
    double sig = sigmoid(x);
    double S = (1.0 - t) * (1.0 + t);
    double xs = x * sig;
    return 2.0 * (S * sig) + xs * (S * (1.0 - sig)) - 2.0 * (xs * ((S * t) * sig));
}

double gelu_value(double x) {
    double cdf = 0.5 * (1.0 + erf(x * kInvSqrt2));
    return x * cdf;
}

double gelu_pdf(double x) {
    return kInvSqrt2Pi * exp_d(-((0.5 * x) * x));
}

double gelu_grad(double x) {
    double cdf = 0.5 * (1.0 + erf(x * kInvSqrt2));
    return std::fma(x, gelu_pdf(x), cdf);
}

double gelu_second(double x) {
    double pdf = gelu_pdf(x);
    double xpdf = x * pdf;
    return 2.0 * pdf - xpdf * x;
}

double elu_value(double x, double alpha) { return x > 0.0 ? x : alpha * expm1_d(x); }
double elu_grad(double x, double alpha) { return x > 0.0 ? 1.0 : alpha * exp_d(x); }
double elu_second(double x, double alpha) { return x > 0.0 ? 0.0 : alpha * exp_d(x); }

double tanh_grad(double x) {
    double t = serf::tanh(x);
    return (1.0 - t) * (1.0 + t);
}

double tanh_second(double x) {
    double t = serf::tanh(x);
    double S = (1.0 - t) * (1.0 + t);
    return -2.0 * (t * S);
}

double sigmoid_grad(double x) {
    double s = sigmoid(x);
    return s * (1.0 - s);
}

double sigmoid_second(double x) {
    double s = sigmoid(x);
    return (s * (1.0 - s)) * (1.0 - 2.0 * s);
}

}  // namespace

double value(const Activation& a, double x) {
    switch (a.tag) {
        case ActivationTag::serf: return serf(x);
        case ActivationTag::swish: return swish_value(x);
        case ActivationTag::mish: return mish_value(x);
        case ActivationTag::gelu: return gelu_value(x);
        case ActivationTag::relu: return x > 0.0 ? x : 0.0;
        case ActivationTag::leaky_relu: return x > 0.0 ? x : a.param * x;
        case ActivationTag::elu: return elu_value(x, a.param);
        case ActivationTag::selu:
            return x > 0.0 ? kSeluLambda * x : kSeluLambda * (kSeluAlpha * expm1_d(x));
        case ActivationTag::sigmoid: return sigmoid(x);
        case ActivationTag::tanh: return serf::tanh(x);
        case ActivationTag::identity: return x;
    }
    return x;
}

double grad(const Activation& a, double x) {
    switch (a.tag) {
        case ActivationTag::serf: return serf_grad(x);
        case ActivationTag::swish: return swish_grad(x);
        case ActivationTag::mish: return mish_grad(x);
        case ActivationTag::gelu: return gelu_grad(x);
        case ActivationTag::relu: return x > 0.0 ? 1.0 : 0.0;
        case ActivationTag::leaky_relu: return x > 0.0 ? 1.0 : a.param;
        case ActivationTag::elu: return elu_grad(x, a.param);
        case ActivationTag::selu:
            return x > 0.0 ? kSeluLambda : kSeluLambda * (kSeluAlpha * exp_d(x));
        case ActivationTag::sigmoid: return sigmoid_grad(x);
        case ActivationTag::tanh: return tanh_grad(x);
        case ActivationTag::identity: return 1.0;
    }
    return 1.0;
}

double second_grad(const Activation& a, double x) {
    switch (a.tag) {
        case ActivationTag::serf: return serf_second_grad(x);
        case ActivationTag::swish: return swish_second(x);
        case ActivationTag::mish: return mish_second(x);
        case ActivationTag::gelu: return gelu_second(x);
        case ActivationTag::relu: return 0.0;
        case ActivationTag::leaky_relu: return 0.0;
        case ActivationTag::elu: return elu_second(x, a.param);
        case ActivationTag::selu:
            return x > 0.0 ? 0.0 : kSeluLambda * (kSeluAlpha * exp_d(x));
        case ActivationTag::sigmoid: return sigmoid_second(x);
        case ActivationTag::tanh: return tanh_second(x);
        case ActivationTag::identity: return 0.0;
    }
    return 0.0;
}

void batch_value(const Activation& a, const double* x, double* y, std::size_t n) {
#ifdef SERF_HAVE_AVX2
    if (simd::active_level() == simd::Level::avx2) {
        detail_avx2::batch_value_avx2(a, x, y, n);
        return;
    }
#endif
    for (std::size_t i = 0; i < n; ++i) y[i] = value(a, x[i]);
}

void batch_grad(const Activation& a, const double* x, double* y, std::size_t n) {
#ifdef SERF_HAVE_AVX2
    if (simd::active_level() == simd::Level::avx2) {
        detail_avx2::batch_grad_avx2(a, x, y, n);
        return;
    }
#endif
    for (std::size_t i = 0; i < n; ++i) y[i] = grad(a, x[i]);
}

}  // namespace serf
