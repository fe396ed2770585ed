#include "serf/scalar_math.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

#include "math_tables.hpp"

// Only exactly-rounded IEEE primitives from <cmath> are used here (fma, fabs,
// copysign, nearbyint); the transcendentals themselves are all local so the
// AVX2 twins in kernels_avx2.cpp can reproduce them operation for operation.

namespace serf {

namespace detail {

namespace {

template <std::size_t N>
inline double horner(const double (&c)[N], double x) {
    double acc = c[N - 1];
    for (std::size_t i = N - 1; i-- > 0;) acc = std::fma(acc, x, c[i]);
    return acc;
}

constexpr double kTiniest = std::numeric_limits<double>::denorm_min();

}  // namespace

double exp_d(double x) {
    // Cody-Waite reduction; the clamp keeps the scale exponents in range,
    // results past the clamp are 0 or +inf anyway.
    double xc = x < -1000.0 ? -1000.0 : (x > 1000.0 ? 1000.0 : x);
    double nd = std::nearbyint(xc * kInvLn2);
    double r = (xc - nd * kLn2Hi) - nd * kLn2Lo;
    double p = horner(kExpTaylor, r);
    auto k = static_cast<std::int64_t>(nd);
    std::int64_t k1 = k >> 1;
    // Two-step scaling keeps each factor a normal power of two and lets the
    // final multiply round once into the subnormal range.
    double s1 = std::bit_cast<double>((1023 + k1) << 52);
    double s2 = std::bit_cast<double>((1023 + (k - k1)) << 52);
    return (p * s1) * s2;
}

double expm1_d(double x) {
    if (std::fabs(x) < 0.5) return x * horner(kExpm1Small, x);
    return exp_d(x) - 1.0;
}

double log1p01_d(double u) {
    double w = 1.0 + u;
    // w - 1 and 0.5*w - 1 are exact (Sterbenz), c recovers the rounding
    // error of 1 + u.
    bool big = w >= kSqrt2;
    double dk = big ? 1.0 : 0.0;
    double f = big ? 0.5 * w - 1.0 : w - 1.0;
    double c = (u - (w - 1.0)) / w;
    double s = f / (2.0 + f);
    double z = s * s;
    double R = z * horner(kLogPoly, z);
    double hfsq = 0.5 * f * f;
    return dk * kLn2Hi - ((hfsq - (s * (hfsq + R) + (dk * kLn2Lo + c))) - f);
}

double log_d(double x) {
    auto bits = std::bit_cast<std::int64_t>(x);
    std::int64_t e = (bits >> 52) - 1023;
    double w = std::bit_cast<double>((bits & 0xFFFFFFFFFFFFFLL) | 0x3FF0000000000000LL);
    if (w >= kSqrt2) {
        w *= 0.5;
        e += 1;
    }
    double f = w - 1.0;
    double dk = static_cast<double>(e);
    double s = f / (2.0 + f);
    double z = s * s;
    double R = z * horner(kLogPoly, z);
    double hfsq = 0.5 * f * f;
    return dk * kLn2Hi - ((hfsq - (s * (hfsq + R) + dk * kLn2Lo)) - f);
}

}  // namespace detail

double softplus(double x) {
    double e = detail::exp_d(-std::fabs(x));
    if (x <= -30.0) return e < detail::kTiniest ? detail::kTiniest : e;
    double xp = x > 0.0 ? x : 0.0;
    return xp + detail::log1p01_d(e);
}

double sigmoid(double x) {
    double e = detail::exp_d(-std::fabs(x));
    if (e < detail::kTiniest) e = detail::kTiniest;
    return x < 0.0 ? e / (1.0 + e) : 1.0 / (1.0 + e);
}

double tanh(double x) {
    double t = std::fabs(x);
    double r = 1.0;
    if (t < 20.0) {
        double em = detail::expm1_d(-2.0 * t);
        r = -em / (2.0 + em);
    }
    return std::copysign(r, x);
}

double erf(double x) {
    double a = std::fabs(x);
    double r;
    if (a >= 6.0) {
        r = 1.0;
    } else if (a >= 1.0) {
        double u = (a - 3.5) * 0.4;
        r = 1.0 - detail::exp_d(-(a * a)) * detail::horner(detail::kErfTail, u);
    } else {
        r = a * detail::horner(detail::kErfSmall, a * a);
    }
    return std::copysign(r, x);
}

double erf_derivative(double x) {
    return kTwoOverSqrtPi * detail::exp_d(-(x * x));
}

}  // namespace serf
