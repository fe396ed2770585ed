#pragma once

// Polynomial tables shared by the scalar and AVX2 kernels. Values are pinned
// as hexfloats so both sides read identical constants.

namespace serf::detail {

inline constexpr double kLn2Hi = 0x1.62e4200000000p-1;
inline constexpr double kLn2Lo = 0x1.fdf473de6af28p-22;
inline constexpr double kInvLn2 = 0x1.71547652b82fep+0;
inline constexpr double kSqrt2 = 0x1.6a09e667f3bcdp+0;
inline constexpr double kInvSqrt2 = 0x1.6a09e667f3bcdp-1;
inline constexpr double kInvSqrt2Pi = 0x1.9884533d43651p-2;

// erf(x)/x on [0,1), even polynomial in x^2.
inline constexpr double kErfSmall[] = {
    0x1.20dd750429b6dp+0,
    -0x1.812746b0379e6p-2,
    0x1.ce2f21a042b32p-4,
    -0x1.b82ce31284e9cp-6,
    0x1.565bcd0dbc1adp-8,
    -0x1.c02db3db06d60p-11,
    0x1.f9a321dd3898cp-14,
    -0x1.f4d1e3a67dc3ep-17,
    0x1.b9df2954a9147p-20,
    -0x1.5f1f0634fb062p-23,
    0x1.f7b72e5bcd4ffp-27,
    -0x1.38a4b8db8a7c5p-30,
    0x1.0613987edce0dp-34,
};

// (1 - erf(x)) * exp(x^2) on [1,6], argument u = 0.4*(x - 3.5).
// Strictly positive on the interval, so erf(x) < 1 holds below the
// saturation cutoff.
inline constexpr double kErfTail[] = {
    0x1.3e0a99a0ee783p-3,
    -0x1.a72747a5faa72p-4,
    0x1.10eccd703b5cep-4,
    -0x1.56274d936febcp-5,
    0x1.a1b8208df2241p-6,
    -0x1.f18028bca36aep-7,
    0x1.2174275e60112p-7,
    -0x1.49847a498b643p-8,
    0x1.6f6f2221a03ecp-9,
    -0x1.91ca9f29a6bc3p-10,
    0x1.af2d0546bad52p-11,
    -0x1.c596a59649479p-12,
    0x1.d5c84c79844aep-13,
    -0x1.e863536084450p-14,
    0x1.ebbee4ca8fe43p-15,
    -0x1.a4d1a166e63acp-16,
    0x1.927d0b52eba24p-17,
    -0x1.535bd8cb1aaf6p-17,
    0x1.4bf2498b234a6p-18,
    0x1.90e1ace775e6ap-21,
    -0x1.b3d1a8425ce54p-22,
    -0x1.174fe00d76d84p-20,
    0x1.014d22812da03p-21,
};

// expm1(x)/x on [-0.5, 0.5].
inline constexpr double kExpm1Small[] = {
    0x1.0000000000000p+0,
    0x1.0000000000000p-1,
    0x1.5555555555555p-3,
    0x1.55555555555e5p-5,
    0x1.1111111111164p-7,
    0x1.6c16c16bf2c4cp-10,
    0x1.a01a019ffb024p-13,
    0x1.a01a021b75950p-16,
    0x1.71de3aadf86a5p-19,
    0x1.27e42df159809p-22,
    0x1.ae6352d87143bp-26,
    0x1.20362aba28d91p-29,
    0x1.629dceba7cca0p-33,
};

// exp(r) Taylor coefficients 1/k! for |r| <= ln2/2.
inline constexpr double kExpTaylor[] = {
    0x1.0000000000000p+0,
    0x1.0000000000000p+0,
    0x1.0000000000000p-1,
    0x1.5555555555555p-3,
    0x1.5555555555555p-5,
    0x1.1111111111111p-7,
    0x1.6c16c16c16c17p-10,
    0x1.a01a01a01a01ap-13,
    0x1.a01a01a01a01ap-16,
    0x1.71de3a556c734p-19,
    0x1.27e4fb7789f5cp-22,
    0x1.ae64567f544e4p-26,
    0x1.1eed8eff8d898p-29,
    0x1.6124613a86d09p-33,
};

// P(z) with R(z) = z*P(z) for the log kernel: log(1+f) = f - f^2/2 + s*(f^2/2 + R),
// s = f/(2+f), z = s^2, |f| <= sqrt2 - 1.
inline constexpr double kLogPoly[] = {
    0x1.5555555555558p-1,
    0x1.9999999994968p-2,
    0x1.2492492ef9b09p-2,
    0x1.c71c6199270a2p-3,
    0x1.746311faeda42p-3,
    0x1.39f26a8652132p-3,
    0x1.2bea4e783c6f3p-3,
};

}  // namespace serf::detail
