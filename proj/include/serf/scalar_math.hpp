#pragma once

// Scalar reference kernels for the transcendental functions everything else
// is built from. These are the ground truth the SIMD variants are compared
// against bit-for-bit, so they avoid libm: every operation is an explicitly
// ordered sequence of IEEE double ops that the vector code can replicate.
//
// All public functions are total over finite doubles and never return NaN
// or an infinity for finite input.

namespace serf {

inline constexpr double kTwoOverSqrtPi = 0x1.20dd750429b6dp+0;
inline constexpr double kLn2 = 0x1.62e42fefa39efp-1;

// ln(1 + e^x). Positive for all finite x, equals x + ln(1 + e^-x) for large x.
double softplus(double x);

// 1 / (1 + e^-x). Two-branch form, stable at both tails. Range (0, 1]:
// strictly positive everywhere, may round to 1.0 for large x.
double sigmoid(double x);

double tanh(double x);

// Error function, max relative error a few 1e-13, saturates to +-1 at |x| >= 6.
double erf(double x);

// d/dx erf(x) = 2/sqrt(pi) * exp(-x^2).
double erf_derivative(double x);

namespace detail {

// e^x with natural overflow to +inf above ~709.8 and underflow to 0 below
// ~-745.2 (gradual, subnormal results are produced where they exist).
double exp_d(double x);

// e^x - 1, accurate near 0.
double expm1_d(double x);

// ln(1 + u) for u in [0, 1] only. Used by softplus.
double log1p01_d(double u);

// ln(x) for positive normal x. Used by the polar normal sampler.
double log_d(double x);

}  // namespace detail

}  // namespace serf
