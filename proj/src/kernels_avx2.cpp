#include "kernels_avx2.hpp"

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "math_tables.hpp"
#include "serf/scalar_math.hpp"

// Vector twins of the scalar kernels in scalar_math.cpp / activations.cpp.
// Every arithmetic step matches the scalar side in operation and order, so
// results are bit-identical lane by lane; the equivalence tests enforce it.
// Branches become masked selects. Discarded lanes may compute garbage
// (including NaN); blendv is a bitwise select, so that never leaks.

namespace serf::detail_avx2 {

namespace {

using namespace serf::detail;

constexpr double kTiniest = std::numeric_limits<double>::denorm_min();

inline __m256d vset(double v) { return _mm256_set1_pd(v); }
inline __m256d vabs(__m256d x) { return _mm256_andnot_pd(vset(-0.0), x); }
inline __m256d vneg(__m256d x) { return _mm256_xor_pd(x, vset(-0.0)); }

// mask true -> a
inline __m256d vselect(__m256d mask, __m256d a, __m256d b) { return _mm256_blendv_pd(b, a, mask); }

// valid when mag carries a + sign
inline __m256d vcopysign_pos(__m256d mag, __m256d sgn) {
    return _mm256_or_pd(mag, _mm256_and_pd(sgn, vset(-0.0)));
}

template <std::size_t N>
inline __m256d vhorner(const double (&c)[N], __m256d x) {
    __m256d acc = vset(c[N - 1]);
    for (std::size_t i = N - 1; i-- > 0;) acc = _mm256_fmadd_pd(acc, x, vset(c[i]));
    return acc;
}

inline __m256d vexp(__m256d x) {
    __m256d xc = _mm256_min_pd(_mm256_max_pd(x, vset(-1000.0)), vset(1000.0));
    __m256d nd = _mm256_round_pd(_mm256_mul_pd(xc, vset(kInvLn2)),
                                 _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_sub_pd(_mm256_sub_pd(xc, _mm256_mul_pd(nd, vset(kLn2Hi))),
                              _mm256_mul_pd(nd, vset(kLn2Lo)));
    __m256d p = vhorner(kExpTaylor, r);
    __m128i k32 = _mm256_cvtpd_epi32(nd);
    __m128i k1 = _mm_srai_epi32(k32, 1);
    __m128i k2 = _mm_sub_epi32(k32, k1);
    __m256i bias = _mm256_set1_epi64x(1023);
    __m256i e1 = _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(k1), bias), 52);
    __m256i e2 = _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(k2), bias), 52);
    return _mm256_mul_pd(_mm256_mul_pd(p, _mm256_castsi256_pd(e1)), _mm256_castsi256_pd(e2));
}

inline __m256d vexpm1(__m256d x) {
    __m256d small = _mm256_cmp_pd(vabs(x), vset(0.5), _CMP_LT_OQ);
    __m256d ps = _mm256_mul_pd(x, vhorner(kExpm1Small, x));
    __m256d pb = _mm256_sub_pd(vexp(x), vset(1.0));
    return vselect(small, ps, pb);
}

inline __m256d vlog1p01(__m256d u) {
    __m256d one = vset(1.0);
    __m256d w = _mm256_add_pd(one, u);
    __m256d big = _mm256_cmp_pd(w, vset(kSqrt2), _CMP_GE_OQ);
    __m256d dk = _mm256_and_pd(big, one);
    __m256d wm1 = _mm256_sub_pd(w, one);
    __m256d f = vselect(big, _mm256_sub_pd(_mm256_mul_pd(vset(0.5), w), one), wm1);
    __m256d c = _mm256_div_pd(_mm256_sub_pd(u, wm1), w);
    __m256d s = _mm256_div_pd(f, _mm256_add_pd(vset(2.0), f));
    __m256d z = _mm256_mul_pd(s, s);
    __m256d R = _mm256_mul_pd(z, vhorner(kLogPoly, z));
    __m256d hfsq = _mm256_mul_pd(_mm256_mul_pd(vset(0.5), f), f);
    __m256d inner = _mm256_add_pd(_mm256_mul_pd(s, _mm256_add_pd(hfsq, R)),
                                  _mm256_add_pd(_mm256_mul_pd(dk, vset(kLn2Lo)), c));
    return _mm256_sub_pd(_mm256_mul_pd(dk, vset(kLn2Hi)),
                         _mm256_sub_pd(_mm256_sub_pd(hfsq, inner), f));
}

inline __m256d vsoftplus(__m256d x) {
    __m256d e = vexp(vneg(vabs(x)));
    __m256d low = _mm256_cmp_pd(x, vset(-30.0), _CMP_LE_OQ);
    __m256d clamped = _mm256_max_pd(e, vset(kTiniest));
    __m256d xp = _mm256_max_pd(x, _mm256_setzero_pd());
    __m256d mid = _mm256_add_pd(xp, vlog1p01(e));
    return vselect(low, clamped, mid);
}

inline __m256d vsigmoid(__m256d x) {
    __m256d e = _mm256_max_pd(vexp(vneg(vabs(x))), vset(kTiniest));
    __m256d denom = _mm256_add_pd(vset(1.0), e);
    __m256d neg = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_LT_OQ);
    return vselect(neg, _mm256_div_pd(e, denom), _mm256_div_pd(vset(1.0), denom));
}

inline __m256d vtanh(__m256d x) {
    __m256d t = vabs(x);
    __m256d em = vexpm1(_mm256_mul_pd(vset(-2.0), t));
    __m256d r = _mm256_div_pd(vneg(em), _mm256_add_pd(vset(2.0), em));
    r = vselect(_mm256_cmp_pd(t, vset(20.0), _CMP_GE_OQ), vset(1.0), r);
    return vcopysign_pos(r, x);
}

inline __m256d verf(__m256d x) {
    __m256d a = vabs(x);
    __m256d aa = _mm256_mul_pd(a, a);
    __m256d r_small = _mm256_mul_pd(a, vhorner(kErfSmall, aa));
    __m256d u = _mm256_mul_pd(_mm256_sub_pd(a, vset(3.5)), vset(0.4));
    __m256d r_tail =
        _mm256_sub_pd(vset(1.0), _mm256_mul_pd(vexp(vneg(aa)), vhorner(kErfTail, u)));
    __m256d r = vselect(_mm256_cmp_pd(a, vset(6.0), _CMP_GE_OQ), vset(1.0),
                        vselect(_mm256_cmp_pd(a, vset(1.0), _CMP_GE_OQ), r_tail, r_small));
    return vcopysign_pos(r, x);
}

inline __m256d verf_deriv(__m256d x) {
    return _mm256_mul_pd(vset(serf::kTwoOverSqrtPi), vexp(vneg(_mm256_mul_pd(x, x))));
}

inline __m256d vserf_value(__m256d x) {
    __m256d sp = vsoftplus(x);
    return _mm256_mul_pd(x, verf(sp));
}

inline __m256d vserf_grad(__m256d x) {
    __m256d sp = vsoftplus(x);
    __m256d sig = vsigmoid(x);
    __m256d p = verf_deriv(sp);
    __m256d sw = _mm256_mul_pd(x, sig);
    __m256d g = verf(sp);
    return _mm256_fmadd_pd(sw, p, g);
}

inline __m256d vswish_value(__m256d x) { return _mm256_mul_pd(x, vsigmoid(x)); }

inline __m256d vswish_grad(__m256d x) {
    __m256d sig = vsigmoid(x);
    return _mm256_fmadd_pd(x, _mm256_mul_pd(sig, _mm256_sub_pd(vset(1.0), sig)), sig);
}

inline __m256d vmish_value(__m256d x) {
    __m256d sp = vsoftplus(x);
    return _mm256_mul_pd(x, vtanh(sp));
}

inline __m256d vmish_grad(__m256d x) {
    __m256d t = vtanh(vsoftplus(x));
    __m256d sig = vsigmoid(x);
    __m256d S = _mm256_mul_pd(_mm256_sub_pd(vset(1.0), t), _mm256_add_pd(vset(1.0), t));
    __m256d xs = _mm256_mul_pd(x, sig);
    return _mm256_fmadd_pd(xs, S, t);
}

inline __m256d vgelu_cdf(__m256d x) {
    return _mm256_mul_pd(vset(0.5), _mm256_add_pd(vset(1.0), verf(_mm256_mul_pd(x, vset(kInvSqrt2)))));
}

inline __m256d vgelu_value(__m256d x) { return _mm256_mul_pd(x, vgelu_cdf(x)); }

inline __m256d vgelu_grad(__m256d x) {
    __m256d pdf = _mm256_mul_pd(
        vset(kInvSqrt2Pi), vexp(vneg(_mm256_mul_pd(_mm256_mul_pd(vset(0.5), x), x))));
    return _mm256_fmadd_pd(x, pdf, vgelu_cdf(x));
}

}  // namespace

void batch_value_avx2(const Activation& a, const double* x, double* y, std::size_t n) {
    std::size_t head = n - n % 4;
    switch (a.tag) {
        case ActivationTag::serf:
            for (std::size_t i = 0; i < head; i += 4)
                _mm256_storeu_pd(y + i, vserf_value(_mm256_loadu_pd(x + i)));
            break;
        case ActivationTag::swish:
            for (std::size_t i = 0; i < head; i += 4)
                _mm256_storeu_pd(y + i, vswish_value(_mm256_loadu_pd(x + i)));
            break;
        case ActivationTag::mish:
            for (std::size_t i = 0; i < head; i += 4)
                _mm256_storeu_pd(y + i, vmish_value(_mm256_loadu_pd(x + i)));
            break;
        case ActivationTag::gelu:
            for (std::size_t i = 0; i < head; i += 4)
                _mm256_storeu_pd(y + i, vgelu_value(_mm256_loadu_pd(x + i)));
            break;
        case ActivationTag::relu:
            for (std::size_t i = 0; i < head; i += 4) {
                __m256d v = _mm256_loadu_pd(x + i);
                _mm256_storeu_pd(y + i, _mm256_max_pd(v, _mm256_setzero_pd()));
            }
            break;
        case ActivationTag::leaky_relu:
            for (std::size_t i = 0; i < head; i += 4) {
                __m256d v = _mm256_loadu_pd(x + i);
                __m256d pos = _mm256_cmp_pd(v, _mm256_setzero_pd(), _CMP_GT_OQ);
                _mm256_storeu_pd(y + i, vselect(pos, v, _mm256_mul_pd(vset(a.param), v)));
            }
            break;
        case ActivationTag::elu:
            for (std::size_t i = 0; i < head; i += 4) {
                __m256d v = _mm256_loadu_pd(x + i);
                __m256d pos = _mm256_cmp_pd(v, _mm256_setzero_pd(), _CMP_GT_OQ);
                _mm256_storeu_pd(y + i, vselect(pos, v, _mm256_mul_pd(vset(a.param), vexpm1(v))));
            }
            break;
        case ActivationTag::selu:
            for (std::size_t i = 0; i < head; i += 4) {
                __m256d v = _mm256_loadu_pd(x + i);
                __m256d pos = _mm256_cmp_pd(v, _mm256_setzero_pd(), _CMP_GT_OQ);
                __m256d neg_branch =
                    _mm256_mul_pd(vset(kSeluLambda), _mm256_mul_pd(vset(kSeluAlpha), vexpm1(v)));
                _mm256_storeu_pd(
                    y + i, vselect(pos, _mm256_mul_pd(vset(kSeluLambda), v), neg_branch));
            }
            break;
        case ActivationTag::sigmoid:
            for (std::size_t i = 0; i < head; i += 4)
                _mm256_storeu_pd(y + i, vsigmoid(_mm256_loadu_pd(x + i)));
            break;
        case ActivationTag::tanh:
            for (std::size_t i = 0; i < head; i += 4)
                _mm256_storeu_pd(y + i, vtanh(_mm256_loadu_pd(x + i)));
            break;
        case ActivationTag::identity:
            for (std::size_t i = 0; i < head; i += 4)
                _mm256_storeu_pd(y + i, _mm256_loadu_pd(x + i));
            break;
    }
    for (std::size_t i = head; i < n; ++i) y[i] = value(a, x[i]);
}

void batch_grad_avx2(const Activation& a, const double* x, double* y, std::size_t n) {
    std::size_t head = n - n % 4;
    switch (a.tag) {
        case ActivationTag::serf:
            for (std::size_t i = 0; i < head; i += 4)
                _mm256_storeu_pd(y + i, vserf_grad(_mm256_loadu_pd(x + i)));
            break;
        case ActivationTag::swish:
            for (std::size_t i = 0; i < head; i += 4)
                _mm256_storeu_pd(y + i, vswish_grad(_mm256_loadu_pd(x + i)));
            break;
        case ActivationTag::mish:
            for (std::size_t i = 0; i < head; i += 4)
                _mm256_storeu_pd(y + i, vmish_grad(_mm256_loadu_pd(x + i)));
            break;
        case ActivationTag::gelu:
            for (std::size_t i = 0; i < head; i += 4)
                _mm256_storeu_pd(y + i, vgelu_grad(_mm256_loadu_pd(x + i)));
            break;
        case ActivationTag::relu:
            for (std::size_t i = 0; i < head; i += 4) {
                __m256d v = _mm256_loadu_pd(x + i);
                __m256d pos = _mm256_cmp_pd(v, _mm256_setzero_pd(), _CMP_GT_OQ);
                _mm256_storeu_pd(y + i, _mm256_and_pd(pos, vset(1.0)));
            }
            break;
        case ActivationTag::leaky_relu:
            for (std::size_t i = 0; i < head; i += 4) {
                __m256d v = _mm256_loadu_pd(x + i);
                __m256d pos = _mm256_cmp_pd(v, _mm256_setzero_pd(), _CMP_GT_OQ);
                _mm256_storeu_pd(y + i, vselect(pos, vset(1.0), vset(a.param)));
            }
            break;
        case ActivationTag::elu:
            for (std::size_t i = 0; i < head; i += 4) {
                __m256d v = _mm256_loadu_pd(x + i);
                __m256d pos = _mm256_cmp_pd(v, _mm256_setzero_pd(), _CMP_GT_OQ);
                _mm256_storeu_pd(y + i, vselect(pos, vset(1.0), _mm256_mul_pd(vset(a.param), vexp(v))));
            }
            break;
        case ActivationTag::selu:
            for (std::size_t i = 0; i < head; i += 4) {
                __m256d v = _mm256_loadu_pd(x + i);
                __m256d pos = _mm256_cmp_pd(v, _mm256_setzero_pd(), _CMP_GT_OQ);
                __m256d neg_branch =
                    _mm256_mul_pd(vset(kSeluLambda), _mm256_mul_pd(vset(kSeluAlpha), vexp(v)));
                _mm256_storeu_pd(y + i, vselect(pos, vset(kSeluLambda), neg_branch));
            }
            break;
        case ActivationTag::sigmoid:
            for (std::size_t i = 0; i < head; i += 4) {
                __m256d s = vsigmoid(_mm256_loadu_pd(x + i));
                _mm256_storeu_pd(y + i, _mm256_mul_pd(s, _mm256_sub_pd(vset(1.0), s)));
            }
            break;
        case ActivationTag::tanh:
            for (std::size_t i = 0; i < head; i += 4) {
                __m256d t = vtanh(_mm256_loadu_pd(x + i));
                _mm256_storeu_pd(
                    y + i, _mm256_mul_pd(_mm256_sub_pd(vset(1.0), t), _mm256_add_pd(vset(1.0), t)));
            }
            break;
        case ActivationTag::identity:
            for (std::size_t i = 0; i < head; i += 4) _mm256_storeu_pd(y + i, vset(1.0));
            break;
    }
    for (std::size_t i = head; i < n; ++i) y[i] = grad(a, x[i]);
}

void matmul_avx2(const double* A, const double* B, double* C, std::size_t m, std::size_t k,
                 std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* Ai = A + i * k;
        double* Ci = C + i * n;
        std::size_t j = 0;
        for (; j + 4 <= n; j += 4) {
            __m256d acc = _mm256_setzero_pd();
            for (std::size_t p = 0; p < k; ++p)
                acc = _mm256_fmadd_pd(_mm256_set1_pd(Ai[p]), _mm256_loadu_pd(B + p * n + j), acc);
            _mm256_storeu_pd(Ci + j, acc);
        }
        for (; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t p = 0; p < k; ++p) acc = std::fma(Ai[p], B[p * n + j], acc);
            Ci[j] = acc;
        }
    }
}

}  // namespace serf::detail_avx2
