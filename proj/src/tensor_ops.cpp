#include "serf/tensor_ops.hpp"

#include <cmath>
#include <stdexcept>

#include "kernels_avx2.hpp"
#include "serf/simd.hpp"

namespace serf {

Tensor2 matmul(const Tensor2& A, const Tensor2& B) {
    if (A.cols() != B.rows()) {
        throw std::invalid_argument("matmul: inner dimensions differ, " + A.shape_str() + " * " +
                                    B.shape_str());
    }
    std::size_t m = A.rows(), k = A.cols(), n = B.cols();
    Tensor2 C(m, n);
#ifdef SERF_HAVE_AVX2
    if (simd::active_level() == simd::Level::avx2) {
        detail_avx2::matmul_avx2(A.data(), B.data(), C.data(), m, k, n);
        return C;
    }
#endif
    for (std::size_t i = 0; i < m; ++i) {
        const double* Ai = A.row(i);
        double* Ci = C.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t p = 0; p < k; ++p) acc = std::fma(Ai[p], B(p, j), acc);
            Ci[j] = acc;
        }
    }
    return C;
}

Tensor2 transpose(const Tensor2& A) {
    Tensor2 T(A.cols(), A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) T(j, i) = A(i, j);
    return T;
}

}  // namespace serf
