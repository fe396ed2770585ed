#pragma once

#include <cstddef>

#include "serf/activations.hpp"

// AVX2 twins of the scalar batch loops. Only compiled (and only called)
// when SERF_HAVE_AVX2 is defined and the CPU supports it.

namespace serf::detail_avx2 {

void batch_value_avx2(const Activation& a, const double* x, double* y, std::size_t n);
void batch_grad_avx2(const Activation& a, const double* x, double* y, std::size_t n);

// C (m x n) = A (m x k) * B (k x n), row-major. C is fully overwritten.
void matmul_avx2(const double* A, const double* B, double* C, std::size_t m, std::size_t k,
                 std::size_t n);

}  // namespace serf::detail_avx2
