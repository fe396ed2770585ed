#pragma once

#include "serf/tensor.hpp"

namespace serf {

// C = A * B for row-major [m x k] * [k x n]. Each output element is an
// ascending-index fused multiply-add chain, identical in the scalar and
// AVX2 paths, so results do not depend on the selected path.
// Throws std::invalid_argument on inner-dimension mismatch.
Tensor2 matmul(const Tensor2& A, const Tensor2& B);

Tensor2 transpose(const Tensor2& A);

}  // namespace serf
