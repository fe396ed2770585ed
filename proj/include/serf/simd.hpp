#pragma once

#include <string>

namespace serf::simd {

enum class Level { scalar, avx2 };

// Best level this build + CPU supports.
Level detected_level();

// Level batch kernels currently run at. Defaults to detected_level(),
// unless the SERF_SIMD environment variable ("scalar" or "avx2") says
// otherwise. Both paths produce bit-identical results; the override exists
// for testing and for pinning down a path when comparing runs.
Level active_level();

// Throws std::invalid_argument if the level is not available.
void set_level(Level level);

const char* level_name(Level level);

}  // namespace serf::simd
