#include "serf/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace serf::simd {

namespace {

Level probe() {
#ifdef SERF_HAVE_AVX2
#if defined(__GNUC__) || defined(__clang__)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Level::avx2;
#endif
#endif
    return Level::scalar;
}

Level initial_level() {
    Level best = probe();
    if (const char* env = std::getenv("SERF_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return Level::scalar;
        if (std::strcmp(env, "avx2") == 0 && best == Level::avx2) return Level::avx2;
    }
    return best;
}

std::atomic<Level>& current() {
    static std::atomic<Level> level{initial_level()};
    return level;
}

}  // namespace

Level detected_level() {
    static Level d = probe();
    return d;
}

Level active_level() {
    return current().load(std::memory_order_relaxed);
}

void set_level(Level level) {
    if (level == Level::avx2 && detected_level() != Level::avx2) {
        throw std::invalid_argument("simd: avx2 not available on this cpu/build");
    }
    current().store(level, std::memory_order_relaxed);
}

const char* level_name(Level level) {
    return level == Level::avx2 ? "avx2" : "scalar";
}

}  // namespace serf::simd
