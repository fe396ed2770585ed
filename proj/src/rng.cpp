#include "serf/rng.hpp"

#include <cmath>

#include "serf/scalar_math.hpp"

namespace serf {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ull;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ull;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : key_{seed, stream}, ctr_{0, 0, 0, 0}, buf_{0, 0, 0, 0}, pos_(4) {}

void Rng::refill() {
    // the counter increments before each block, so block b uses counter b+1
    if (++ctr_[0] == 0)
        if (++ctr_[1] == 0)
            if (++ctr_[2] == 0) ++ctr_[3];

    std::uint64_t c0 = ctr_[0], c1 = ctr_[1], c2 = ctr_[2], c3 = ctr_[3];
    std::uint64_t k0 = key_[0], k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c0, hi0, lo0);
        mulhilo(kMul1, c2, hi1, lo1);
        std::uint64_t n0 = hi1 ^ c1 ^ k0;
        std::uint64_t n1 = lo1;
        std::uint64_t n2 = hi0 ^ c3 ^ k1;
        std::uint64_t n3 = lo0;
        c0 = n0;
        c1 = n1;
        c2 = n2;
        c3 = n3;
        if (round != 9) {
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
    }
    buf_[0] = c0;
    buf_[1] = c1;
    buf_[2] = c2;
    buf_[3] = c3;
    pos_ = 0;
}

std::uint64_t Rng::next_u64() {
    if (pos_ >= 4) refill();
    return buf_[pos_++];
}

double Rng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

double Rng::normal() {
    for (;;) {
        double u = 2.0 * uniform01() - 1.0;
        double v = 2.0 * uniform01() - 1.0;
        double s = u * u + v * v;
        if (s >= 1.0 || s == 0.0) continue;
        double m = std::sqrt(-2.0 * detail::log_d(s) / s);
        return u * m;
    }
}

void Rng::fill_uniform(double lo, double hi, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = uniform(lo, hi);
}

void Rng::fill_normal(double mean, double stddev, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = mean + stddev * normal();
}

std::vector<std::size_t> Rng::permutation(std::size_t n) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    for (std::size_t i = n; i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(next_u64() % i);
        std::swap(p[i - 1], p[j]);
    }
    return p;
}

}  // namespace serf
