#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace serf {

// Philox4x64-10 counter-based generator. Pure integer arithmetic plus IEEE
// double ops, so sequences are identical on every platform for a given
// (seed, stream) pair. The block/counter conventions follow numpy's Philox
// bit generator, which doubles as an external reference implementation for
// the unit tests.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();

    // [0, 1), 53-bit resolution
    double uniform01();

    double uniform(double lo, double hi);

    // standard normal via the polar method; one value per accepted pair,
    // nothing cached
    double normal();

    void fill_uniform(double lo, double hi, double* out, std::size_t n);
    void fill_normal(double mean, double stddev, double* out, std::size_t n);

    // Fisher-Yates shuffle of 0..n-1
    std::vector<std::size_t> permutation(std::size_t n);

private:
    void refill();

    std::uint64_t key_[2];
    std::uint64_t ctr_[4];
    std::uint64_t buf_[4];
    int pos_;
};

}  // namespace serf
