#pragma once

#include <cstdint>
#include <random>

namespace altro {

// splitmix64, used both as a hash mixer and to derive independent
// sub-stream seeds from a single run seed.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t mix64(uint64_t a, uint64_t b) {
    return splitmix64(a ^ (0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2)));
}

inline uint64_t mix64(uint64_t a, uint64_t b, uint64_t c) {
    return mix64(mix64(a, b), c);
}

inline uint64_t mix64(uint64_t a, uint64_t b, uint64_t c, uint64_t d) {
    return mix64(mix64(a, b, c), d);
}

// Double in [0, 1) from the top 53 bits of a raw draw. Used instead of
// std::uniform_real_distribution so streams do not depend on the
// standard-library implementation.
inline double u01_from_bits(uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    double u01() { return u01_from_bits(next_u64()); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    // Unbiased-enough bounded draw via 128-bit multiply; deterministic
    // across standard libraries, unlike std::uniform_int_distribution.
    uint64_t bounded(uint64_t n) {
        return static_cast<uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    int uniform_int(int lo, int hi) {  // inclusive range
        return lo + static_cast<int>(bounded(static_cast<uint64_t>(hi - lo + 1)));
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

// Stateless counter-based uniform draw: the value depends only on the
// key tuple, so it is reproducible regardless of evaluation order.
inline double counter_u01(uint64_t key, uint64_t c0, uint64_t c1, uint64_t c2) {
    return u01_from_bits(splitmix64(mix64(key, c0, c1, c2)));
}

}  // namespace altro
