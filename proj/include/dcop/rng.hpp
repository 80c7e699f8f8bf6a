#ifndef DCOP_RNG_HPP
#define DCOP_RNG_HPP

#include <cstdint>
#include <string_view>

namespace dcop {

// splitmix64, used for seeding and for counter-based sample streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// FNV-1a over a byte sequence; used to derive run seeds from config tuples
// so that adding instances/strategies never perturbs existing streams.
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// xoshiro256++ (Blackman & Vigna, public domain reference implementation).
// Hand-rolled instead of <random> engines+distributions so that streams are
// bit-identical across standard library implementations.
class Xoshiro {
public:
    explicit Xoshiro(std::uint64_t seed = 1) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n), n > 0
    std::uint64_t below(std::uint64_t n) {
        // rejection from the top to avoid modulo bias
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
        std::uint64_t v = next();
        while (v > limit) v = next();
        return v % n;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

// One-shot uniform draw for counter-based streams: deterministic value for
// (seed, counter) with no sequential state, so parallel loops reproduce the
// serial result exactly.
inline double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t st = seed ^ (0x9e3779b97f4a7c15ULL * (counter + 1));
    return static_cast<double>(splitmix64(st) >> 11) * 0x1.0p-53;
}

} // namespace dcop

#endif
