#pragma once

#include <cmath>
#include <cstdint>

namespace adiqoc {

// Counter-based random stream. Every draw is a pure function of
// (seed, stream, counter), so results do not depend on evaluation order
// or thread scheduling.
class KeyedRng {
public:
    KeyedRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    static std::uint64_t mix(std::uint64_t x) {
        // splitmix64 finalizer
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t bits(std::uint64_t counter) const {
        std::uint64_t h = mix(seed_ ^ 0x8f1bbcdcbfa53e0bULL);
        h = mix(h ^ stream_);
        return mix(h ^ counter);
    }

    // uniform in [0, 1)
    double uniform(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    // standard normal via Box-Muller on two counter slots
    double gaussian(std::uint64_t counter) const {
        const double u1 = static_cast<double>((bits(2 * counter) >> 11) + 1) * 0x1.0p-53;
        const double u2 = uniform(2 * counter + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    KeyedRng substream(std::uint64_t tag) const { return KeyedRng(seed_, mix(stream_ ^ mix(tag))); }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
};

} // namespace adiqoc
