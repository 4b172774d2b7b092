#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace skewcubes {

// Splitmix64 stream.  All randomized suites draw from this generator so that
// reports are bit-reproducible across platforms; std distributions are
// avoided on purpose.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // in [0,1)
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // in [0, n)
    int uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

    double gauss() {
        // Box-Muller; cache unused
        double u1 = uniform01(), u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    // independent child stream, stable under reordering of other draws
    Rng derive(std::uint64_t tag) const {
        std::uint64_t mixed = state_ ^ (0x9e3779b97f4a7c15ULL * (tag + 0x632be59bd9b4e019ULL));
        Rng child(mixed);
        child.next_u64();
        return child;
    }

    Rng derive(const std::string& tag) const {
        std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
        for (unsigned char c : tag) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        return derive(h);
    }

private:
    std::uint64_t state_;
};

}  // namespace skewcubes
