#pragma once

#include <cmath>
#include <cstdint>

namespace rome {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so any sample can be replayed in isolation and
// independent streams can run concurrently.
class Rng {
 public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))), counter_(0) {}

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

    // Uniform on (0, 1), never exactly 0 or 1.
    double uniform() {
        double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        if (u <= 0.0) u = 0x1.0p-53;
        return u;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller.
    double gaussian() {
        double u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    // Derive an independent stream, e.g. one per sample index or per seed.
    Rng split(std::uint64_t substream) const {
        Rng r(0);
        r.key_ = mix(key_ ^ mix(substream + 0x9e3779b97f4a7c15ULL));
        r.counter_ = 0;
        return r;
    }

    std::uint64_t counter() const { return counter_; }

 private:
    static std::uint64_t mix(std::uint64_t z) {
        // splitmix64 finalizer
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_;
};

}  // namespace rome
