#pragma once

#include <cstdint>
#include <random>

namespace cip {

// splitmix64; used to decorrelate seeds before they reach the engine.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Standard-normal stream. Substreams derived from (seed, index) are
/// statistically independent, so ensembles are reproducible regardless of
/// how paths are partitioned over workers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(mix64(seed)) {}

    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        return Rng(mix64(seed) ^ mix64(index + 0x51ed2701ULL));
    }

    double normal() { return normal_(gen_); }

private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace cip
