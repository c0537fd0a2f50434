#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace scltpe {

// Deterministic random source. All project randomness flows from one base
// seed through named substreams so that components (split, init, batch,
// augment, hpo) can be perturbed independently without touching the others.
//
// Distributions are hand-rolled on top of mt19937_64 instead of the <random>
// distribution templates, whose output is implementation-defined; this keeps
// results bit-stable across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Derives the seed of a named substream from a base seed.
    static std::uint64_t derive_seed(std::uint64_t base, std::string_view stream,
                                     std::uint64_t index = 0);

    static Rng substream(std::uint64_t base, std::string_view stream,
                         std::uint64_t index = 0) {
        return Rng(derive_seed(base, stream, index));
    }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1).
    double uniform();

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller (both values used, one cached).
    double normal();

    // Uniform integer in [0, n). n must be positive.
    std::size_t uniform_index(std::size_t n);

private:
    std::mt19937_64 gen_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace scltpe
