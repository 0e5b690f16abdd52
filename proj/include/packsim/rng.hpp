#pragma once

#include <cstdint>

namespace packsim {

/// Counter-based random numbers: each draw is a SplitMix64 finalizer applied
/// to (seed, stream, k1, k2). Streams keep the workload realization
/// (arrival counts, job sizes, service coins) independent of the policy under
/// test, so runs with different policies see identical traffic.
namespace rng {

enum class Stream : std::uint64_t {
    arrival_count = 0x41525243,  // keyed by slot
    job_size = 0x53495A45,       // keyed by job id
    service_coin = 0x53525643,   // keyed by (job id, slots in service)
    replication = 0x5245504C,    // keyed by replication index
    aux = 0x41555830,
};

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t draw(std::uint64_t seed, Stream stream, std::uint64_t k1, std::uint64_t k2 = 0) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ static_cast<std::uint64_t>(stream));
    h = mix64(h ^ k1);
    h = mix64(h ^ k2);
    return h;
}

/// Uniform in [0, 1).
inline double to_unit_double(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

/// Uniform in (0, 1]; used for size draws so open-interval supports stay open.
inline double to_positive_unit_double(std::uint64_t x) {
    return static_cast<double>((x >> 11) + 1) * 0x1.0p-53;
}

inline std::uint64_t substream_seed(std::uint64_t base_seed, std::uint64_t index) {
    return draw(base_seed, Stream::replication, index);
}

/// Single-uniform Poisson inversion; fine for the per-slot rates used here.
int poisson_draw(double lambda, double u);

}  // namespace rng
}  // namespace packsim
