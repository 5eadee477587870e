#pragma once

#include <cstdint>
#include <random>

namespace dgl {

// splitmix64: seed/stream derivation mixer
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
    return mix64(mix64(mix64(base ^ mix64(a)) ^ mix64(b)) ^ mix64(c));
}

// Named substreams of a run seed. Draw order within a stream is the
// reproducibility contract; streams never share engine state.
enum class Stream : std::uint64_t {
    Radar = 1,
    Measurement = 2,
    Filter = 3,
    Shaping = 4,
};

class RngStream {
  public:
    RngStream() : engine_(0) {}
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}
    RngStream(std::uint64_t run_seed, Stream s)
        : engine_(derive_seed(run_seed, static_cast<std::uint64_t>(s))) {}

    double uniform() { return unif_(engine_); }
    double normal() { return norm_(engine_); }
    std::uint64_t raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
    std::normal_distribution<double> norm_{0.0, 1.0};
};

}  // namespace dgl
