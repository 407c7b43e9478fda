#pragma once
// Splittable seeding: a (seed, stream id) pair always maps to the same
// mt19937_64 state, so work split into fixed blocks replays bit for bit
// whatever the thread count.

#include <cstdint>
#include <random>

namespace mehler {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0) : seed_(seed), id_(stream_id) {
        std::uint64_t s = seed ^ (0xd1b54a32d192ed03ULL * (stream_id + 1));
        std::seed_seq seq{splitmix64(s), splitmix64(s), splitmix64(s), splitmix64(s)};
        engine_.seed(seq);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return id_; }
    // child stream, e.g. one per block of a parallel run
    RandomStream substream(std::uint64_t k) const {
        std::uint64_t s = id_ * 0x9e3779b97f4a7c15ULL + k + 1;
        return RandomStream(seed_, splitmix64(s));
    }

    std::mt19937_64& engine() { return engine_; }
    // open interval (0, 1): top 53 bits, shifted off the endpoints
    double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }
    double normal() { return normal_(engine_); }
    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        return std::poisson_distribution<std::uint64_t>(mean)(engine_);
    }

private:
    std::uint64_t seed_, id_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

}  // namespace mehler
