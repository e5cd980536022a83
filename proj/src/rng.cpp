#include "fracsheet/rng.hpp"

namespace fracsheet {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::mt19937_64 make_engine(Seed seed) {
    // Mix value and stream through SplitMix64 so nearby (value, stream)
    // pairs land in unrelated regions of the engine's state space.
    std::uint64_t s = seed.value;
    std::uint64_t a = splitmix64(s);
    s ^= seed.stream * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL;
    std::uint64_t b = splitmix64(s);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

std::vector<double> normal_matrix(int rows, int cols, Seed seed) {
    auto engine = make_engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> out(static_cast<std::size_t>(rows) * cols);
    for (auto& v : out) v = normal(engine);
    return out;
}

}  // namespace fracsheet
