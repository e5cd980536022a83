#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace fracsheet {

/// Reproducible seed: `value` identifies the experiment, `stream` the
/// replica. Streams are split off the base value with SplitMix64 so that
/// replicas get well-separated engine states by construction.
struct Seed {
    std::uint64_t value = 0;
    std::uint64_t stream = 0;

    Seed with_stream(std::uint64_t s) const { return Seed{value, s}; }
};

/// SplitMix64 step; the project-wide stream splitter.
std::uint64_t splitmix64(std::uint64_t& state);

/// Deterministic engine for a (value, stream) pair. Identical pairs give
/// bit-identical sample paths within one build.
std::mt19937_64 make_engine(Seed seed);

/// Row-major matrix of iid standard normals drawn in a fixed order.
std::vector<double> normal_matrix(int rows, int cols, Seed seed);

}  // namespace fracsheet
