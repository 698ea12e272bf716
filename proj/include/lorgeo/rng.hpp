#pragma once

#include <cstdint>
#include <random>

#include "lorgeo/linalg.hpp"

namespace lorgeo {

// Per-sample engines are derived from (master seed, sample index) so that
// sample k is the same whether samples run sequentially or concurrently.

inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::mt19937_64 engine_for(std::uint64_t master, std::uint64_t index) {
    return std::mt19937_64(split_seed(master, index));
}

inline Vector gaussian_vector(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = normal(rng);
    return v;
}

}  // namespace lorgeo
