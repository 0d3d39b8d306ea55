#pragma once

#include "bernlab/marginals.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace bernlab {

// Engine for substream `stream` of `seed`; the pair fully determines the output.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream);

std::uint64_t window_id(const std::vector<IndexPoint>& window);

// One configuration over the window: x_i ~ mu_i independently, entries in
// {0, ..., base_size - 1}. Deterministic in (spec, window, seed, draw).
std::vector<int> sample_window(const ActionSpec& spec, const std::vector<IndexPoint>& window, std::uint64_t seed,
                               std::uint64_t draw = 0);

// Draws x from the discrete measure p using the engine.
int draw_point(const std::vector<double>& p, std::mt19937_64& rng);

}  // namespace bernlab
