#pragma once

#include "bernlab/marginals.hpp"

#include <cstdint>
#include <string>

namespace bernlab {

struct Estimate {
  double mean = 0;
  double stderr_ = 0;
};

struct McOmegaResult {
  Estimate omega;       // E[omega(g, x)]
  Estimate sqrt_omega;  // E[sqrt(omega(g, x))]
  Estimate omega_negsq; // E[omega(g, x)^-2]
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  std::int64_t window = 0;
  std::int64_t coordinates = 0;  // coordinates of the window where mu_i and mu_{g i} differ
  std::string truncation;        // empty when the window covers supp(c_g)
};

// omega(g, x) = prod_i mu_{g i}(x_i) / mu_i(x_i) over i = g^-1 h, h in ball(window),
// with x ~ mu. Samples are split into fixed blocks, each with its own substream
// of `seed`, so the result does not depend on the thread count.
McOmegaResult mc_omega(const ActionSpec& spec, const GroupElement& g, std::int64_t window, std::int64_t samples,
                       std::uint64_t seed);

}  // namespace bernlab
