#include "bernlab/montecarlo.hpp"

#include "bernlab/cocycles.hpp"
#include "bernlab/parallel.hpp"
#include "bernlab/sampling.hpp"

#include <cmath>
#include <map>

namespace bernlab {

namespace {

constexpr std::int64_t kBlock = 4096;

struct Coord {
  std::vector<double> mu;     // law of x_i
  std::vector<double> ratio;  // mu_{g i}(x) / mu_i(x)
  std::int64_t count = 1;     // identical coordinates sharing this law
};

struct Moments {
  double s1 = 0, s2 = 0;
  void add(double v) {
    s1 += v;
    s2 += v * v;
  }
};

Estimate finish(const std::vector<Moments>& blocks, std::int64_t n) {
  double s1 = 0, s2 = 0;
  for (const Moments& b : blocks) {
    s1 += b.s1;
    s2 += b.s2;
  }
  double mean = s1 / static_cast<double>(n);
  double var = std::max(0.0, s2 / static_cast<double>(n) - mean * mean) * static_cast<double>(n) / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace

McOmegaResult mc_omega(const ActionSpec& spec, const GroupElement& g, std::int64_t window, std::int64_t samples,
                       std::uint64_t seed) {
  if (samples < 1000) throw ValidationError("mc_omega needs at least 1000 samples");
  if (window < word_length(g)) throw ValidationError("window radius must be at least |g|");
  McOmegaResult res;
  res.samples = samples;
  res.seed = seed;
  res.window = window;
  if (g.is_identity()) {
    res.omega = res.sqrt_omega = res.omega_negsq = {1.0, 0.0};
    return res;
  }

  GroupElement ginv = inv(g);
  std::map<std::pair<std::vector<double>, std::vector<double>>, std::int64_t> laws;
  bool finite_support = spec.as<WSplit>() || spec.as<FreeProductW>() || spec.as<FolnerInduced>();
  if (auto* fo = spec.as<FolnerInduced>()) {
    std::int64_t reach = 0;
    for (const auto& iv : fo->intervals) reach = std::max({reach, std::abs(iv.start), std::abs(iv.start + iv.length)});
    if (window < reach + word_length(g)) {
      throw ValidationError("window " + std::to_string(window) + " does not cover supp(c_g); need " +
                            std::to_string(reach + word_length(g)));
    }
  }
  for (const GroupElement& h : ball(spec.group, window)) {
    auto from = marginal(spec, mul(ginv, h)), to = marginal(spec, h);
    if (from == to) continue;
    laws[{from, to}] += spec.multiplicity;
  }
  if (!finite_support) {
    double omitted = 0;
    if (spec.group.is_free() || spec.as<ZSequence>() || spec.as<SpecialCocycle>()) {
      auto cs = coordinate_set(spec, g, 1e-6);
      double inside = 0;
      for (const auto& [key, n] : laws) inside += static_cast<double>(n) * std::pow(key.first[0] - key.second[0], 2);
      double total = 0;
      for (const auto& [a, b] : cs.pairs) total += (a - b) * (a - b);
      omitted = std::max(0.0, total * static_cast<double>(spec.multiplicity) - inside) +
                cs.tail_mass * static_cast<double>(spec.multiplicity);
    }
    res.truncation = "coordinates outside ball(" + std::to_string(window) + ") omitted; their c_g mass is at most " +
                     std::to_string(omitted);
  }

  std::vector<Coord> coords;
  for (const auto& [key, n] : laws) {
    Coord c;
    c.mu = key.first;
    c.count = n;
    for (std::size_t x = 0; x < key.first.size(); ++x) c.ratio.push_back(key.second[x] / key.first[x]);
    coords.push_back(std::move(c));
    res.coordinates += n;
  }

  std::int64_t nblocks = (samples + kBlock - 1) / kBlock;
  std::vector<Moments> m1(nblocks), m2(nblocks), m3(nblocks);
  parallel_for(nblocks, [&](std::int64_t blk) {
    auto rng = substream(seed, static_cast<std::uint64_t>(blk));
    std::int64_t lo = blk * kBlock, hi = std::min(samples, lo + kBlock);
    for (std::int64_t s = lo; s < hi; ++s) {
      double log_omega = 0;
      for (const Coord& c : coords) {
        if (c.mu.size() == 2) {
          // number of coordinates landing on 0
          std::int64_t zeros = c.count == 1 ? (draw_point(c.mu, rng) == 0 ? 1 : 0)
                                            : std::binomial_distribution<std::int64_t>(c.count, c.mu[0])(rng);
          log_omega += static_cast<double>(zeros) * std::log(c.ratio[0]) +
                       static_cast<double>(c.count - zeros) * std::log(c.ratio[1]);
        } else {
          for (std::int64_t j = 0; j < c.count; ++j) log_omega += std::log(c.ratio[draw_point(c.mu, rng)]);
        }
      }
      m1[blk].add(std::exp(log_omega));
      m2[blk].add(std::exp(0.5 * log_omega));
      m3[blk].add(std::exp(-2 * log_omega));
    }
  });
  res.omega = finish(m1, samples);
  res.sqrt_omega = finish(m2, samples);
  res.omega_negsq = finish(m3, samples);
  return res;
}

}  // namespace bernlab
