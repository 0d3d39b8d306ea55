#include "bernlab/sampling.hpp"

#include "bernlab/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace bernlab {

unsigned thread_count() {
  if (const char* env = std::getenv("BERNLAB_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn) {
  if (n <= 0) return;
  unsigned workers = static_cast<unsigned>(std::min<std::int64_t>(thread_count(), n));
  if (workers <= 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::int64_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0x62726eu};
  return std::mt19937_64(seq);
}

std::uint64_t window_id(const std::vector<IndexPoint>& window) {
  std::uint64_t h = 1469598103934665603ULL;
  GroupElementHash eh;
  for (const IndexPoint& i : window) {
    h ^= eh(i.elem) + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(i.copy);
    h *= 1099511628211ULL;
  }
  return h;
}

int draw_point(const std::vector<double>& p, std::mt19937_64& rng) {
  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (std::size_t x = 0; x + 1 < p.size(); ++x) {
    acc += p[x];
    if (u < acc) return static_cast<int>(x);
  }
  return static_cast<int>(p.size()) - 1;
}

std::vector<int> sample_window(const ActionSpec& spec, const std::vector<IndexPoint>& window, std::uint64_t seed,
                               std::uint64_t draw) {
  auto rng = substream(seed ^ window_id(window), draw);
  std::vector<int> x;
  x.reserve(window.size());
  for (const IndexPoint& i : window) {
    if (i.copy < 1 || i.copy > spec.multiplicity) throw ValidationError("window point has an invalid copy index");
    x.push_back(draw_point(marginal(spec, i.elem), rng));
  }
  return x;
}

}  // namespace bernlab
