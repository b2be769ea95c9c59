#include "regrep/parallel.hpp"

#include <cstdlib>

namespace regrep {

unsigned thread_count() {
  if (const char* env = std::getenv("REGREP_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

void parallel_blocks(uint64_t num_blocks,
                     const std::function<void(uint64_t)>& fn,
                     std::atomic<uint64_t>* stop_after) {
  const unsigned workers =
      static_cast<unsigned>(std::min<uint64_t>(thread_count(), num_blocks));
  if (workers <= 1) {
    for (uint64_t b = 0; b < num_blocks; ++b) {
      if (stop_after && b > stop_after->load(std::memory_order_relaxed))
        break;
      fn(b);
    }
    return;
  }
  std::atomic<uint64_t> next{0};
  auto work = [&] {
    for (;;) {
      const uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
      if (b >= num_blocks) return;
      if (stop_after && b > stop_after->load(std::memory_order_relaxed))
        continue;  // later blocks may still be wanted if stop moves down
      fn(b);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 0; i + 1 < workers; ++i) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
}

uint64_t Rng::next_u64() {
  // splitmix64; fixed sequence on every platform.
  uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

uint64_t Rng::below(uint64_t bound) {
  // rejection sampling to stay unbiased and portable
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % bound;
}

}  // namespace regrep
