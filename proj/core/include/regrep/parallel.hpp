#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace regrep {

// Worker count: REGREP_THREADS env var, defaulting to all cores.
unsigned thread_count();

// Runs fn(block_index) for block_index in [0, num_blocks) on the worker
// pool. Blocks are claimed by an atomic counter; each fn call must only
// write into per-block state so that results can be merged in block order
// afterwards (deterministic regardless of thread count). When stop_after
// is set by a worker to block b, blocks > b may be skipped.
void parallel_blocks(uint64_t num_blocks,
                     const std::function<void(uint64_t)>& fn,
                     std::atomic<uint64_t>* stop_after = nullptr);

// Deterministic cross-platform RNG helpers (std::mt19937_64 has a fixed
// sequence, std::uniform_int_distribution does not, so bounded draws are
// done by rejection here).
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64();

  // uniform in [0, bound), bound >= 1
  uint64_t below(uint64_t bound);

  bool coin() { return next_u64() & 1; }

 private:
  uint64_t state_;
};

}  // namespace regrep
