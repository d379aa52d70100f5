#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace cheb {

// Worker fan-out cap: CHEB_NUM_THREADS when set (clamped to at least 1),
// otherwise the hardware concurrency.
int worker_cap();

// Runs fn(chunk_index) for chunk_index in [0, chunks). Chunks are distributed
// over at most worker_cap() threads; each chunk must derive its randomness
// from its own index so the result is identical for any thread count.
void parallel_chunks(std::int64_t chunks, const std::function<void(std::int64_t)>& fn);

}  // namespace cheb
