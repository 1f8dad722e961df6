#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace ptfree {

/// Worker count: PTFREE_THREADS if set and positive, otherwise the hardware
/// concurrency (at least 1).
inline unsigned default_thread_count() {
  if (const char* env = std::getenv("PTFREE_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Splits [0, count) into `chunks` contiguous ranges, evaluates `body(begin,
/// end)` for each on up to `threads` workers, and folds the partial results
/// with `combine` in chunk order. The result only depends on the chunking,
/// never on the thread count.
template <class T, class Body, class Combine>
T parallel_reduce(std::uint64_t count, T init, Body body, Combine combine,
                  unsigned threads = default_thread_count(), std::uint64_t chunks = 0) {
  if (count == 0) return init;
  if (chunks == 0) chunks = std::min<std::uint64_t>(count, 64);
  chunks = std::min(chunks, count);
  std::vector<T> partial(chunks, init);
  auto range = [&](std::uint64_t c) {
    std::uint64_t begin = count * c / chunks;
    std::uint64_t end = count * (c + 1) / chunks;
    partial[c] = body(begin, end);
  };
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
  if (threads <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) range(c);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::uint64_t c = w; c < chunks; c += threads) range(c);
      });
    }
  }
  T result = std::move(partial[0]);
  for (std::uint64_t c = 1; c < chunks; ++c) result = combine(std::move(result), std::move(partial[c]));
  return result;
}

}  // namespace ptfree
