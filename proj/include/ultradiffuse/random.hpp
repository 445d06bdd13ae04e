#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <random>
#include <thread>
#include <vector>

namespace ultradiffuse {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for replica `replica` of a run seeded with `seed`. Depends only on
/// the pair, never on thread count or scheduling.
constexpr std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t replica) {
  return mix64(mix64(seed) ^ mix64(replica + 0x632be59bd9b4e019ULL));
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t replica) {
  const std::uint64_t s = replica_seed(seed, replica);
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32),
                    static_cast<std::uint32_t>(replica), static_cast<std::uint32_t>(replica >> 32)};
  return Rng(seq);
}

/// Samples per replica; fixes the partition of a sample budget so results do
/// not depend on the thread count.
inline constexpr std::uint64_t kReplicaChunk = 4096;

/// Fork-join over replicas 0..replicas-1 with a static interleaved partition.
/// `body(replica)` must only touch replica-local state. The first exception
/// (by thread index) is rethrown after all workers join.
template <class Body>
void parallel_replicas(std::uint64_t replicas, unsigned threads, Body&& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::uint64_t>(replicas, 1))));
  if (threads == 1) {
    for (std::uint64_t r = 0; r < replicas; ++r) body(r);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::uint64_t r = t; r < replicas; r += threads) body(r);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Run `samples` draws split into replicas of kReplicaChunk; `draw(rng, out)`
/// accumulates one sample into a replica-local Accumulator, and the
/// per-replica accumulators are merged in replica order.
template <class Accumulator, class Draw>
Accumulator monte_carlo(std::uint64_t samples, std::uint64_t seed, unsigned threads, Draw&& draw) {
  const std::uint64_t replicas = (samples + kReplicaChunk - 1) / kReplicaChunk;
  std::vector<Accumulator> partial(replicas);
  parallel_replicas(replicas, threads, [&](std::uint64_t r) {
    Rng rng = make_rng(seed, r);
    const std::uint64_t begin = r * kReplicaChunk;
    const std::uint64_t end = std::min(samples, begin + kReplicaChunk);
    for (std::uint64_t i = begin; i < end; ++i) draw(rng, partial[r]);
  });
  Accumulator total;
  for (auto& p : partial) total.merge(p);
  return total;
}

}  // namespace ultradiffuse
