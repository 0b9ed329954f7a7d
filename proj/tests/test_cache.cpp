#include <doctest.h>

#include <atomic>
#include <random>
#include <thread>

#include "helpers.hpp"
#include "negdb/cache.hpp"

using negdb::CacheStats;
using negdb::LruCache;

TEST_CASE("get and put update entries and counters") {
  LruCache<std::string, int> cache(4);
  CHECK_FALSE(cache.get("a").has_value());
  CHECK(cache.stats().misses == 1);

  cache.put("a", 1);
  auto hit = cache.get("a");
  REQUIRE(hit.has_value());
  CHECK(*hit == 1);
  CHECK(cache.stats().hits == 1);

  cache.put("a", 2);  // overwrite keeps a single entry
  CHECK(cache.size() == 1);
  CHECK(*cache.get("a") == 2);
}

TEST_CASE("eviction drops the least recently touched entry") {
  LruCache<std::string, int> cache(2);
  cache.put("a", 1);
  cache.put("b", 2);
  cache.get("a");
  cache.put("c", 3);  // b is the stale one
  CHECK(cache.stats().evictions == 1);
  CHECK(cache.get("a").has_value());
  CHECK(cache.get("c").has_value());
  CHECK_FALSE(cache.get("b").has_value());
}

TEST_CASE("capacity plus one distinct puts evict exactly once") {
  const std::size_t capacity = 5;
  LruCache<std::string, int> cache(capacity);
  for (std::size_t i = 0; i <= capacity; ++i) {
    cache.put("k" + std::to_string(i), static_cast<int>(i));
  }
  CHECK(cache.stats().evictions == 1);
  CHECK(cache.size() == capacity);
}

TEST_CASE("invalidate removes without counting an eviction") {
  LruCache<std::string, int> cache(2);
  cache.put("a", 1);
  cache.invalidate("a");
  CHECK_FALSE(cache.get("a").has_value());
  CHECK(cache.stats().evictions == 0);

  cache.invalidate("ghost");  // no-op
  CHECK(cache.size() == 0);

  cache.put("a", 7);
  cache.invalidate("a");
  cache.put("a", 9);
  CHECK(*cache.get("a") == 9);
}

TEST_CASE("hits plus misses equals lookups and size respects capacity") {
  std::mt19937_64 rng(31);
  LruCache<std::string, int> cache(3);
  std::uint64_t lookups = 0;
  for (int step = 0; step < 5000; ++step) {
    std::string key = "k" + std::to_string(rng() % 8);
    if (rng() % 2 == 0) {
      cache.get(key);
      ++lookups;
    } else {
      cache.put(key, static_cast<int>(step));
    }
    CHECK(cache.size() <= 3);
  }
  CacheStats s = cache.stats();
  CHECK(s.hits + s.misses == lookups);
}

TEST_CASE("exhaustive equivalence with the reference LRU") {
  // Every get/put sequence of length <= 6 over keys {a, b, c}, capacity 2.
  const std::vector<std::string> keys = {"a", "b", "c"};
  const int ops_per_step = 6;  // 2 operations x 3 keys
  for (int length = 0; length <= 6; ++length) {
    long sequences = 1;
    for (int i = 0; i < length; ++i) sequences *= ops_per_step;
    for (long encoded = 0; encoded < sequences; ++encoded) {
      LruCache<std::string, int> cache(2);
      testutil::LruOracle<int> oracle(2);
      long code = encoded;
      for (int step = 0; step < length; ++step) {
        int op = static_cast<int>(code % ops_per_step);
        code /= ops_per_step;
        const std::string& key = keys[static_cast<std::size_t>(op % 3)];
        if (op < 3) {
          auto got = cache.get(key);
          auto expected = oracle.get(key);
          REQUIRE(got.has_value() == expected.has_value());
          if (got) REQUIRE(*got == *expected);
        } else {
          cache.put(key, step);
          oracle.put(key, step);
        }
        REQUIRE(cache.keys_by_recency() == oracle.keys_by_recency());
        REQUIRE(cache.stats() == oracle.stats());
      }
    }
  }
}

TEST_CASE("zero capacity stores nothing") {
  LruCache<std::string, int> cache(0);
  cache.put("a", 1);
  CHECK(cache.size() == 0);
  CHECK_FALSE(cache.get("a").has_value());
  CHECK(cache.stats().evictions == 0);
}

TEST_CASE("concurrent access keeps counters and size consistent") {
  LruCache<std::string, int> cache(16);
  const int threads = 4;
  const int ops = 20000;
  std::atomic<std::uint64_t> lookups{0};
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    workers.emplace_back([&, t] {
      std::mt19937_64 rng(static_cast<std::uint64_t>(t) + 100);
      for (int i = 0; i < ops; ++i) {
        std::string key = "k" + std::to_string(rng() % 64);
        if (rng() % 2 == 0) {
          cache.get(key);
          lookups.fetch_add(1, std::memory_order_relaxed);
        } else {
          cache.put(key, i);
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  CHECK(cache.size() <= 16);
  CacheStats s = cache.stats();
  CHECK(s.hits + s.misses == lookups.load());
}
