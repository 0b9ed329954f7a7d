#pragma once

#include <cstdint>
#include <list>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace negdb {

struct CacheStats {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t evictions = 0;

  bool operator==(const CacheStats&) const = default;
};

// Bounded LRU map. get and put both refresh recency; a full cache evicts the
// least recently touched entry. Thread safe, every operation takes the lock.
template <typename Key, typename Value>
class LruCache {
 public:
  explicit LruCache(std::size_t capacity) : capacity_(capacity) {}

  std::optional<Value> get(const Key& key) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = map_.find(key);
    if (it == map_.end()) {
      ++stats_.misses;
      return std::nullopt;
    }
    order_.splice(order_.begin(), order_, it->second);
    ++stats_.hits;
    return it->second->second;
  }

  void put(const Key& key, Value value) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = map_.find(key);
    if (it != map_.end()) {
      it->second->second = std::move(value);
      order_.splice(order_.begin(), order_, it->second);
      return;
    }
    if (capacity_ == 0) return;
    if (map_.size() == capacity_) {
      ++stats_.evictions;
      map_.erase(order_.back().first);
      order_.pop_back();
    }
    order_.emplace_front(key, std::move(value));
    map_.emplace(key, order_.begin());
  }

  void invalidate(const Key& key) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = map_.find(key);
    if (it == map_.end()) return;
    order_.erase(it->second);
    map_.erase(it);
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return map_.size();
  }

  std::size_t capacity() const { return capacity_; }

  CacheStats stats() const {
    std::lock_guard<std::mutex> lock(mu_);
    return stats_;
  }

  // Most recent first. Introspection for tests and debugging.
  std::vector<Key> keys_by_recency() const {
    std::lock_guard<std::mutex> lock(mu_);
    std::vector<Key> keys;
    keys.reserve(map_.size());
    for (const auto& item : order_) keys.push_back(item.first);
    return keys;
  }

 private:
  using Item = std::pair<Key, Value>;

  mutable std::mutex mu_;
  std::size_t capacity_;
  std::list<Item> order_;  // front = most recently used
  std::unordered_map<Key, typename std::list<Item>::iterator> map_;
  CacheStats stats_;
};

}  // namespace negdb
