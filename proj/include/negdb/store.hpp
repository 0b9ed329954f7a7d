#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "negdb/cache.hpp"
#include "negdb/codec.hpp"
#include "negdb/crypto.hpp"

namespace negdb {

// One stored row. On disk and in queries it appears as
// fragment '*' key, e.g. "f*200805291430051".
struct NegativeTuple {
  std::string record_name;
  char fragment = '0';
  std::string key;  // 15-digit timestamp rendering
  std::size_t ordinal = 0;

  std::string stored_value() const;

  bool operator==(const NegativeTuple&) const = default;
};

// Explode an encoded value into one tuple per character, all sharing the key.
std::vector<NegativeTuple> negative_convert(std::string_view encoded,
                                            const TimestampKey& key,
                                            std::string_view record_name);

// Cached view of one record: its rows grouped by timestamp key. Mirrors the
// on-disk rows exactly (the store refreshes it on every insert).
struct CacheEntry {
  std::string record_name;
  std::map<std::string, std::vector<NegativeTuple>> groups;
};

struct StoreConfig {
  std::size_t cache_capacity = 1024;
  PipelineOptions pipeline;
  Clock clock;  // defaults to current_civil_time
  std::optional<std::uint64_t> rng_seed;  // chaff randomness, fixable for tests
};

// Append-only table of negative tuples in a single text file, fronted by a
// write-through LRU cache. One writer at a time, readers run concurrently.
class TableStore {
 public:
  explicit TableStore(std::filesystem::path path, StoreConfig config = {});

  TableStore(const TableStore&) = delete;
  TableStore& operator=(const TableStore&) = delete;

  // Writes the one-line header into a fresh file. Refuses non-empty targets.
  static void create_file(const std::filesystem::path& path);

  // Runs the full pipeline on `secret` under a fresh timestamp key, appends
  // the genuine tuples plus `chaff` decoys, and returns the key.
  TimestampKey insert(const std::string& name, const std::string& secret,
                      const RsaPublicKey& pub, std::size_t chaff = 0);

  // True when some stored key group of `name` reproduces the candidate's
  // encoding. Throws UnknownRecord when the name has no rows at all.
  bool verify(const std::string& name, const std::string& candidate,
              const RsaPublicKey& pub);

  // The deliberately leaky path: plain substring scan over names and stored
  // values, returning rows exactly as stored.
  std::vector<std::pair<std::string, std::string>> raw_query(
      std::string_view substring) const;

  std::vector<NegativeTuple> rows() const;
  std::size_t row_count() const;
  CacheStats cache_stats() const;
  const std::filesystem::path& path() const { return path_; }
  const PipelineOptions& pipeline() const { return config_.pipeline; }
  CivilTime clock_now() const { return config_.clock(); }

 private:
  void parse_file();
  void parse_row(std::string_view line, std::size_t line_no);
  void append_rows(const std::vector<NegativeTuple>& batch);
  CacheEntry build_entry_locked(const std::string& name) const;

  std::filesystem::path path_;
  StoreConfig config_;
  std::vector<NegativeTuple> rows_;
  std::unordered_map<std::string, std::vector<std::size_t>> index_;
  mutable LruCache<std::string, CacheEntry> cache_;
  std::mt19937_64 rng_;
  bool header_on_disk_ = false;
  mutable std::shared_mutex mu_;
};

}  // namespace negdb
