#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "negdb/cache.hpp"
#include "negdb/codec.hpp"

namespace testutil {

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "negdb-XXXXXX").string();
    if (::mkdtemp(tmpl.data()) == nullptr) {
      std::perror("mkdtemp");
      std::abort();
    }
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

struct CliResult {
  int status = -1;
  std::string out;
  std::string err;
};

// Runs the built CLI through /bin/sh. `env_prefix` may carry VAR=value pairs.
inline CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  TempDir scratch;
  std::string out_path = scratch.file("out");
  std::string err_path = scratch.file("err");
  std::string cmd = env_prefix + (env_prefix.empty() ? "" : " ") + "'" + NEGDB_CLI_PATH +
                    "' " + args + " >'" + out_path + "' 2>'" + err_path + "'";
  int rc = std::system(cmd.c_str());
  CliResult result;
  result.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  result.out = read_file(out_path);
  result.err = read_file(err_path);
  return result;
}

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) {
      lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

// Inverse of the separator-variant staging, for round-trip checks only.
// Returns (text, key rendering).
inline std::pair<std::string, std::string> decode_virtual(const std::string& staged) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (true) {
    std::size_t star = staged.find('*', pos);
    if (star == std::string::npos) {
      tokens.push_back(staged.substr(pos));
      break;
    }
    tokens.push_back(staged.substr(pos, star - pos));
    pos = star + 1;
  }
  std::string text;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    text.push_back(static_cast<char>(std::stoi(tokens[i])));
  }
  return {text, tokens.back()};
}

// Schoolbook square-and-multiply, independent of the production big-int path.
inline std::uint64_t naive_modpow(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  __uint128_t acc = 1;
  __uint128_t b = base % mod;
  while (exp > 0) {
    if (exp & 1) acc = acc * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<std::uint64_t>(acc);
}

inline std::string random_printable(std::mt19937_64& rng, std::size_t len,
                                    int lo = 33, int hi = 126) {
  std::uniform_int_distribution<int> pick(lo, hi);
  std::string s(len, ' ');
  for (char& c : s) c = static_cast<char>(pick(rng));
  return s;
}

inline std::string random_hex(std::mt19937_64& rng, std::size_t len) {
  static const char* digits = "0123456789abcdef";
  std::uniform_int_distribution<int> pick(0, 15);
  std::string s(len, '0');
  for (char& c : s) c = digits[pick(rng)];
  return s;
}

inline negdb::CivilTime random_civil(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> year(1900, 2099), month(1, 12), day(1, 28),
      hour(0, 23), sixty(0, 59);
  return negdb::CivilTime{year(rng), month(rng), day(rng), hour(rng), sixty(rng),
                          sixty(rng)};
}

// Reference LRU: a plain vector ordered least- to most-recently used. Slow and
// obvious on purpose; the real cache must match it move for move.
template <typename Value>
class LruOracle {
 public:
  explicit LruOracle(std::size_t capacity) : capacity_(capacity) {}

  std::optional<Value> get(const std::string& key) {
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (items_[i].first == key) {
        auto item = items_[i];
        items_.erase(items_.begin() + static_cast<std::ptrdiff_t>(i));
        items_.push_back(item);
        ++stats_.hits;
        return item.second;
      }
    }
    ++stats_.misses;
    return std::nullopt;
  }

  void put(const std::string& key, Value value) {
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (items_[i].first == key) {
        items_.erase(items_.begin() + static_cast<std::ptrdiff_t>(i));
        items_.emplace_back(key, std::move(value));
        return;
      }
    }
    if (capacity_ == 0) return;
    if (items_.size() == capacity_) {
      items_.erase(items_.begin());
      ++stats_.evictions;
    }
    items_.emplace_back(key, std::move(value));
  }

  void invalidate(const std::string& key) {
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (items_[i].first == key) {
        items_.erase(items_.begin() + static_cast<std::ptrdiff_t>(i));
        return;
      }
    }
  }

  // Most recent first, mirroring LruCache::keys_by_recency.
  std::vector<std::string> keys_by_recency() const {
    std::vector<std::string> keys;
    for (auto it = items_.rbegin(); it != items_.rend(); ++it) keys.push_back(it->first);
    return keys;
  }

  negdb::CacheStats stats() const { return stats_; }

 private:
  std::size_t capacity_;
  std::vector<std::pair<std::string, Value>> items_;
  negdb::CacheStats stats_;
};

}  // namespace testutil
