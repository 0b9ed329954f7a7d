#include "negdb/store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "negdb/error.hpp"

namespace negdb {

namespace {

constexpr std::string_view kHeader = "negdb 1";
constexpr char kHexChars[] = "0123456789abcdef";

Error corrupt(std::size_t line_no, const std::string& reason) {
  return Error(ErrorCode::CorruptTable,
               "table file corrupt at line " + std::to_string(line_no) + ": " + reason);
}

bool is_lower_hex(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

void require_record_name(const std::string& name) {
  if (name.empty()) {
    throw Error(ErrorCode::EmptyInput, "record name is empty");
  }
  if (name.find_first_of("\t\n\r") != std::string::npos) {
    throw Error(ErrorCode::InvalidArgument,
                "record name must not contain tab or newline characters");
  }
}

// A key group is genuine exactly when its ordinals are 0..width-1, each once.
// Chaff rows get singleton keys, so they can never assemble into such a run.
std::string reassemble(const std::vector<NegativeTuple>& group, std::size_t width) {
  if (group.size() != width) return {};
  std::string encoded(width, '\0');
  std::vector<bool> seen(width, false);
  for (const NegativeTuple& t : group) {
    if (t.ordinal >= width || seen[t.ordinal]) return {};
    seen[t.ordinal] = true;
    encoded[t.ordinal] = t.fragment;
  }
  return encoded;
}

}  // namespace

std::string NegativeTuple::stored_value() const {
  std::string value;
  value.reserve(2 + key.size());
  value.push_back(fragment);
  value.push_back(kSeparator);
  value.append(key);
  return value;
}

std::vector<NegativeTuple> negative_convert(std::string_view encoded,
                                            const TimestampKey& key,
                                            std::string_view record_name) {
  if (encoded.empty()) {
    throw Error(ErrorCode::EmptyInput, "nothing to fragment");
  }
  if (record_name.empty()) {
    throw Error(ErrorCode::EmptyInput, "record name is empty");
  }
  std::vector<NegativeTuple> tuples;
  tuples.reserve(encoded.size());
  for (std::size_t i = 0; i < encoded.size(); ++i) {
    tuples.push_back(NegativeTuple{std::string(record_name), encoded[i], key.rendered, i});
  }
  return tuples;
}

TableStore::TableStore(std::filesystem::path path, StoreConfig config)
    : path_(std::move(path)),
      config_(std::move(config)),
      cache_(config_.cache_capacity),
      rng_(config_.rng_seed ? *config_.rng_seed : std::random_device{}()) {
  if (!config_.clock) config_.clock = current_civil_time;
  std::error_code ec;
  if (std::filesystem::exists(path_, ec) && std::filesystem::file_size(path_, ec) > 0) {
    parse_file();
    header_on_disk_ = true;
  }
}

void TableStore::create_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (std::filesystem::exists(path, ec) && std::filesystem::file_size(path, ec) > 0) {
    throw Error(ErrorCode::InvalidArgument,
                "refusing to initialize over non-empty table: " + path.string());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::StorageFailure, "cannot create table file: " + path.string());
  }
  out << kHeader << '\n';
  out.flush();
  if (!out) {
    throw Error(ErrorCode::StorageFailure, "failed writing table header: " + path.string());
  }
}

void TableStore::parse_file() {
  std::ifstream in(path_, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::StorageFailure, "cannot open table file: " + path_.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string content = buf.str();

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    ++line_no;
    std::size_t nl = content.find('\n', pos);
    if (nl == std::string::npos) {
      throw corrupt(line_no, "truncated line (missing trailing newline)");
    }
    std::string_view line(content.data() + pos, nl - pos);
    if (line_no == 1) {
      if (line != kHeader) throw corrupt(1, "expected header \"negdb 1\"");
    } else {
      parse_row(line, line_no);
    }
    pos = nl + 1;
  }
}

void TableStore::parse_row(std::string_view line, std::size_t line_no) {
  std::size_t tab1 = line.find('\t');
  if (tab1 == std::string_view::npos) throw corrupt(line_no, "expected 3 tab-separated fields");
  std::size_t tab2 = line.find('\t', tab1 + 1);
  if (tab2 == std::string_view::npos) throw corrupt(line_no, "expected 3 tab-separated fields");
  if (line.find('\t', tab2 + 1) != std::string_view::npos) {
    throw corrupt(line_no, "expected 3 tab-separated fields");
  }
  std::string_view name = line.substr(0, tab1);
  std::string_view ordinal_text = line.substr(tab1 + 1, tab2 - tab1 - 1);
  std::string_view value = line.substr(tab2 + 1);

  if (name.empty()) throw corrupt(line_no, "empty record name");
  if (!all_digits(ordinal_text) || ordinal_text.size() > 9 ||
      (ordinal_text.size() > 1 && ordinal_text[0] == '0')) {
    throw corrupt(line_no, "ordinal is not a canonical decimal");
  }
  if (value.size() != 17 || !is_lower_hex(value[0]) || value[1] != kSeparator ||
      !all_digits(value.substr(2))) {
    throw corrupt(line_no, "stored value must be <hex char>*<15 digits>");
  }

  std::size_t ordinal = 0;
  for (char c : ordinal_text) ordinal = ordinal * 10 + (c - '0');

  rows_.push_back(NegativeTuple{std::string(name), value[0], std::string(value.substr(2)),
                                ordinal});
  index_[rows_.back().record_name].push_back(rows_.size() - 1);
}

void TableStore::append_rows(const std::vector<NegativeTuple>& batch) {
  std::string payload;
  if (!header_on_disk_) {
    payload.append(kHeader);
    payload.push_back('\n');
  }
  for (const NegativeTuple& t : batch) {
    payload += t.record_name;
    payload.push_back('\t');
    payload += std::to_string(t.ordinal);
    payload.push_back('\t');
    payload += t.stored_value();
    payload.push_back('\n');
  }
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) {
    throw Error(ErrorCode::StorageFailure, "cannot open table file for append: " + path_.string());
  }
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  out.flush();
  if (!out) {
    throw Error(ErrorCode::StorageFailure, "append to table file failed: " + path_.string());
  }
  header_on_disk_ = true;
}

CacheEntry TableStore::build_entry_locked(const std::string& name) const {
  CacheEntry entry;
  entry.record_name = name;
  auto it = index_.find(name);
  if (it != index_.end()) {
    for (std::size_t idx : it->second) {
      const NegativeTuple& row = rows_[idx];
      entry.groups[row.key].push_back(row);
    }
  }
  return entry;
}

TimestampKey TableStore::insert(const std::string& name, const std::string& secret,
                                const RsaPublicKey& pub, std::size_t chaff) {
  require_record_name(name);
  std::unique_lock lock(mu_);

  TimestampKey key = make_timestamp(config_.clock());
  std::unordered_set<std::string> taken;
  if (auto it = index_.find(name); it != index_.end()) {
    for (std::size_t idx : it->second) taken.insert(rows_[idx].key);
  }
  if (taken.count(key.rendered)) {
    throw Error(ErrorCode::DuplicateInsert,
                "record \"" + name + "\" already has rows under key " + key.rendered +
                    "; retry next second");
  }
  taken.insert(key.rendered);

  std::string encoded = encode_secret(secret, key, pub, config_.pipeline);
  std::vector<NegativeTuple> batch = negative_convert(encoded, key, name);

  // Decoys: same grammar as genuine rows, but each under its own fresh key so
  // no chaff group can ever form a complete ordinal run.
  std::size_t width = std::max<std::size_t>(config_.pipeline.digest_width, 1);
  std::uniform_int_distribution<int> year(2000, 2099), month(1, 12), day(1, 28),
      hour(0, 23), min_sec(0, 59), nibble(0, 15);
  std::uniform_int_distribution<std::size_t> ordinal(0, width - 1);
  for (std::size_t i = 0; i < chaff; ++i) {
    std::string chaff_key;
    do {
      CivilTime t{year(rng_), month(rng_), day(rng_), hour(rng_), min_sec(rng_),
                  min_sec(rng_)};
      chaff_key = make_timestamp(t).rendered;
    } while (taken.count(chaff_key));
    taken.insert(chaff_key);
    NegativeTuple decoy{name, kHexChars[nibble(rng_)], chaff_key, ordinal(rng_)};
    std::uniform_int_distribution<std::size_t> slot(0, batch.size());
    batch.insert(batch.begin() + static_cast<std::ptrdiff_t>(slot(rng_)), decoy);
  }

  append_rows(batch);  // disk first; memory stays untouched on failure
  for (const NegativeTuple& t : batch) {
    rows_.push_back(t);
    index_[name].push_back(rows_.size() - 1);
  }
  cache_.put(name, build_entry_locked(name));  // write-through refresh
  return key;
}

bool TableStore::verify(const std::string& name, const std::string& candidate,
                        const RsaPublicKey& pub) {
  require_record_name(name);
  std::shared_lock lock(mu_);

  std::optional<CacheEntry> entry = cache_.get(name);
  if (!entry) {
    if (index_.find(name) == index_.end()) {
      throw Error(ErrorCode::UnknownRecord, "no rows stored for record \"" + name + "\"");
    }
    entry = build_entry_locked(name);
    cache_.put(name, *entry);
  }

  std::size_t width = std::max<std::size_t>(config_.pipeline.digest_width, 1);
  for (const auto& [key_text, group] : entry->groups) {
    std::string encoded = reassemble(group, width);
    if (encoded.empty()) continue;
    TimestampKey key;
    try {
      key = parse_timestamp(key_text);
    } catch (const Error&) {
      continue;  // foreign key text that the pipeline could not have produced
    }
    if (encode_secret(candidate, key, pub, config_.pipeline) == encoded) {
      return true;
    }
  }
  return false;
}

std::vector<std::pair<std::string, std::string>> TableStore::raw_query(
    std::string_view substring) const {
  std::shared_lock lock(mu_);
  std::vector<std::pair<std::string, std::string>> matches;
  for (const NegativeTuple& t : rows_) {
    std::string value = t.stored_value();
    if (t.record_name.find(substring) != std::string::npos ||
        value.find(substring) != std::string::npos) {
      matches.emplace_back(t.record_name, std::move(value));
    }
  }
  return matches;
}

std::vector<NegativeTuple> TableStore::rows() const {
  std::shared_lock lock(mu_);
  return rows_;
}

std::size_t TableStore::row_count() const {
  std::shared_lock lock(mu_);
  return rows_.size();
}

CacheStats TableStore::cache_stats() const { return cache_.stats(); }

}  // namespace negdb
