#include "negdb/codec.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>

#include "negdb/error.hpp"

namespace negdb {

namespace {

void require_printable(std::string_view text) {
  if (text.empty()) {
    throw Error(ErrorCode::EmptyInput, "codec input is empty");
  }
  for (unsigned char c : text) {
    if (c < 32 || c > 126) {
      throw Error(ErrorCode::NonAsciiInput,
                  "input contains a character outside printable ASCII (32-126)");
    }
  }
}

bool is_alnum_ascii(unsigned char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

void require_civil_ranges(const CivilTime& t) {
  bool ok = t.year >= 0 && t.year <= 9999 && t.month >= 1 && t.month <= 12 &&
            t.day >= 1 && t.day <= 31 && t.hour >= 0 && t.hour <= 23 &&
            t.minute >= 0 && t.minute <= 59 && t.second >= 0 && t.second <= 59;
  if (!ok) {
    throw Error(ErrorCode::InvalidArgument, "calendar fields out of range");
  }
}

int digits_at(std::string_view s, std::size_t pos, std::size_t count) {
  int value = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    value = value * 10 + (s[i] - '0');
  }
  return value;
}

}  // namespace

std::string ascii_encode(std::string_view text) {
  require_printable(text);
  std::string encoded;
  encoded.reserve(text.size() * 4);
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i != 0) encoded.push_back(kSeparator);
    encoded += std::to_string(static_cast<int>(static_cast<unsigned char>(text[i])));
  }
  return encoded;
}

std::string ascii_encode_mul10(std::string_view text) {
  require_printable(text);
  std::string encoded;
  encoded.reserve(text.size() * 4);
  for (unsigned char c : text) {
    int code = c;
    encoded += std::to_string(is_alnum_ascii(c) ? code * 10 : code);
  }
  return encoded;
}

TimestampKey make_timestamp(const CivilTime& instant) {
  require_civil_ranges(instant);
  TimestampKey key;
  key.year = instant.year;
  key.month = instant.month;
  key.day = instant.day;
  key.hour = instant.hour;
  key.minute = instant.minute;
  key.second = instant.second;
  key.meridiem = instant.hour >= 12 ? 1 : 0;
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d%02d%02d%02d%02d%02d%d", key.year, key.month,
                key.day, key.hour, key.minute, key.second, key.meridiem);
  key.rendered = buf;
  return key;
}

TimestampKey parse_timestamp(std::string_view rendered) {
  if (rendered.size() != 15) {
    throw Error(ErrorCode::InvalidArgument, "timestamp key must be 15 digits");
  }
  for (char c : rendered) {
    if (c < '0' || c > '9') {
      throw Error(ErrorCode::InvalidArgument, "timestamp key must be 15 digits");
    }
  }
  CivilTime t;
  t.year = digits_at(rendered, 0, 4);
  t.month = digits_at(rendered, 4, 2);
  t.day = digits_at(rendered, 6, 2);
  t.hour = digits_at(rendered, 8, 2);
  t.minute = digits_at(rendered, 10, 2);
  t.second = digits_at(rendered, 12, 2);
  TimestampKey key = make_timestamp(t);
  if (key.rendered != rendered) {
    // Field ranges were fine but the meridiem digit disagrees with the hour.
    throw Error(ErrorCode::InvalidArgument, "timestamp meridiem flag contradicts hour");
  }
  return key;
}

std::string virtual_encrypt(std::string_view text, const TimestampKey& key,
                            CodecVariant variant) {
  std::string staged = variant == CodecVariant::kSeparator ? ascii_encode(text)
                                                           : ascii_encode_mul10(text);
  staged.push_back(kSeparator);
  staged.append(key.rendered);
  return staged;
}

CivilTime current_civil_time() {
  if (const char* override_text = std::getenv("NEGDB_CLOCK")) {
    std::string_view s(override_text);
    bool shape_ok = s.size() == 19 && s[4] == '-' && s[7] == '-' && s[10] == 'T' &&
                    s[13] == ':' && s[16] == ':';
    if (shape_ok) {
      for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u, 11u, 12u, 14u, 15u, 17u, 18u}) {
        if (s[i] < '0' || s[i] > '9') {
          shape_ok = false;
          break;
        }
      }
    }
    if (!shape_ok) {
      throw Error(ErrorCode::InvalidArgument,
                  "NEGDB_CLOCK must look like YYYY-MM-DDThh:mm:ss");
    }
    CivilTime t;
    t.year = digits_at(s, 0, 4);
    t.month = digits_at(s, 5, 2);
    t.day = digits_at(s, 8, 2);
    t.hour = digits_at(s, 11, 2);
    t.minute = digits_at(s, 14, 2);
    t.second = digits_at(s, 17, 2);
    require_civil_ranges(t);
    return t;
  }
  std::time_t now = std::time(nullptr);
  std::tm tm {};
  localtime_r(&now, &tm);
  CivilTime t;
  t.year = tm.tm_year + 1900;
  t.month = tm.tm_mon + 1;
  t.day = tm.tm_mday;
  t.hour = tm.tm_hour;
  t.minute = tm.tm_min;
  t.second = tm.tm_sec;
  return t;
}

}  // namespace negdb
