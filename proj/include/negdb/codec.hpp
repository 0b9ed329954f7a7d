#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace negdb {

// Character that joins ASCII codes and separates the payload from the key.
inline constexpr char kSeparator = '*';

// Calendar instant at one-second resolution, 24-hour clock.
struct CivilTime {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31
  int hour = 0;   // 0..23
  int minute = 0;
  int second = 0;
};

// 15-digit insertion key: YYYYMMDDHHMMSSZ where Z is 0 for AM, 1 for PM.
struct TimestampKey {
  int year = 0;
  int month = 0;
  int day = 0;
  int hour = 0;
  int minute = 0;
  int second = 0;
  int meridiem = 0;      // 0 = AM, 1 = PM; always equals (hour >= 12)
  std::string rendered;  // exactly 15 digits

  bool operator==(const TimestampKey&) const = default;
};

// Which per-character encoding feeds the pipeline. kSeparator joins decimal
// codes with '*' (reversible); kMul10 multiplies alphanumeric codes by ten
// and concatenates everything without separators.
enum class CodecVariant { kSeparator, kMul10 };

std::string ascii_encode(std::string_view text);
std::string ascii_encode_mul10(std::string_view text);

TimestampKey make_timestamp(const CivilTime& instant);
TimestampKey parse_timestamp(std::string_view rendered);

std::string virtual_encrypt(std::string_view text, const TimestampKey& key,
                            CodecVariant variant = CodecVariant::kSeparator);

// Wall clock, unless NEGDB_CLOCK is set to "YYYY-MM-DDThh:mm:ss".
CivilTime current_civil_time();

using Clock = std::function<CivilTime()>;

}  // namespace negdb
