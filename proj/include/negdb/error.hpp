#pragma once

#include <stdexcept>
#include <string>

namespace negdb {

enum class ErrorCode {
  EmptyInput,
  NonAsciiInput,
  InvalidArgument,
  KeyGenFailure,
  DuplicateInsert,
  StorageFailure,
  UnknownRecord,
  CorruptTable,
  Internal,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NonAsciiInput: return "NonAsciiInput";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::KeyGenFailure: return "KeyGenFailure";
    case ErrorCode::DuplicateInsert: return "DuplicateInsert";
    case ErrorCode::StorageFailure: return "StorageFailure";
    case ErrorCode::UnknownRecord: return "UnknownRecord";
    case ErrorCode::CorruptTable: return "CorruptTable";
    case ErrorCode::Internal: return "Internal";
  }
  return "?";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace negdb
