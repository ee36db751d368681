#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gmrbm {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  too_large,
  parse_error,
  unsupported_version,
  io_error,
  schema_error,
};

const char* to_string(ErrorCode code) noexcept;

/// Base exception for everything thrown by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised while decoding a file; carries the byte offset where decoding stopped.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t byte_offset, const std::string& what)
      : Error(code, what + " (at byte offset " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}
  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const char* what) {
  if (!cond) throw Error(code, what);
}

}  // namespace gmrbm
