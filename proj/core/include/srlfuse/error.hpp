#pragma once

#include <stdexcept>
#include <string>

namespace srlfuse {

enum class ErrorKind {
  kInvalidArgument,
  kOutOfRange,
  kOverlap,
  kDimension,
  kData,
  kConfig,
  kModel,
  kIo,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace srlfuse
