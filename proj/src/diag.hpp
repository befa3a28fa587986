#pragma once

#include <cstdarg>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace driftlens {

enum class ErrorKind {
  Lex,
  Parse,
  Semantic,
  Format,
  UnsupportedVersion,
  Io,
  Range,
  Runtime,
  AlreadyInstrumented,
  NotHoistable,
  UnknownSite,
  SiteMismatch,
  ReferenceExhausted,
  Usage,
};

struct SourceLoc {
  int line = 0;
  int column = 0;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string msg, SourceLoc loc = {})
      : std::runtime_error(std::move(msg)), kind(kind), loc(loc) {}

  ErrorKind kind;
  SourceLoc loc;
};

inline std::string strf(const char* fmt, ...) {
  va_list ap;
  va_start(ap, fmt);
  char buf[1024];
  std::vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  return std::string(buf);
}

[[noreturn]] inline void fail(ErrorKind kind, SourceLoc loc, std::string msg) {
  throw Error(kind, std::move(msg), loc);
}

const char* error_kind_name(ErrorKind kind);

}  // namespace driftlens
