#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace qdiv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};
class DomainError : public Error {
 public:
  using Error::Error;
};
class ConvergenceError : public Error {
 public:
  using Error::Error;
};
class RankError : public Error {
 public:
  using Error::Error;
};
class SupportError : public Error {
 public:
  using Error::Error;
};
class ResourceError : public Error {
 public:
  using Error::Error;
};
class PreconditionError : public Error {
 public:
  using Error::Error;
};

namespace detail {

template <typename... Args>
std::string concat(const Args&... args) {
  std::ostringstream os;
  os.precision(6);
  (os << ... << args);
  return os.str();
}

}  // namespace detail

template <typename E, typename... Args>
[[noreturn]] void raise(const Args&... args) {
  throw E(detail::concat(args...));
}

}  // namespace qdiv
