#pragma once
#include <stdexcept>
#include <string>

namespace cdgl {

enum class ErrorKind {
  Shape,
  IllFormedComplex,
  IllFormedDifferential,
  Degree,
  NotInSpan,
  MCViolation,
  Divergence,
  InvalidSubgroup,
  Exactness,
  Resource,
  Usage,
  Internal,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Per-degree basis size limit, read from CDGL_RESOURCE_LIMIT.
std::size_t resource_limit();
void set_resource_limit(std::size_t n);
void check_resource(std::size_t size, const std::string& what);

}  // namespace cdgl
