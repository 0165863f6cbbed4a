#pragma once

#include <stdexcept>
#include <string>

namespace speq {

// Every failure raised by the library derives from Error so callers (the CLI
// in particular) can map it onto an exit code with a single catch.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

#define SPEQ_ERROR_KIND(Name, tag)                                          \
  class Name : public Error {                                                \
  public:                                                                    \
    using Error::Error;                                                      \
    const char* kind() const noexcept override { return tag; }               \
  };

SPEQ_ERROR_KIND(UnsupportedOrder, "unsupported-order")
SPEQ_ERROR_KIND(DimensionError, "dimension")
SPEQ_ERROR_KIND(ParameterError, "parameter")
SPEQ_ERROR_KIND(SingularOrder, "singular-order")
SPEQ_ERROR_KIND(InputError, "input")
SPEQ_ERROR_KIND(InvalidPoint, "invalid-point")
SPEQ_ERROR_KIND(TypeMismatch, "type")
SPEQ_ERROR_KIND(FitRefused, "fit-refused")
SPEQ_ERROR_KIND(CapacityError, "capacity")
SPEQ_ERROR_KIND(ConfigError, "invalid-config")
SPEQ_ERROR_KIND(Unsupported, "unsupported")

#undef SPEQ_ERROR_KIND

}  // namespace speq
