#pragma once

#include <stdexcept>
#include <string>

namespace flipmap {

// Base class for every error raised by this library. Subcommands catch this
// at the top level and map it to a nonzero exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Missing endpoint, credential env var, or malformed configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace flipmap
