#pragma once

#include <stdexcept>
#include <string>

namespace mtbl {

// Bad command line, bad config file, or a referenced file that does not exist.
// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed corpus, template, rule or model content, or inputs that do not
// fit the declared schema. The CLI maps this to exit code 3.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mtbl
