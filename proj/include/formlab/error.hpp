#pragma once

#include <stdexcept>
#include <string>

namespace formlab {

// Every library failure carries a short machine-readable code such as
// "RepeatedRoot" or "BadPrime" next to the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace formlab
