#pragma once

#include <stdexcept>
#include <string>

namespace vaporstore {

enum class ErrorCode {
  domain = 1,       // argument value outside the physical or numeric domain
  shape = 2,        // array dimensions disagree
  config = 3,       // bad run configuration
  format = 4,       // malformed file content
  io = 5,           // filesystem failure
  no_converge = 6,  // iterative solver hit its cap
  degenerate = 7,   // input is valid but the quantity is undefined on it
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

}  // namespace vaporstore
