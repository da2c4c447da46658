#pragma once

#include <stdexcept>
#include <string>

namespace relhyp {

enum class ErrorCode {
  Parse,         // malformed word / JSON / spec text
  Alphabet,      // unknown symbol or alphabet mismatch
  Membership,    // word fails a required subgroup membership
  Unsupported,   // construction outside the supported group classes
  Budget,        // vertex or edge budget exceeded
  Truncation,    // truncated ball too small for the requested operation
  Gate,          // input size beyond an accuracy gate (no silent sampling)
  Invalid,       // invalid argument
  Construction,  // internal consistency failure while building an object
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace relhyp
