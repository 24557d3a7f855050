#pragma once

#include <stdexcept>
#include <string>

namespace sg {

// Mirrors sg_status in spinglass.h.
enum class Code {
  ok = 0,
  invalid = 1,
  domain = 2,
  singular = 3,
  gamma_too_small = 4,
  no_root = 5,
  blow_up = 6,
  escape = 7,
  grid_mismatch = 8,
  not_admissible = 9,
  memory = 10,
  internal = 11,
};

class Error : public std::runtime_error {
 public:
  Error(Code c, const std::string& what) : std::runtime_error(what), code_(c) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

[[noreturn]] inline void fail(Code c, const std::string& msg) { throw Error(c, msg); }

}  // namespace sg
