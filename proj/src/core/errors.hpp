#pragma once

#include <stdexcept>
#include <string>

namespace smf {

// Error taxonomy shared by the core library, the C API and the CLI.
// The numeric value of Kind doubles as the process exit code.
class Error : public std::runtime_error {
 public:
  enum class Kind : int {
    usage = 1,    // bad configuration, bad arguments, shape mismatches
    data = 2,     // unreadable/invalid files, malformed scenes, missing ids
    numeric = 3,  // non-finite values, failed gradient checks
  };

  Error(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}

  Kind kind() const { return kind_; }
  int exit_code() const { return static_cast<int>(kind_); }

 private:
  Kind kind_;
};

[[noreturn]] inline void throw_usage(const std::string& msg) {
  throw Error(Error::Kind::usage, msg);
}
[[noreturn]] inline void throw_data(const std::string& msg) {
  throw Error(Error::Kind::data, msg);
}
[[noreturn]] inline void throw_numeric(const std::string& msg) {
  throw Error(Error::Kind::numeric, msg);
}

}  // namespace smf
