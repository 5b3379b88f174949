#pragma once

#include <stdexcept>
#include <string>

namespace delex {

// Exit codes used by the CLI. Library errors carry the code they map onto so
// the front end can translate an exception without inspecting its type.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,            // bad flags, unparsable input files, out-of-range requests
  kExitCoverage = 3,          // no seed token produces any context in the corpus
  kExitIo = 4,                // unreadable or unwritable files
  kExitEarlyTermination = 5,  // run stopped before the requested iteration count
};

class Error : public std::runtime_error {
 public:
  Error(std::string msg, int exit_code)
      : std::runtime_error(std::move(msg)), exit_code_(exit_code) {}
  int exit_code() const { return exit_code_; }

 private:
  int exit_code_;
};

struct ConfigError : Error {
  explicit ConfigError(std::string msg) : Error(std::move(msg), kExitConfig) {}
};

// Parse problems in input data; always points at a file and line.
struct ParseError : Error {
  ParseError(const std::string& source, std::size_t line_no, const std::string& what)
      : Error(source + ":" + std::to_string(line_no) + ": " + what, kExitConfig) {}
};

struct CoverageError : Error {
  explicit CoverageError(std::string msg) : Error(std::move(msg), kExitCoverage) {}
};

struct IoError : Error {
  explicit IoError(std::string msg) : Error(std::move(msg), kExitIo) {}
};

}  // namespace delex
