#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stoc {

// Malformed or inconsistent input data. Carries the 1-based line number of
// the offending input line when one is known (0 otherwise).
class DataError : public std::runtime_error {
 public:
  DataError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(format(source, line, what)), source_(source), line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& source, std::size_t line,
                            const std::string& what) {
    std::string msg = source;
    if (line > 0) msg += ":" + std::to_string(line);
    if (!msg.empty()) msg += ": ";
    return msg + what;
  }

  std::string source_;
  std::size_t line_;
};

}  // namespace stoc
