#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qblocks {

// Exit codes surfaced by the CLI; every library error maps onto one of them.
enum class ErrorKind : int {
  validation = 1,
  resource_cap = 2,
  non_convergence = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

/// Invalid input data. Carries every violated condition, not only the first.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorKind::validation, what), violations_{what} {}
  explicit ValidationError(std::vector<std::string> violations)
      : Error(ErrorKind::validation, join(violations)),
        violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept {
    return violations_;
  }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }
  std::vector<std::string> violations_;
};

class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what)
      : Error(ErrorKind::resource_cap, what) {}
};

class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what)
      : Error(ErrorKind::non_convergence, what) {}
};

}  // namespace qblocks
