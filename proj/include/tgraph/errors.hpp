#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tgraph {

/// Raised when an argument violates an operation's domain (bad p, bad vertex,
/// malformed window, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Graph-file and path-file parse failures. `line()` is 1-based, 0 when the
/// failure is not tied to a particular line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A search or sampler exceeded its node/step budget. Carries the best
/// partial answer known at the time (for clique search, the incumbent).
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what, std::vector<int> incumbent = {})
      : std::runtime_error(what), incumbent_(std::move(incumbent)) {}

  const std::vector<int>& incumbent() const noexcept { return incumbent_; }

 private:
  std::vector<int> incumbent_;
};

}  // namespace tgraph
