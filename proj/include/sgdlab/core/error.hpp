#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgdlab {

/// A simulation or solver stopped because the numerics broke down
/// (divergent iterate, negative density cell). Carries the offending step.
class NumericAbort : public std::runtime_error {
 public:
  NumericAbort(const std::string& what, std::int64_t step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"),
        step_(step) {}
  std::int64_t step() const noexcept { return step_; }

 private:
  std::int64_t step_;
};

/// Configuration rejected before any work started. Lists every offending field.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> problems)
      : std::runtime_error(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& p : items) {
      if (!out.empty()) out += "; ";
      out += p;
    }
    return out;
  }
  std::vector<std::string> problems_;
};

}  // namespace sgdlab
