#pragma once

#include <stdexcept>
#include <string>

namespace excprime {

// Input-side failures (bad curve data, missing overrides, malformed files,
// out-of-range requests). The CLI maps these to exit code 2.
class input_error : public std::runtime_error {
  public:
    input_error(const std::string& module, const std::string& what)
        : std::runtime_error(module + ": " + what), module_(module) {}
    const std::string& module() const { return module_; }

  private:
    std::string module_;
};

// Broken internal invariants (Weil bound violation, impossible classification
// state). The CLI maps these to exit code 3.
class internal_error : public std::logic_error {
  public:
    internal_error(const std::string& module, const std::string& what)
        : std::logic_error(module + ": " + what), module_(module) {}
    const std::string& module() const { return module_; }

  private:
    std::string module_;
};

}  // namespace excprime
