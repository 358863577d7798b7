#ifndef LSINV_ERRORS_HPP
#define LSINV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lsinv {

/// Invalid user-facing input: malformed config, out-of-range parameters,
/// violated construction invariants. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Runtime numerical failure: eigensolver non-convergence, residuals or
/// unitarity defects above tolerance, degenerate denominators.
/// Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace lsinv

#endif
