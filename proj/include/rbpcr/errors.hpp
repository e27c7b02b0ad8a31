#ifndef RBPCR_ERRORS_HPP
#define RBPCR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rbpcr {

// Bad user input (files, config values). CLI maps this to exit code 2.
class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure at runtime (non-convergence, degenerate data,
// eigensolver breakdown). CLI maps this to exit code 3.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rbpcr

#endif  // RBPCR_ERRORS_HPP
