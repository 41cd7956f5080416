#ifndef TENSORDEC_ERRORS_HPP
#define TENSORDEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tensordec {

// Precondition violations: wrong field, wrong sizes, invalid parameters.
struct domain_error : std::runtime_error {
  explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Characteristic too small for the requested derivative order.
struct small_characteristic_error : domain_error {
  explicit small_characteristic_error(const std::string& msg) : domain_error(msg) {}
};

// A method's runtime criterion failed (measured dimension/degree reported in the message).
struct criterion_error : std::runtime_error {
  explicit criterion_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input violates a general-position assumption (repeated forms, non-radical intersection, ...).
struct degenerate_error : std::runtime_error {
  explicit degenerate_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct parse_error : std::runtime_error {
  explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct timeout_error : std::runtime_error {
  explicit timeout_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tensordec

#endif
