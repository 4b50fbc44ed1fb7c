#pragma once

#include <stdexcept>
#include <string>

namespace qiforge {

// Raised when an enumeration would exceed its configured element budget.
// Budgets are hard caps: we refuse to truncate silently.
class budget_error : public std::runtime_error {
 public:
  explicit budget_error(const std::string& what) : std::runtime_error("budget: " + what) {}
};

// Raised when a query falls outside a precomputed window (ball, census, ...).
// Callers get an error, never a guessed value.
class out_of_window_error : public std::runtime_error {
 public:
  explicit out_of_window_error(const std::string& what)
      : std::runtime_error("out-of-window: " + what) {}
};

// Raised for malformed or unsupported specs (group strings, map specs, config).
class spec_error : public std::runtime_error {
 public:
  explicit spec_error(const std::string& what) : std::runtime_error("spec: " + what) {}
};

}  // namespace qiforge
