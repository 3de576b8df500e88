#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace maxweight {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One structural violation found while validating an instance,
/// addressed by where it was found (state/action/queue coordinates).
struct Violation {
  std::string location;
  std::string message;
};

/// Thrown when an operation requires a valid instance and got an invalid one.
/// Carries the full violation list so callers can report exhaustively.
class ValidationError : public Error {
 public:
  ValidationError(std::string summary, std::vector<Violation> violations)
      : Error(compose(summary, violations)), violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string compose(const std::string& summary,
                             const std::vector<Violation>& vs) {
    std::string msg = summary;
    for (const auto& v : vs) {
      msg += "\n  - " + v.location + ": " + v.message;
    }
    return msg;
  }

  std::vector<Violation> violations_;
};

}  // namespace maxweight
