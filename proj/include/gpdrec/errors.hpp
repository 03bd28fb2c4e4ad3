#pragma once

#include <stdexcept>
#include <string>

namespace gpdrec {

// Exit-code aligned error categories. Anything thrown out of the library is
// one of these; the C API maps them onto gpdrec_status values.

class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CapacityExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A property that the library asserts (an axiom of a constructed object, or a
// checked consequence) does not hold.  `witness` is a human readable
// description of the counterexample.
class PropertyFailure : public std::runtime_error {
 public:
  PropertyFailure(std::string const& what, std::string witness)
      : std::runtime_error(what), witness_(std::move(witness)) {}
  std::string const& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

}  // namespace gpdrec
