#pragma once

#include <stdexcept>
#include <string>

namespace sarki {

// Base of everything the library throws on purpose.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Caller handed in something outside the documented domain.
struct input_error : error {
  using error::error;
};

// A numeric constraint (degree bound, index, field) was violated.
struct constraint_error : error {
  using error::error;
};

// Internal bookkeeping did not close up; carries what was computed so far.
struct consistency_error : error {
  explicit consistency_error(const std::string& what, std::string partial = {})
      : error(what), partial_(std::move(partial)) {}
  const std::string& partial() const noexcept { return partial_; }

 private:
  std::string partial_;
};

// Missing or malformed data files.
struct data_error : error {
  using error::error;
};

struct overflow_error : error {
  using error::error;
};

}  // namespace sarki
