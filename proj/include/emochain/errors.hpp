#pragma once

#include <stdexcept>

namespace emochain {

/// Bad user-supplied configuration (trust weights, share maps, synth specs, ...).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Unreadable or unwritable files.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation precondition.
struct contract_error : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace emochain
