#pragma once

#include <stdexcept>
#include <string>

namespace signet {

/// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input data (graph files, configs, dimension mismatches).
struct parse_error : error {
    using error::error;
};

/// An operation required a structurally balanced graph and got an
/// unbalanced one.
struct unbalanced_error : error {
    using error::error;
};

/// A numerical routine (eigensolver, decomposition) failed outright.
struct numeric_error : error {
    using error::error;
};

/// A simulated trajectory exceeded the overflow guard.
struct divergence_error : error {
    using error::error;
};

}  // namespace signet
