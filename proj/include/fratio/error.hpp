#pragma once

#include <stdexcept>
#include <string>

namespace fratio {

// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid argument or parameter outside the supported region.
struct domain_error : error {
    using error::error;
};

// Evaluation at (or too near) a pole of a gamma factor.
struct pole_error : error {
    using error::error;
};

// A magnitude left the representable range of double.
struct overflow_error : error {
    using error::error;
};

// Quadrature or series failed to reach the requested tolerance.
struct convergence_error : error {
    using error::error;
};

// Residue series refused: pole families at integer-coincident locations.
struct collision_error : error {
    using error::error;
};

// Two distinct minimal pole families too close to separate numerically.
struct tie_error : error {
    using error::error;
};

// Scenario configuration is malformed or violates an invariant.
struct config_error : error {
    using error::error;
};

// Filesystem failure while reading a config or writing CSV.
struct io_error : error {
    using error::error;
};

} // namespace fratio
