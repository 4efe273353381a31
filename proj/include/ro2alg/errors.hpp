#pragma once

#include <stdexcept>
#include <string>

namespace ro2 {

/// Base for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A sigma- or a-exponent left the configured window.
struct WindowError : Error {
    explicit WindowError(const std::string& what) : Error(what) {}
};

/// Raw monomial violates per-generator divisibility.
struct DivisibilityError : Error {
    explicit DivisibilityError(const std::string& what) : Error(what) {}
};

/// An element mixes bidegrees where homogeneity is required.
struct HeterogeneousDegreeError : Error {
    explicit HeterogeneousDegreeError(const std::string& what) : Error(what) {}
};

/// Malformed user input (files, element strings, option values).
struct InputError : Error {
    explicit InputError(const std::string& what) : Error(what) {}
};

}  // namespace ro2
