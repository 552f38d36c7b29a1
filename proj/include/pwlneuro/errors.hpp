#pragma once

#include <stdexcept>
#include <string>

namespace pwlneuro {

struct NonFiniteError : std::runtime_error {
    explicit NonFiniteError(const std::string& what) : std::runtime_error(what) {}
};

struct NotRepresentableError : std::runtime_error {
    explicit NotRepresentableError(const std::string& what) : std::runtime_error(what) {}
};

struct WindowTooShortError : std::runtime_error {
    explicit WindowTooShortError(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientSamplesError : std::runtime_error {
    explicit InsufficientSamplesError(const std::string& what) : std::runtime_error(what) {}
};

struct NoSpikeFoundError : std::runtime_error {
    explicit NoSpikeFoundError(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyGridError : std::runtime_error {
    explicit EmptyGridError(const std::string& what) : std::runtime_error(what) {}
};

struct InfeasibleError : std::runtime_error {
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatchError : std::runtime_error {
    explicit DimensionMismatchError(const std::string& what) : std::runtime_error(what) {}
};

struct NoFiringError : std::runtime_error {
    explicit NoFiringError(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyReferenceError : std::runtime_error {
    explicit EmptyReferenceError(const std::string& what) : std::runtime_error(what) {}
};

struct TooShortError : std::runtime_error {
    explicit TooShortError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace pwlneuro
