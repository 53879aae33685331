#pragma once

#include <stdexcept>
#include <string>

namespace sar2d {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

/// Non-finite or otherwise malformed input.
class invalid_parameter : public error {
public:
    using error::error;
    const char* kind() const noexcept override { return "invalid_parameter"; }
};

/// Input outside the regime or support an operation is defined on.
class domain_error : public error {
public:
    using error::error;
    const char* kind() const noexcept override { return "domain_error"; }
};

/// The requested closed form needs αβ != 0.
class unsupported_parameterization : public domain_error {
public:
    using domain_error::domain_error;
    const char* kind() const noexcept override { return "unsupported_parameterization"; }
};

class numeric_overflow : public error {
public:
    using error::error;
    const char* kind() const noexcept override { return "numeric_overflow"; }
};

/// Cancellation would exceed double-precision headroom.
class precision_error : public error {
public:
    using error::error;
    const char* kind() const noexcept override { return "precision_error"; }
};

/// Allocation would exceed the configured memory budget.
class resource_error : public error {
public:
    using error::error;
    const char* kind() const noexcept override { return "resource_error"; }
};

}  // namespace sar2d
