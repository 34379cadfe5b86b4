#pragma once

#include <stdexcept>
#include <string>

namespace ixt {

/// Argument outside the mathematical domain or the documented envelope.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The requested kernel route is ill-conditioned at this argument
/// (psi_direct below tau_min).
class RouteUnavailableError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Intermediate quantities left the representable range.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// Refinement exhausted without meeting the tolerance. Carries the last two
/// level estimates so callers can judge how far off the result is.
class NoConvergenceError : public std::runtime_error {
public:
    NoConvergenceError(const std::string& what, double previous, double last)
        : std::runtime_error(what), previous_(previous), last_(last) {}

    double previous() const noexcept { return previous_; }
    double last() const noexcept { return last_; }

private:
    double previous_;
    double last_;
};

/// A truncated integral could not be made to satisfy its tail bound
/// (contour height too small, tau-tail too heavy, wedge angle too wide).
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Decay metadata rules out convergence of the requested integral.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File missing, unreadable, or malformed.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ixt
