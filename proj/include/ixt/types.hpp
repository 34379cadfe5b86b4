#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "ixt/errors.hpp"

namespace ixt {

using ComplexScalar = std::complex<double>;

/// A value together with an absolute-error estimate produced by the
/// evaluation scheme (series remainder, level difference, tail bound).
template <class T>
struct Estimate {
    T value{};
    double err_est = 0.0;
};

using EvalResult = Estimate<double>;
using ComplexEvalResult = Estimate<ComplexScalar>;

inline constexpr double pi = std::numbers::pi;

namespace detail {

inline bool finite(double v) { return std::isfinite(v); }
inline bool finite(const ComplexScalar& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
}

/// Public operations never hand out NaN/Inf; they throw instead.
template <class T>
inline const T& require_finite(const T& v, const char* what) {
    if (!finite(v)) throw OverflowError(std::string(what) + ": non-finite result");
    return v;
}

}  // namespace detail
}  // namespace ixt
