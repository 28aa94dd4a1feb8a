#pragma once

#include <cmath>
#include <cstdio>
#include <ios>
#include <limits>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/math/special_functions/expm1.hpp>
#include <boost/math/special_functions/log1p.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "error.hpp"

namespace stieltjes {

/// Software floating point with 100 significant decimal digits. Expression
/// templates are off so that `auto` and generic code behave like `double`.
using extended = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<100>,
                                               boost::multiprecision::et_off>;

enum class Precision { f64, extended };

inline const char* to_string(Precision p) { return p == Precision::f64 ? "f64" : "extended"; }

template <class Real>
inline constexpr bool is_extended_v = std::is_same_v<Real, extended>;

/// Relative tolerance applied to cancellation scales: 1e-8 in binary64, 1e-30 in extended.
template <class Real>
inline Real default_rel_tol() {
    if constexpr (is_extended_v<Real>)
        return Real("1e-30");
    else
        return Real(1e-8);
}

template <class Real>
inline double to_double(const Real& v) {
    if constexpr (std::is_same_v<Real, double>)
        return v;
    else
        return v.template convert_to<double>();
}

template <class Real>
inline Real expm1(const Real& v) {
    return boost::math::expm1(v);
}

template <class Real>
inline Real log1p(const Real& v) {
    return boost::math::log1p(v);
}

template <class Real>
inline bool is_finite(const Real& v) {
    using std::isfinite;
    using boost::multiprecision::isfinite;
    return isfinite(v);
}

/// Strictly positive order of a generalized Stieltjes kernel (x+t)^-lambda.
class LambdaOrder {
public:
    explicit LambdaOrder(double value) : value_(value) {
        if (!(value > 0.0) || !std::isfinite(value))
            throw Error(ErrorKind::BadLambda, "lambda must be a finite number > 0, got " + std::to_string(value));
    }

    double value() const noexcept { return value_; }

    template <class Real>
    Real as() const {
        return Real(value_);
    }

    friend bool operator==(LambdaOrder a, LambdaOrder b) { return a.value_ == b.value_; }

private:
    double value_;
};

/// prod_{i=0}^{count-1} (base + i); the Gamma ratio Gamma(base+count)/Gamma(base).
template <class Real>
Real rising_product(const Real& base, int count) {
    Real p(1);
    for (int i = 0; i < count; ++i) p *= base + Real(i);
    return p;
}

/// Row k of Pascal's triangle by the multiplicative recurrence C(k,j+1) = C(k,j)(k-j)/(j+1).
template <class Real>
std::vector<Real> binomial_row(int k) {
    std::vector<Real> row(static_cast<std::size_t>(k) + 1);
    row[0] = Real(1);
    for (int j = 0; j < k; ++j) row[j + 1] = row[j] * Real(k - j) / Real(j + 1);
    return row;
}

template <class Real>
Real factorial(int n) {
    return rising_product(Real(1), n);
}

/// Deterministic decimal rendering: 17 significant digits for binary64,
/// the full digit count for extended.
template <class Real>
std::string format_real(const Real& v) {
    if constexpr (std::is_same_v<Real, double>) {
        if (std::isnan(v)) return "NaN";
        if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    } else {
        if (!is_finite(v)) return format_real(to_double(v));
        return v.str(std::numeric_limits<Real>::digits10, std::ios_base::scientific);
    }
}

} // namespace stieltjes
