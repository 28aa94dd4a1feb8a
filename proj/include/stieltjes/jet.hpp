#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "error.hpp"
#include "real.hpp"

namespace stieltjes {

/// f(x0), f'(x0), ..., f^(N)(x0). The public carrier for every derivative
/// formula; Taylor coefficients stay an internal detail of `Taylor`.
template <class Real>
struct Jet {
    Real x0{};
    std::vector<Real> derivs;

    int order() const noexcept { return static_cast<int>(derivs.size()) - 1; }
    const Real& operator[](std::size_t n) const { return derivs[n]; }
};

/// Truncated Taylor series a_0 + a_1 h + ... + a_N h^N about a fixed point,
/// with a_n = f^(n)(x0)/n!. Arithmetic follows the standard coefficient
/// recurrences; all operands must share the same truncation order.
template <class Real>
class Taylor {
public:
    Taylor() = default;
    explicit Taylor(int order) : c_(static_cast<std::size_t>(order) + 1, Real(0)) {}

    static Taylor constant(const Real& v, int order) {
        Taylor t(order);
        t.c_[0] = v;
        return t;
    }

    /// The identity function expanded about x0.
    static Taylor variable(const Real& x0, int order) {
        Taylor t(order);
        t.c_[0] = x0;
        if (order >= 1) t.c_[1] = Real(1);
        return t;
    }

    /// (x0 + h)^p for real p and x0 > 0: coefficients C(p, m) x0^(p-m).
    static Taylor power_of_variable(const Real& x0, const Real& p, int order) {
        using std::pow;
        Taylor t(order);
        t.c_[0] = pow(x0, p);
        for (int m = 1; m <= order; ++m) t.c_[m] = t.c_[m - 1] * (p - Real(m - 1)) / (Real(m) * x0);
        return t;
    }

    /// (x0 + h)^p for integer p >= 0, exact polynomial coefficients C(p, m) x0^(p-m).
    static Taylor integer_power_of_variable(const Real& x0, int p, int order) {
        Taylor t(order);
        const auto binom = binomial_row<Real>(p);
        for (int m = 0; m <= std::min(p, order); ++m) {
            Real xp(1);
            for (int i = 0; i < p - m; ++i) xp *= x0;
            t.c_[m] = binom[m] * xp;
        }
        return t;
    }

    static Taylor from_jet(const Jet<Real>& jet) {
        Taylor t(jet.order());
        Real fact(1);
        for (int n = 0; n <= jet.order(); ++n) {
            if (n > 0) fact *= Real(n);
            t.c_[n] = jet.derivs[n] / fact;
        }
        return t;
    }

    Jet<Real> to_jet(const Real& x0) const {
        Jet<Real> jet{x0, std::vector<Real>(c_.size())};
        Real fact(1);
        for (int n = 0; n <= order(); ++n) {
            if (n > 0) fact *= Real(n);
            jet.derivs[n] = c_[n] * fact;
        }
        return jet;
    }

    int order() const noexcept { return static_cast<int>(c_.size()) - 1; }
    const Real& operator[](std::size_t n) const { return c_[n]; }
    Real& operator[](std::size_t n) { return c_[n]; }
    const std::vector<Real>& coefficients() const noexcept { return c_; }

    friend Taylor operator+(const Taylor& a, const Taylor& b) {
        Taylor r(a.order());
        for (std::size_t n = 0; n < r.c_.size(); ++n) r.c_[n] = a.c_[n] + b.c_[n];
        return r;
    }

    friend Taylor operator-(const Taylor& a, const Taylor& b) {
        Taylor r(a.order());
        for (std::size_t n = 0; n < r.c_.size(); ++n) r.c_[n] = a.c_[n] - b.c_[n];
        return r;
    }

    friend Taylor operator-(const Taylor& a) {
        Taylor r(a.order());
        for (std::size_t n = 0; n < r.c_.size(); ++n) r.c_[n] = -a.c_[n];
        return r;
    }

    friend Taylor operator*(const Taylor& a, const Taylor& b) {
        Taylor r(a.order());
        for (int n = 0; n <= r.order(); ++n) {
            Real s(0);
            for (int j = 0; j <= n; ++j) s += a.c_[j] * b.c_[n - j];
            r.c_[n] = s;
        }
        return r;
    }

    friend Taylor operator/(const Taylor& a, const Taylor& b) {
        if (b.c_[0] == Real(0)) throw Error(ErrorKind::DomainError, "division by zero");
        Taylor r(a.order());
        for (int n = 0; n <= r.order(); ++n) {
            Real s = a.c_[n];
            for (int j = 1; j <= n; ++j) s -= b.c_[j] * r.c_[n - j];
            r.c_[n] = s / b.c_[0];
        }
        return r;
    }

    friend Taylor exp(const Taylor& a) {
        using std::exp;
        Taylor r(a.order());
        r.c_[0] = exp(a.c_[0]);
        for (int n = 1; n <= r.order(); ++n) {
            Real s(0);
            for (int j = 1; j <= n; ++j) s += Real(j) * a.c_[j] * r.c_[n - j];
            r.c_[n] = s / Real(n);
        }
        return r;
    }

    friend Taylor log(const Taylor& a) {
        using std::log;
        if (!(a.c_[0] > Real(0))) throw Error(ErrorKind::DomainError, "log of a nonpositive value");
        Taylor r(a.order());
        r.c_[0] = log(a.c_[0]);
        for (int n = 1; n <= r.order(); ++n) {
            Real s(0);
            for (int j = 1; j < n; ++j) s += Real(j) * r.c_[j] * a.c_[n - j];
            r.c_[n] = (a.c_[n] - s / Real(n)) / a.c_[0];
        }
        return r;
    }

    friend Taylor sqrt(const Taylor& a) {
        using std::sqrt;
        if (!(a.c_[0] > Real(0))) throw Error(ErrorKind::DomainError, "sqrt of a nonpositive value");
        Taylor r(a.order());
        r.c_[0] = sqrt(a.c_[0]);
        for (int n = 1; n <= r.order(); ++n) {
            Real s = a.c_[n];
            for (int j = 1; j < n; ++j) s -= r.c_[j] * r.c_[n - j];
            r.c_[n] = s / (Real(2) * r.c_[0]);
        }
        return r;
    }

    /// a^alpha. Integer exponents go through repeated multiplication, which
    /// is valid for any base value; other exponents need a_0 > 0 and use
    /// the recurrence derived from a * (a^alpha)' = alpha * a' * a^alpha.
    friend Taylor pow(const Taylor& a, double alpha) {
        using std::pow;
        if (alpha == std::floor(alpha) && std::abs(alpha) <= 64) {
            const int e = static_cast<int>(std::abs(alpha));
            Taylor r = Taylor::constant(Real(1), a.order());
            Taylor base = a;
            for (int bits = e; bits > 0; bits >>= 1) {
                if (bits & 1) r = r * base;
                if (bits > 1) base = base * base;
            }
            return alpha < 0 ? Taylor::constant(Real(1), a.order()) / r : r;
        }
        if (!(a.c_[0] > Real(0)))
            throw Error(ErrorKind::DomainError, "non-integer power of a nonpositive value");
        const Real al(alpha);
        Taylor r(a.order());
        r.c_[0] = pow(a.c_[0], al);
        for (int n = 1; n <= r.order(); ++n) {
            Real s(0);
            for (int j = 1; j <= n; ++j) s += (al * Real(j) - Real(n - j)) * a.c_[j] * r.c_[n - j];
            r.c_[n] = s / (Real(n) * a.c_[0]);
        }
        return r;
    }

private:
    std::vector<Real> c_;
};

} // namespace stieltjes
