#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "function.hpp"
#include "jet.hpp"
#include "measure.hpp"
#include "real.hpp"

namespace stieltjes {

/// An alternating-sum result together with its cancellation scale, the sum
/// of the absolute values of the summands.
template <class Real>
struct ScaledValue {
    Real value{};
    Real scale{};
};

/// Gamma(n+k+lambda)/Gamma(n+j+lambda) as the rising product prod_{i=j}^{k-1} (n+lambda+i).
template <class Real>
Real gamma_ratio(int n, int j, int k, LambdaOrder lambda) {
    if (n < 0 || j < 0 || j > k)
        throw Error(ErrorKind::BadIndices, "gamma_ratio needs n >= 0 and 0 <= j <= k");
    return rising_product(Real(n + j) + lambda.as<Real>(), k - j);
}

namespace detail {

template <class Real>
void require_jet(const Jet<Real>& jet, int needed) {
    if (jet.order() < needed)
        throw Error(ErrorKind::InsufficientOrder,
                    "need derivatives to order " + std::to_string(needed) + ", jet has " + std::to_string(jet.order()));
    require_positive_x(jet.x0);
}

template <class Real>
void require_nk(int n, int k) {
    if (n < 0 || k < 0) throw Error(ErrorKind::BadIndices, "n and k must be >= 0");
}

/// Taylor series of D^n f about x0, truncated at order k.
template <class Real>
Taylor<Real> shifted_series(const Jet<Real>& jet, int n, int k) {
    Jet<Real> shifted{jet.x0, std::vector<Real>(jet.derivs.begin() + n, jet.derivs.begin() + n + k + 1)};
    return Taylor<Real>::from_jet(shifted);
}

} // namespace detail

/// F^[lambda]_{n,k}(x) = (-1)^n sum_j C(k,j) Gamma(n+k+lambda)/Gamma(n+j+lambda) x^j f^(n+j)(x).
template <class Real>
ScaledValue<Real> f_nk_sum(const Jet<Real>& jet, LambdaOrder lambda, int n, int k) {
    using std::abs;
    detail::require_nk<Real>(n, k);
    detail::require_jet(jet, n + k);
    const auto binom = binomial_row<Real>(k);
    const Real base = Real(n) + lambda.as<Real>();

    // ratio_j = prod_{i=j}^{k-1} (n+lambda+i), filled from j = k downwards
    std::vector<Real> ratio(static_cast<std::size_t>(k) + 1);
    ratio[k] = Real(1);
    for (int j = k - 1; j >= 0; --j) ratio[j] = ratio[j + 1] * (base + Real(j));

    Real sum(0), scale(0), xp(1);
    for (int j = 0; j <= k; ++j) {
        const Real term = binom[j] * ratio[j] * xp * jet.derivs[n + j];
        sum += term;
        scale += abs(term);
        xp *= jet.x0;
    }
    if (n % 2 == 1) sum = -sum;
    return {sum, scale};
}

/// (-1)^n x^-(n+lambda-1) D^k x^(n+k+lambda-1) D^n f(x), by multiplying the
/// shifted jet of f with the jet of the real power and reading off the k-th derivative.
template <class Real>
Real f_nk_operator(const Jet<Real>& jet, LambdaOrder lambda, int n, int k) {
    using std::pow;
    detail::require_nk<Real>(n, k);
    detail::require_jet(jet, n + k);
    const Real x = jet.x0;
    const Real lam = lambda.as<Real>();
    const auto g = detail::shifted_series(jet, n, k);
    const auto p = Taylor<Real>::power_of_variable(x, Real(n + k - 1) + lam, k);
    const auto prod = g * p;
    Real v = prod[k] * factorial<Real>(k) * pow(x, -(Real(n - 1) + lam));
    return n % 2 == 1 ? -v : v;
}

template <class Real>
Real f_nk_operator(const FunctionSpec& fn, LambdaOrder lambda, int n, int k, const Real& x) {
    detail::require_nk<Real>(n, k);
    return f_nk_operator(derivatives(fn, x, n + k), lambda, n, k);
}

/// The three lambda = 1 formulas for F_{n,k}.
enum class WidderVariant { sum, deriv1, deriv2 };

/// F_{n,k}(x) at lambda = 1 by the chosen formula:
///   sum:    the binomial sum with (n+k)!/(n+j)!
///   deriv1: (-1)^n x^-n D^k x^(n+k) D^n f
///   deriv2: (-1)^n D^(n+k) x^k f
template <class Real>
Real f_nk_widder(const Jet<Real>& jet, int n, int k, WidderVariant variant) {
    using std::pow;
    detail::require_nk<Real>(n, k);
    detail::require_jet(jet, n + k);
    const Real x = jet.x0;
    Real v;
    switch (variant) {
    case WidderVariant::sum: return f_nk_sum(jet, LambdaOrder(1.0), n, k).value;
    case WidderVariant::deriv1: {
        const auto g = detail::shifted_series(jet, n, k);
        const auto p = Taylor<Real>::integer_power_of_variable(x, n + k, k);
        v = (g * p)[k] * factorial<Real>(k);
        Real xn(1);
        for (int i = 0; i < n; ++i) xn *= x;
        v /= xn;
        break;
    }
    case WidderVariant::deriv2: {
        const int order = n + k;
        Jet<Real> head{x, std::vector<Real>(jet.derivs.begin(), jet.derivs.begin() + order + 1)};
        const auto f = Taylor<Real>::from_jet(head);
        const auto q = Taylor<Real>::integer_power_of_variable(x, k, order);
        v = (f * q)[order] * factorial<Real>(order);
        break;
    }
    }
    return n % 2 == 1 ? -v : v;
}

template <class Real>
Real f_nk_widder(const FunctionSpec& fn, int n, int k, const Real& x, WidderVariant variant) {
    detail::require_nk<Real>(n, k);
    return f_nk_widder(derivatives(fn, x, n + k), n, k, variant);
}

/// Closed form for measure-backed functions:
/// F = (lambda)_{n+k} [C delta_{n,0} + int t^k / (x+t)^(n+k+lambda) d rho(t)].
/// Pieces expand t^k = ((x+t) - x)^k and integrate each power exactly.
template <class Real>
Real f_nk_measure_oracle(const MeasureSpec& m, LambdaOrder lambda, int n, int k, const Real& x) {
    using std::pow;
    detail::require_nk<Real>(n, k);
    require_positive_x(x);
    const Real s = Real(n + k) + lambda.as<Real>();
    Real inner = n == 0 ? Real(m.constant()) : Real(0);
    for (const auto& a : m.atoms()) {
        if (a.w == 0) continue;
        Real tk(1);
        for (int i = 0; i < k; ++i) tk *= Real(a.t);
        inner += Real(a.w) * tk * pow(x + Real(a.t), -s);
    }
    if (!m.pieces().empty()) {
        const auto binom = binomial_row<Real>(k);
        for (const auto& p : m.pieces()) {
            if (p.h == 0) continue;
            const Real lo = x + Real(p.a), hi = x + Real(p.b);
            Real acc(0), neg_x_pow(1); // (-x)^(k-mm), built from mm = k down
            for (int mm = k; mm >= 0; --mm) {
                acc += binom[mm] * neg_x_pow * power_integral(lo, hi, s - Real(mm));
                neg_x_pow *= -x;
            }
            inner += Real(p.h) * acc;
        }
    }
    return rising_product(lambda.as<Real>(), n + k) * inner;
}

/// sum_{j=0}^k (-1)^j C(k,j) c_{n+j}, i.e. (-1)^k (Delta^k c)_n.
template <class Real>
Real delta_k(std::span<const Real> c, int n, int k) {
    if (n < 0 || k < 0) throw Error(ErrorKind::OutOfRange, "n and k must be >= 0");
    if (static_cast<std::size_t>(n + k) >= c.size())
        throw Error(ErrorKind::OutOfRange, "n + k = " + std::to_string(n + k) + " exceeds sequence length " +
                                               std::to_string(c.size()));
    const auto binom = binomial_row<Real>(k);
    Real s(0);
    for (int j = 0; j <= k; ++j) {
        const Real term = binom[j] * c[n + j];
        s += (j % 2 == 0) ? term : -term;
    }
    return s;
}

template <class Real>
Real delta_k(const std::vector<Real>& c, int n, int k) {
    return delta_k(std::span<const Real>(c), n, k);
}

/// F^[lambda]_{n,k}(x) for 0 <= n <= n_max, 0 <= k <= k_max at one point.
template <class Real>
struct FTable {
    Real x{};
    double lambda = 1.0;
    int n_max = 0;
    int k_max = 0;
    std::vector<std::vector<Real>> values;
    std::vector<std::vector<Real>> scales;
    /// Largest |sum - operator| / scale over the cross-checked entries.
    Real crosscheck_deviation{};

    /// value / scale, or 0 when the entry vanishes identically.
    Real normalized(int n, int k) const {
        const Real& s = scales[n][k];
        return s == Real(0) ? Real(0) : values[n][k] / s;
    }
};

/// Values come from the binomial sum; the operator form is evaluated on the
/// first row, the last column and the diagonal as a cross-check.
template <class Real>
FTable<Real> f_table(const FunctionSpec& fn, LambdaOrder lambda, const Real& x, int n_max, int k_max) {
    using std::abs;
    using std::max;
    if (n_max < 0 || k_max < 0) throw Error(ErrorKind::BadIndices, "table sizes must be >= 0");
    const auto jet = derivatives(fn, x, n_max + k_max);
    FTable<Real> t;
    t.x = x;
    t.lambda = lambda.value();
    t.n_max = n_max;
    t.k_max = k_max;
    t.values.assign(n_max + 1, std::vector<Real>(k_max + 1));
    t.scales.assign(n_max + 1, std::vector<Real>(k_max + 1));
    t.crosscheck_deviation = Real(0);
    for (int n = 0; n <= n_max; ++n) {
        for (int k = 0; k <= k_max; ++k) {
            const auto sv = f_nk_sum(jet, lambda, n, k);
            t.values[n][k] = sv.value;
            t.scales[n][k] = sv.scale;
            if (n == 0 || k == k_max || n == k) {
                const Real op = f_nk_operator(jet, lambda, n, k);
                if (sv.scale > Real(0)) t.crosscheck_deviation = max(t.crosscheck_deviation, abs(op - sv.value) / sv.scale);
            }
        }
    }
    return t;
}

} // namespace stieltjes
