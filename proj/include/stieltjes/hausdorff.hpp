#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "function.hpp"
#include "grid.hpp"
#include "operators.hpp"
#include "real.hpp"

namespace stieltjes {

/// Finite prefix c_0, ..., c_N of a candidate Hausdorff moment sequence.
template <class Real>
struct MomentSequence {
    std::vector<Real> entries;

    int last_index() const noexcept { return static_cast<int>(entries.size()) - 1; }
    std::span<const Real> view() const noexcept { return entries; }
};

/// An entry is accepted when (-1)^k (Delta^k c)_n >= -(absolute + relative * scale),
/// scale being sum_j C(k,j) |c_{n+j}|.
template <class Real>
struct CmTolerance {
    Real absolute{0};
    Real relative{0};
};

template <class Real>
struct CmViolation {
    int n = 0;
    int k = 0;
    Real value{};
};

template <class Real>
struct CmVerdict {
    bool completely_monotone = true;
    std::optional<CmViolation<Real>> first_violation;
};

namespace detail {

template <class Real>
Real delta_scale(std::span<const Real> c, int n, int k) {
    using std::abs;
    const auto binom = binomial_row<Real>(k);
    Real s(0);
    for (int j = 0; j <= k; ++j) s += binom[j] * abs(c[n + j]);
    return s;
}

} // namespace detail

/// Checks every (n, k) with n + k <= N, scanning k outer and n inner; the
/// reported violation is the first one in that order.
template <class Real>
CmVerdict<Real> is_cm_sequence(std::span<const Real> c, CmTolerance<Real> tol) {
    const int N = static_cast<int>(c.size()) - 1;
    for (int k = 0; k <= N; ++k) {
        for (int n = 0; n + k <= N; ++n) {
            const Real d = delta_k(c, n, k);
            Real threshold = tol.absolute;
            if (tol.relative != Real(0)) threshold += tol.relative * detail::delta_scale(c, n, k);
            if (d < -threshold) return {false, CmViolation<Real>{n, k, d}};
        }
    }
    return {};
}

template <class Real>
CmVerdict<Real> is_cm_sequence(const MomentSequence<Real>& c, Real tol) {
    return is_cm_sequence(c.view(), CmTolerance<Real>{tol, Real(0)});
}

/// c_n = (-1)^n Gamma(lambda)/Gamma(n+lambda) x^n f^(n)(x), n = 0..N.
template <class Real>
MomentSequence<Real> moment_sequence_at(const FunctionSpec& fn, LambdaOrder lambda, const Real& x, int N) {
    require_positive_x(x);
    const auto jet = derivatives(fn, x, N);
    MomentSequence<Real> out;
    out.entries.resize(static_cast<std::size_t>(N) + 1);
    const Real lam = lambda.as<Real>();
    Real rising(1), xn(1);
    for (int n = 0; n <= N; ++n) {
        Real v = xn * jet.derivs[n] / rising;
        out.entries[n] = n % 2 == 1 ? -v : v;
        rising *= lam + Real(n);
        xn *= x;
    }
    return out;
}

template <class Real>
struct UnitAtom {
    Real u{};
    Real m{};
};

/// Atoms on [0, 1]. Masses produced by `reconstruct` are negative exactly
/// when the input sequence fails complete monotonicity at that depth.
template <class Real>
struct DiscreteUnitMeasure {
    std::vector<UnitAtom<Real>> atoms;

    Real moment(int n) const {
        Real s(0);
        for (const auto& a : atoms) {
            Real un(1);
            for (int i = 0; i < n; ++i) un *= a.u;
            s += a.m * un;
        }
        return s;
    }

    bool nonnegative() const {
        return std::all_of(atoms.begin(), atoms.end(), [](const UnitAtom<Real>& a) { return !(a.m < Real(0)); });
    }
};

/// Atoms at u = j/K with mass C(K,j) (-1)^(K-j) (Delta^(K-j) c)_j, j = 0..K.
/// Total mass and first moment reproduce c_0 and c_1; the second moment is
/// c_2 + (c_1 - c_2)/K.
template <class Real>
DiscreteUnitMeasure<Real> reconstruct(std::span<const Real> c, int K) {
    if (K < 1) throw Error(ErrorKind::InsufficientLength, "reconstruction depth K must be >= 1");
    if (static_cast<std::size_t>(K) >= c.size())
        throw Error(ErrorKind::InsufficientLength,
                    "K = " + std::to_string(K) + " needs " + std::to_string(K + 1) + " moments, have " +
                        std::to_string(c.size()));
    const auto binom = binomial_row<Real>(K);
    DiscreteUnitMeasure<Real> nu;
    nu.atoms.reserve(K + 1);
    for (int j = 0; j <= K; ++j) nu.atoms.push_back({Real(j) / Real(K), binom[j] * delta_k(c, j, K - j)});
    return nu;
}

template <class Real>
DiscreteUnitMeasure<Real> reconstruct(const MomentSequence<Real>& c, int K) {
    return reconstruct(c.view(), K);
}

template <class Real>
struct RhoAtom {
    Real t{};
    Real w{};
};

template <class Real>
struct PushedMeasure {
    Real C_hat{};
    std::vector<RhoAtom<Real>> atoms;
};

/// Changes variables back via t = x(1/u - 1): the atom at u = 0 becomes the
/// constant, an atom (u, m) becomes mass m (x/u)^lambda at t. Zero masses are dropped.
template <class Real>
PushedMeasure<Real> pushforward_to_rho(const DiscreteUnitMeasure<Real>& nu, const Real& x, LambdaOrder lambda) {
    using std::pow;
    require_positive_x(x);
    PushedMeasure<Real> out;
    out.C_hat = Real(0);
    const Real lam = lambda.as<Real>();
    for (const auto& a : nu.atoms) {
        if (a.m < Real(0)) throw Error(ErrorKind::NegativeMass, "cannot push forward a negative mass");
        if (a.u < Real(0) || a.u > Real(1)) throw Error(ErrorKind::InvalidInput, "atom outside [0, 1]");
        if (a.m == Real(0)) continue;
        if (a.u == Real(0)) {
            out.C_hat += a.m;
            continue;
        }
        out.atoms.push_back({x * (Real(1) / a.u - Real(1)), a.m * pow(x / a.u, lam)});
    }
    return out;
}

template <class Real>
struct RecoveryDiagnostics {
    std::vector<Real> moment_residuals; // moment_n(nu) - c_n, n = 0..K
    Real sup_error{};                   // sup over the grid of |f_recovered - f|
    int clamped_masses = 0;
    LogGrid grid;
};

template <class Real>
struct RecoveredMeasure {
    Real x{};
    double lambda = 1.0;
    int K = 0;
    Real C_hat{};
    std::vector<RhoAtom<Real>> rho_atoms;
    RecoveryDiagnostics<Real> diagnostics;

    /// C_hat + sum w / (y+t)^lambda.
    Real induced(const Real& y) const {
        using std::pow;
        Real s = C_hat;
        for (const auto& a : rho_atoms) s += a.w * pow(y + a.t, -Real(lambda));
        return s;
    }
};

struct RecoveryOptions {
    LogGrid grid{0.5, 5.0, 50};
    /// Per-entry relative tolerance; defaults to the precision's epsilon.
    std::optional<double> rel_tol;
};

/// moment_sequence_at -> reconstruct -> pushforward_to_rho, with diagnostics.
/// Reconstructed masses that are negative within the cancellation tolerance
/// are clamped to zero and counted; anything more negative aborts.
template <class Real>
RecoveredMeasure<Real> recover_measure(const FunctionSpec& fn, LambdaOrder lambda, const Real& x, int K,
                                       const RecoveryOptions& opts = {}) {
    using std::abs;
    using std::max;
    require_positive_x(x);
    if (K < 1) throw Error(ErrorKind::InsufficientLength, "reconstruction depth K must be >= 1");
    const Real rel = opts.rel_tol ? Real(*opts.rel_tol) : default_rel_tol<Real>();

    const auto c = moment_sequence_at(fn, lambda, x, K);
    const auto verdict = is_cm_sequence(c.view(), CmTolerance<Real>{Real(0), rel});
    if (!verdict.completely_monotone) {
        const auto& v = *verdict.first_violation;
        throw Error(ErrorKind::NotCompletelyMonotone,
                    "moment sequence at x = " + format_real(to_double(x)) + " fails at n = " + std::to_string(v.n) +
                        ", k = " + std::to_string(v.k) + " (value " + format_real(to_double(v.value)) + ")");
    }

    auto nu = reconstruct(c, K);
    const auto binom = binomial_row<Real>(K);
    int clamped = 0;
    for (int j = 0; j <= K; ++j) {
        auto& a = nu.atoms[j];
        if (!(a.m < Real(0))) continue;
        const Real threshold = rel * binom[j] * detail::delta_scale(c.view(), j, K - j);
        if (a.m < -threshold)
            throw Error(ErrorKind::NotCompletelyMonotone,
                        "reconstructed mass at u = " + std::to_string(j) + "/" + std::to_string(K) + " is " +
                            format_real(to_double(a.m)));
        a.m = Real(0);
        ++clamped;
    }

    const auto pushed = pushforward_to_rho(nu, x, lambda);
    RecoveredMeasure<Real> out;
    out.x = x;
    out.lambda = lambda.value();
    out.K = K;
    out.C_hat = pushed.C_hat;
    out.rho_atoms = pushed.atoms;
    out.diagnostics.clamped_masses = clamped;
    out.diagnostics.grid = opts.grid;
    out.diagnostics.moment_residuals.resize(static_cast<std::size_t>(K) + 1);
    for (int n = 0; n <= K; ++n) out.diagnostics.moment_residuals[n] = nu.moment(n) - c.entries[n];
    Real sup(0);
    for (double y : opts.grid.points()) sup = max(sup, abs(out.induced(Real(y)) - value(fn, Real(y))));
    out.diagnostics.sup_error = sup;
    return out;
}

template <class Real>
struct ConsistencyReport {
    RecoveredMeasure<Real> first;
    RecoveredMeasure<Real> second;
    Real sup_discrepancy{}; // sup over the grid of |f_1 - f_2| for the two recovered functions
    Real constant_gap{};    // |C_hat(x1) - C_hat(x2)|
};

/// Recovers at two base points and compares the induced functions on the
/// recovery grid. Discretisations differ between base points, so the
/// measures themselves are never compared atom by atom.
template <class Real>
ConsistencyReport<Real> base_point_consistency(const FunctionSpec& fn, LambdaOrder lambda, const Real& x1,
                                               const Real& x2, int K, const RecoveryOptions& opts = {}) {
    using std::abs;
    using std::max;
    ConsistencyReport<Real> r{recover_measure(fn, lambda, x1, K, opts), recover_measure(fn, lambda, x2, K, opts)};
    Real sup(0);
    for (double y : opts.grid.points()) sup = max(sup, abs(r.first.induced(Real(y)) - r.second.induced(Real(y))));
    r.sup_discrepancy = sup;
    r.constant_gap = abs(r.first.C_hat - r.second.C_hat);
    return r;
}

} // namespace stieltjes
