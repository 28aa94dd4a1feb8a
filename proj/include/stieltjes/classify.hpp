#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "error.hpp"
#include "function.hpp"
#include "grid.hpp"
#include "operators.hpp"
#include "real.hpp"

namespace stieltjes {

enum class Verdict { consistent, violated };

inline const char* to_string(Verdict v) { return v == Verdict::consistent ? "consistent" : "violated"; }

template <class Real>
struct ReportViolation {
    double x = 0.0;
    int n = 0;
    int k = 0;
    Real value{};
    Real scale{};
};

/// Evidence collected by one sweep. Only `violated` is definitive: a
/// `consistent` verdict covers the sampled grid and table size, nothing more.
template <class Real>
struct ClassificationReport {
    std::string function;
    std::string check; // "condition_b", "condition_c" or "cm"
    std::optional<double> lambda;
    LogGrid grid;
    int n_max = 0;
    int k_max = 0;
    double tol = 0.0;
    Verdict verdict = Verdict::consistent;
    std::vector<ReportViolation<Real>> violations;
    Real min_normalized{1};
    std::vector<std::pair<double, Real>> min_normalized_per_point;

    const char* evidence() const {
        return verdict == Verdict::violated ? "certificate of non-membership" : "grid-limited evidence";
    }
};

namespace detail {

template <class Real>
ClassificationReport<Real> make_report(const FunctionSpec& fn, const char* check, std::optional<double> lambda,
                                       const LogGrid& grid, int n_max, int k_max, double tol) {
    ClassificationReport<Real> r;
    r.function = fn.label();
    r.check = check;
    r.lambda = lambda;
    r.grid = grid;
    r.n_max = n_max;
    r.k_max = k_max;
    r.tol = tol;
    return r;
}

/// Folds one entry into the report: a violation when value < -tol * scale.
template <class Real>
void record(ClassificationReport<Real>& r, Real& point_min, double x, int n, int k, const Real& value,
            const Real& scale) {
    const Real norm = scale == Real(0) ? Real(0) : value / scale;
    if (norm < point_min) point_min = norm;
    if (value < -Real(r.tol) * scale) {
        r.violations.push_back({x, n, k, value, scale});
        r.verdict = Verdict::violated;
    }
}

template <class Real>
void close_point(ClassificationReport<Real>& r, double x, const Real& point_min) {
    r.min_normalized_per_point.emplace_back(x, point_min);
    if (point_min < r.min_normalized) r.min_normalized = point_min;
}

} // namespace detail

/// Complete monotonicity sampled on a grid: (-1)^n f^(n)(x) >= -tol for n <= n_max.
/// Each entry is a single term, so the tolerance here is absolute.
template <class Real>
ClassificationReport<Real> check_cm(const FunctionSpec& fn, const LogGrid& grid, int n_max, double tol = 0.0) {
    using std::abs;
    auto r = detail::make_report<Real>(fn, "cm", std::nullopt, grid, n_max, 0, tol);
    for (double x : grid.points()) {
        const auto jet = derivatives(fn, Real(x), n_max);
        Real point_min(1);
        for (int n = 0; n <= n_max; ++n) {
            const Real v = n % 2 == 1 ? -jet.derivs[n] : jet.derivs[n];
            const Real norm = v == Real(0) ? Real(0) : v / abs(v);
            if (norm < point_min) point_min = norm;
            if (v < -Real(tol)) {
                r.violations.push_back({x, n, 0, v, abs(v)});
                r.verdict = Verdict::violated;
            }
        }
        detail::close_point(r, x, point_min);
    }
    return r;
}

/// Every F^[lambda]_{n,k}(x), n <= n_max, k <= k_max, x on the grid, must be
/// >= -tol * (cancellation scale).
template <class Real>
ClassificationReport<Real> check_condition_b(const FunctionSpec& fn, LambdaOrder lambda, const LogGrid& grid,
                                             int n_max, int k_max, double tol) {
    auto r = detail::make_report<Real>(fn, "condition_b", lambda.value(), grid, n_max, k_max, tol);
    for (double x : grid.points()) {
        const auto table = f_table(fn, lambda, Real(x), n_max, k_max);
        Real point_min(1);
        for (int n = 0; n <= n_max; ++n)
            for (int k = 0; k <= k_max; ++k) detail::record(r, point_min, x, n, k, table.values[n][k], table.scales[n][k]);
        detail::close_point(r, x, point_min);
    }
    return r;
}

/// Widder's reduced family at lambda = 1: F_{0,0} and F_{k-1,k} for 1 <= k <= k_max.
template <class Real>
ClassificationReport<Real> check_condition_c(const FunctionSpec& fn, const LogGrid& grid, int k_max, double tol) {
    const LambdaOrder one(1.0);
    auto r = detail::make_report<Real>(fn, "condition_c", 1.0, grid, std::max(0, k_max - 1), k_max, tol);
    for (double x : grid.points()) {
        const auto jet = derivatives(fn, Real(x), std::max(0, 2 * k_max - 1));
        Real point_min(1);
        const auto f00 = f_nk_sum(jet, one, 0, 0);
        detail::record(r, point_min, x, 0, 0, f00.value, f00.scale);
        for (int k = 1; k <= k_max; ++k) {
            const auto v = f_nk_sum(jet, one, k - 1, k);
            detail::record(r, point_min, x, k - 1, k, v.value, v.scale);
        }
        detail::close_point(r, x, point_min);
    }
    return r;
}

struct EmbeddingResidual {
    double integral = 0.0; // the numerically integrated right-hand side
    double target = 0.0;   // (x+t)^-lambda
    double residual = 0.0; // integral - target
    double error_estimate = 0.0;
};

/// Numerically integrates
///   Gamma(l')/(Gamma(l) Gamma(l'-l)) int_0^inf u^(l'-l-1) (x+t+u)^-l' du
/// after mapping u = (x+t)(1-s)/s onto (0, 1], and compares with (x+t)^-l.
/// The integrable endpoint singularities are removed by s = w^(1/l) near 0
/// (when l < 1) and 1 - s = v^(1/(l'-l)) near 1 (when l' - l < 1).
inline EmbeddingResidual kernel_embedding_residual(LambdaOrder lambda, LambdaOrder lambda_prime, double x, double t) {
    using boost::math::quadrature::gauss_kronrod;
    const double l = lambda.value(), lp = lambda_prime.value();
    if (!(l < lp)) throw Error(ErrorKind::BadOrderPair, "need lambda < lambda'");
    require_positive_x(x);
    if (!(t >= 0.0)) throw Error(ErrorKind::InvalidInput, "t must be >= 0");
    const double y = x + t;
    const double alpha = lp - l;

    // integrand without the (1-s)^(alpha-1) factor contributed by u^(alpha-1)
    auto regular = [&](double s) {
        const double u = y * (1.0 - s) / s;
        return std::pow(y, alpha - 1.0) * std::pow(s, 1.0 - alpha) * std::pow(y + u, -lp) * y / (s * s);
    };
    auto full = [&](double s) { return regular(s) * std::pow(1.0 - s, alpha - 1.0); };

    constexpr unsigned depth = 20;
    constexpr double tol = 1e-14;
    double err_lo = 0.0, err_hi = 0.0, lower = 0.0, upper = 0.0;
    if (l < 1.0) {
        auto g = [&](double w) {
            const double s = std::pow(w, 1.0 / l);
            return full(s) * std::pow(w, 1.0 / l - 1.0) / l;
        };
        lower = gauss_kronrod<double, 31>::integrate(g, 0.0, std::pow(0.5, l), depth, tol, &err_lo);
    } else {
        lower = gauss_kronrod<double, 31>::integrate(full, 0.0, 0.5, depth, tol, &err_lo);
    }
    if (alpha < 1.0) {
        // (1-s)^(alpha-1) times the Jacobian (1/alpha)(1-s)^(1-alpha) is exactly 1/alpha
        auto g = [&](double v) { return regular(1.0 - std::pow(v, 1.0 / alpha)) / alpha; };
        upper = gauss_kronrod<double, 31>::integrate(g, 0.0, std::pow(0.5, alpha), depth, tol, &err_hi);
    } else {
        upper = gauss_kronrod<double, 31>::integrate(full, 0.5, 1.0, depth, tol, &err_hi);
    }
    const double coef = std::exp(std::lgamma(lp) - std::lgamma(l) - std::lgamma(alpha));
    EmbeddingResidual r;
    r.integral = coef * (lower + upper);
    r.target = std::pow(y, -l);
    r.residual = r.integral - r.target;
    r.error_estimate = coef * (err_lo + err_hi);
    return r;
}

template <class Real>
struct LimitRow {
    double lambda = 0.0;
    Real scaled{};     // F^[lambda]_{n,k}(x) / lambda^k
    Real large_gap{};  // scaled - (-1)^n f^(n)(x)
    Real f01{};        // F^[lambda]_{0,1}(x)
    Real f01_gap{};    // f01 - x f'(x)
    Real f10{};        // F^[lambda]_{1,0}(x)
    Real f10_gap{};    // f10 + f'(x)
};

template <class Real>
struct LimitReport {
    double x = 0.0;
    int n = 0;
    int k = 0;
    Real large_target{}; // (-1)^n f^(n)(x)
    Real f01_target{};   // x f'(x)
    Real f10_target{};   // -f'(x)
    std::vector<LimitRow<Real>> rows;
};

/// Tabulates F^[lambda]_{n,k}(x)/lambda^k against its lambda -> inf limit and
/// F_{0,1}, F_{1,0} against their lambda -> 0 limits, one row per lambda.
template <class Real>
LimitReport<Real> limit_checks(const FunctionSpec& fn, const Real& x, int n, int k, const std::vector<double>& lambdas) {
    using std::pow;
    require_positive_x(x);
    const auto jet = derivatives(fn, x, std::max(n + k, 1));
    LimitReport<Real> rep;
    rep.x = to_double(x);
    rep.n = n;
    rep.k = k;
    rep.large_target = n % 2 == 1 ? -jet.derivs[n] : jet.derivs[n];
    rep.f01_target = x * jet.derivs[1];
    rep.f10_target = -jet.derivs[1];
    for (double lam : lambdas) {
        const LambdaOrder order(lam);
        LimitRow<Real> row;
        row.lambda = lam;
        row.scaled = f_nk_sum(jet, order, n, k).value / pow(Real(lam), k);
        row.large_gap = row.scaled - rep.large_target;
        row.f01 = f_nk_sum(jet, order, 0, 1).value;
        row.f01_gap = row.f01 - rep.f01_target;
        row.f10 = f_nk_sum(jet, order, 1, 0).value;
        row.f10_gap = row.f10 - rep.f10_target;
        rep.rows.push_back(row);
    }
    return rep;
}

struct KernelLimit {
    double value = 0.0;  // (lambda t)^lambda / (x + lambda t)^lambda
    double target = 0.0; // exp(-x/t)
    double gap = 0.0;    // value - target
};

/// The scaled kernel against its lambda -> inf limit exp(-x/t). x = 0 is accepted.
inline KernelLimit exp_kernel_limit(double x, double t, double lambda) {
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidInput, "t must be > 0");
    if (!(x >= 0.0)) throw Error(ErrorKind::NonPositiveX, "x must be >= 0");
    if (!(lambda > 0.0)) throw Error(ErrorKind::BadLambda, "lambda must be > 0");
    KernelLimit k;
    k.value = std::exp(-lambda * std::log1p(x / (lambda * t)));
    k.target = std::exp(-x / t);
    k.gap = k.value - k.target;
    return k;
}

/// Rectangle of sample points with real part in [re_lo, re_hi] and imaginary
/// part in [im_lo, im_hi], im_lo > 0.
inline std::vector<std::complex<double>> upper_half_plane_grid(double re_lo, double re_hi, double im_lo, double im_hi,
                                                               int n_re, int n_im) {
    if (!(im_lo > 0.0) || !(im_hi >= im_lo) || !(re_hi >= re_lo) || n_re < 1 || n_im < 1)
        throw Error(ErrorKind::InvalidInput, "grid must lie in the open upper half-plane");
    std::vector<std::complex<double>> pts;
    pts.reserve(static_cast<std::size_t>(n_re) * n_im);
    for (int i = 0; i < n_re; ++i) {
        const double re = n_re == 1 ? re_lo : re_lo + (re_hi - re_lo) * i / (n_re - 1);
        for (int j = 0; j < n_im; ++j) {
            const double im = n_im == 1 ? im_lo : im_lo + (im_hi - im_lo) * j / (n_im - 1);
            pts.emplace_back(re, im);
        }
    }
    return pts;
}

struct PickViolation {
    std::complex<double> z;
    double value = 0.0; // Im f(z), or f(x) on the real ray
};

struct PickReport {
    std::string function;
    Verdict verdict = Verdict::consistent;
    double max_imag = -std::numeric_limits<double>::infinity();
    std::vector<PickViolation> imag_violations;
    std::vector<PickViolation> real_violations;
};

/// Im f(z) <= tol at every sampled z with Im z > 0, and f(x) >= -tol on the sampled real ray.
inline PickReport pick_property_check(const FunctionSpec& fn, const std::vector<std::complex<double>>& upper,
                                      const std::vector<double>& real_ray, double tol = 1e-12) {
    PickReport r;
    r.function = fn.label();
    for (const auto& z : upper) {
        if (!(z.imag() > 0.0)) throw Error(ErrorKind::InvalidInput, "sample point not in the upper half-plane");
        const double im = eval_complex(fn, z).imag();
        r.max_imag = std::max(r.max_imag, im);
        if (im > tol) r.imag_violations.push_back({z, im});
    }
    for (double x : real_ray) {
        const double v = eval_complex(fn, {x, 0.0}).real();
        if (v < -tol) r.real_violations.push_back({{x, 0.0}, v});
    }
    if (!r.imag_violations.empty() || !r.real_violations.empty()) r.verdict = Verdict::violated;
    return r;
}

} // namespace stieltjes
