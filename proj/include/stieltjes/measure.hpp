#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "error.hpp"
#include "real.hpp"

namespace stieltjes {

/// Point mass `w` at location `t`.
struct Atom {
    double t = 0.0;
    double w = 0.0;
};

/// Constant density `h` on [a, b]. Richer densities are modelled by
/// refining into several pieces.
struct Piece {
    double a = 0.0;
    double b = 0.0;
    double h = 0.0;
};

/// Unchecked input for `validate`.
struct MeasureDescription {
    double C = 0.0;
    std::vector<Atom> atoms;
    std::vector<Piece> pieces;
};

class MeasureSpec;
inline MeasureSpec validate(MeasureDescription raw);

/// A constant C >= 0 together with a nonnegative measure rho on [0, inf),
/// made of atoms plus non-overlapping constant-density pieces. Only
/// obtainable through `validate`, so every instance satisfies the invariants.
class MeasureSpec {
public:
    MeasureSpec() = default;

    double constant() const noexcept { return C_; }
    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    const std::vector<Piece>& pieces() const noexcept { return pieces_; }

    /// True when rho = 0 (only the constant remains).
    bool measure_is_zero() const noexcept {
        return std::none_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.w > 0; }) &&
               std::none_of(pieces_.begin(), pieces_.end(), [](const Piece& p) { return p.h > 0; });
    }

    friend MeasureSpec validate(MeasureDescription raw);

private:
    double C_ = 0.0;
    std::vector<Atom> atoms_;
    std::vector<Piece> pieces_;
};

inline MeasureSpec validate(MeasureDescription raw) {
    auto bad = [](double v) { return !std::isfinite(v); };
    if (bad(raw.C) || raw.C < 0) throw Error(ErrorKind::NegativeMass, "constant C must be finite and >= 0");
    for (const auto& a : raw.atoms) {
        if (bad(a.w) || a.w < 0) throw Error(ErrorKind::NegativeMass, "atom mass must be finite and >= 0");
        if (bad(a.t) || a.t < 0) throw Error(ErrorKind::InvalidInput, "atom location must be finite and >= 0");
    }
    for (const auto& p : raw.pieces) {
        if (bad(p.h) || p.h < 0) throw Error(ErrorKind::NegativeMass, "piece density must be finite and >= 0");
        if (bad(p.a) || bad(p.b) || p.a < 0 || !(p.a < p.b))
            throw Error(ErrorKind::BadInterval, "piece needs 0 <= a < b");
    }
    std::sort(raw.atoms.begin(), raw.atoms.end(), [](const Atom& l, const Atom& r) { return l.t < r.t; });
    std::sort(raw.pieces.begin(), raw.pieces.end(), [](const Piece& l, const Piece& r) { return l.a < r.a; });
    for (std::size_t j = 1; j < raw.pieces.size(); ++j)
        if (raw.pieces[j].a < raw.pieces[j - 1].b)
            throw Error(ErrorKind::OverlappingPieces,
                        "pieces [" + std::to_string(raw.pieces[j - 1].a) + ", " + std::to_string(raw.pieces[j - 1].b) +
                            "] and [" + std::to_string(raw.pieces[j].a) + ", " + std::to_string(raw.pieces[j].b) +
                            "] overlap");

    MeasureSpec m;
    m.C_ = raw.C;
    m.atoms_ = std::move(raw.atoms);
    m.pieces_ = std::move(raw.pieces);
    return m;
}

/// |s - 1| below this selects the logarithmic antiderivative of u^-s.
inline constexpr double log_branch_threshold = 1e-9;

/// Integral of u^-s over [lo, hi], 0 < lo < hi.
///
/// Written as lo^(1-s) * expm1((1-s) L) / (1-s) with L = ln(hi/lo), which is
/// algebraically the textbook difference of powers but loses no digits when
/// s is close to 1 or hi is close to lo.
template <class Real>
Real power_integral(const Real& lo, const Real& hi, const Real& s) {
    using std::abs;
    using std::pow;
    const Real L = log1p((hi - lo) / lo);
    const Real one_minus_s = Real(1) - s;
    if (abs(one_minus_s) < Real(log_branch_threshold)) return L;
    return pow(lo, one_minus_s) * expm1(one_minus_s * L) / one_minus_s;
}

inline void require_positive_x(double x) {
    if (!(x > 0.0)) throw Error(ErrorKind::NonPositiveX, "x must be > 0, got " + std::to_string(x));
}

template <class Real>
void require_positive_x(const Real& x) {
    if (!(x > Real(0))) throw Error(ErrorKind::NonPositiveX, "x must be > 0, got " + format_real(x));
}

/// Integral of d rho(t) / (x+t)^(n+lambda), in closed form.
template <class Real>
Real kernel_integral(const MeasureSpec& m, const Real& x, LambdaOrder lambda, int n) {
    using std::pow;
    require_positive_x(x);
    const Real s = lambda.as<Real>() + Real(n);
    Real acc(0);
    for (const auto& a : m.atoms()) {
        if (a.w == 0) continue;
        acc += Real(a.w) * pow(x + Real(a.t), -s);
    }
    for (const auto& p : m.pieces()) {
        if (p.h == 0) continue;
        acc += Real(p.h) * power_integral(x + Real(p.a), x + Real(p.b), s);
    }
    return acc;
}

/// f(x), f'(x), ..., f^(N)(x) for f = C + int d rho / (x+t)^lambda:
/// f^(n) = C delta_{n,0} + (-1)^n (lambda)_n int d rho / (x+t)^(n+lambda).
template <class Real>
std::vector<Real> eval_derivs(const MeasureSpec& m, LambdaOrder lambda, const Real& x, int N) {
    require_positive_x(x);
    if (N < 0) throw Error(ErrorKind::InsufficientOrder, "derivative order must be >= 0");
    std::vector<Real> out(static_cast<std::size_t>(N) + 1);
    const Real lam = lambda.as<Real>();
    Real rising(1);
    for (int n = 0; n <= N; ++n) {
        Real v = rising * kernel_integral(m, x, lambda, n);
        if (n % 2 == 1) v = -v;
        if (n == 0) v += Real(m.constant());
        out[n] = v;
        rising *= lam + Real(n);
    }
    return out;
}

/// f(z) = C + int d rho(t) / (z+t)^lambda on the cut plane, principal branch.
inline std::complex<double> eval_complex(const MeasureSpec& m, LambdaOrder lambda, std::complex<double> z) {
    if (z.imag() == 0.0 && z.real() <= 0.0) throw Error(ErrorKind::OnCut, "z lies on the cut (-inf, 0]");
    using cd = std::complex<double>;
    const double lam = lambda.value();
    cd acc(m.constant(), 0.0);
    for (const auto& a : m.atoms()) {
        if (a.w == 0) continue;
        acc += a.w * std::exp(-lam * std::log(z + a.t));
    }
    for (const auto& p : m.pieces()) {
        if (p.h == 0) continue;
        const cd la = std::log(z + p.a);
        const cd lb = std::log(z + p.b);
        if (std::abs(lam - 1.0) < log_branch_threshold)
            acc += p.h * (lb - la);
        else
            acc += p.h * (std::exp((1.0 - lam) * la) - std::exp((1.0 - lam) * lb)) / (lam - 1.0);
    }
    return acc;
}

} // namespace stieltjes
