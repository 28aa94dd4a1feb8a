#pragma once

#include <complex>
#include <string>
#include <variant>

#include "expr.hpp"
#include "jet.hpp"
#include "measure.hpp"

namespace stieltjes {

/// f(x) = C + int d rho(t) / (x+t)^order, evaluated through the closed-form kernels.
struct MeasureFunction {
    MeasureSpec measure;
    LambdaOrder order;
};

/// The object being classified: either measure-backed or a parsed expression.
class FunctionSpec {
public:
    FunctionSpec(MeasureSpec measure, LambdaOrder order)
        : rep_(MeasureFunction{std::move(measure), order}), label_("measure(lambda=" + format_real(order.value()) + ")") {}

    explicit FunctionSpec(Expr expr, std::string label = {})
        : rep_(std::move(expr)), label_(label.empty() ? "expr:" + to_string(std::get<Expr>(rep_)) : "expr:" + label) {}

    static FunctionSpec from_expression(std::string_view src) { return FunctionSpec(parse(src), std::string(src)); }

    bool is_measure() const noexcept { return std::holds_alternative<MeasureFunction>(rep_); }
    const MeasureFunction& measure() const { return std::get<MeasureFunction>(rep_); }
    const Expr& expression() const { return std::get<Expr>(rep_); }

    /// Human-readable identity used in reports.
    const std::string& label() const noexcept { return label_; }

    FunctionSpec& with_label(std::string label) {
        label_ = std::move(label);
        return *this;
    }

private:
    std::variant<MeasureFunction, Expr> rep_;
    std::string label_;
};

template <class Real>
Jet<Real> derivatives(const FunctionSpec& fn, const Real& x, int N) {
    if (fn.is_measure()) {
        const auto& mf = fn.measure();
        return Jet<Real>{x, eval_derivs<Real>(mf.measure, mf.order, x, N)};
    }
    return jet_eval<Real>(fn.expression(), x, N);
}

template <class Real>
Real value(const FunctionSpec& fn, const Real& x) {
    if (fn.is_measure()) {
        const auto& mf = fn.measure();
        return eval_derivs<Real>(mf.measure, mf.order, x, 0)[0];
    }
    return evaluate<Real>(fn.expression(), x);
}

inline std::complex<double> eval_complex(const FunctionSpec& fn, std::complex<double> z) {
    if (fn.is_measure()) return eval_complex(fn.measure().measure, fn.measure().order, z);
    if (z.imag() == 0.0 && z.real() <= 0.0) throw Error(ErrorKind::OnCut, "z lies on the cut (-inf, 0]");
    return evaluate<std::complex<double>>(fn.expression(), z);
}

} // namespace stieltjes
