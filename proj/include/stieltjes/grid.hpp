#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "real.hpp"

namespace stieltjes {

/// `count` logarithmically spaced points on [lo, hi].
struct LogGrid {
    double lo = 1e-3;
    double hi = 1e3;
    int count = 61;

    void check() const {
        if (!(lo > 0.0) || !(hi >= lo) || count < 1 || (count > 1 && !(hi > lo)))
            throw Error(ErrorKind::InvalidInput, "grid needs 0 < lo < hi and count >= 1");
    }

    /// Exponents that land within 1e-12 of an integer are snapped, so decade
    /// points such as x = 1 are hit exactly.
    std::vector<double> points() const {
        check();
        std::vector<double> out;
        out.reserve(count);
        if (count == 1) return {lo};
        const double elo = std::log10(lo), ehi = std::log10(hi);
        for (int i = 0; i < count; ++i) {
            double e = elo + ((ehi - elo) * i) / (count - 1);
            if (std::abs(e - std::round(e)) < 1e-12) e = std::round(e);
            out.push_back(std::pow(10.0, e));
        }
        return out;
    }

    std::string describe() const {
        return "log:" + format_real(lo) + ":" + format_real(hi) + ":" + std::to_string(count);
    }
};

/// Default working precision for F tables: binary64 up to n + k = 10,
/// extended beyond. An explicit request always wins.
inline Precision table_precision(std::optional<Precision> requested, int max_n_plus_k) {
    if (requested) return *requested;
    return max_n_plus_k > 10 ? Precision::extended : Precision::f64;
}

/// Moment reconstruction deeper than K = 20 always runs in extended precision.
inline Precision recovery_precision(std::optional<Precision> requested, int K) {
    if (K > 20) return Precision::extended;
    return requested.value_or(Precision::f64);
}

} // namespace stieltjes
