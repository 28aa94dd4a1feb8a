#pragma once

#include <array>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "classify.hpp"
#include "function.hpp"
#include "hausdorff.hpp"
#include "measure.hpp"
#include "operators.hpp"

namespace stieltjes {

// ---------------------------------------------------------------------------
// Input: MeasureSpec and FunctionSpec JSON
// ---------------------------------------------------------------------------

namespace detail {

inline double json_number(const nlohmann::json& j, const char* what) {
    if (!j.is_number()) throw Error(ErrorKind::InvalidInput, std::string(what) + " must be a number");
    return j.get<double>();
}

template <std::size_t Arity>
std::vector<std::array<double, Arity>> json_tuples(const nlohmann::json& j, const char* what) {
    if (!j.is_array()) throw Error(ErrorKind::InvalidInput, std::string(what) + " must be an array");
    std::vector<std::array<double, Arity>> out;
    for (const auto& item : j) {
        if (!item.is_array() || item.size() != Arity)
            throw Error(ErrorKind::InvalidInput,
                        std::string(what) + " entries must be arrays of " + std::to_string(Arity) + " numbers");
        std::array<double, Arity> t{};
        for (std::size_t i = 0; i < Arity; ++i) t[i] = json_number(item[i], what);
        out.push_back(t);
    }
    return out;
}

} // namespace detail

/// {"C": number, "atoms": [[t, w], ...], "pieces": [[a, b, h], ...]}, every field optional.
inline MeasureSpec measure_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorKind::InvalidInput, "measure must be a JSON object");
    MeasureDescription raw;
    for (const auto& [key, val] : j.items()) {
        if (key == "C")
            raw.C = detail::json_number(val, "C");
        else if (key == "atoms")
            for (const auto& a : detail::json_tuples<2>(val, "atoms")) raw.atoms.push_back({a[0], a[1]});
        else if (key == "pieces")
            for (const auto& p : detail::json_tuples<3>(val, "pieces")) raw.pieces.push_back({p[0], p[1], p[2]});
        else if (key != "lambda")
            throw Error(ErrorKind::InvalidInput, "unknown measure field '" + key + "'");
    }
    return validate(std::move(raw));
}

inline nlohmann::json parse_json_text(std::string_view text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::InvalidInput, std::string("malformed JSON: ") + e.what());
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// {"expr": "exp(-x)"} or {"measure": {...}, "lambda": 1.0}. A bare measure
/// object is accepted too and takes `default_order`.
inline FunctionSpec function_from_json(const nlohmann::json& j, std::optional<LambdaOrder> default_order = std::nullopt) {
    if (!j.is_object()) throw Error(ErrorKind::InvalidInput, "function spec must be a JSON object");
    if (j.contains("expr")) {
        if (!j["expr"].is_string()) throw Error(ErrorKind::InvalidInput, "\"expr\" must be a string");
        return FunctionSpec::from_expression(j["expr"].get<std::string>());
    }
    const bool wrapped = j.contains("measure");
    const auto m = measure_from_json(wrapped ? j["measure"] : j);
    std::optional<LambdaOrder> order = default_order;
    if (j.contains("lambda")) order = LambdaOrder(detail::json_number(j["lambda"], "lambda"));
    if (!order) throw Error(ErrorKind::InvalidInput, "measure-backed function needs \"lambda\"");
    return FunctionSpec(m, *order);
}

// ---------------------------------------------------------------------------
// Output: deterministic JSON and CSV
// ---------------------------------------------------------------------------

/// Streaming JSON emitter with fixed layout and number formatting, so that
/// identical runs produce byte-identical files.
class JsonWriter {
public:
    JsonWriter& begin_object(bool inline_items = false) { return open('{', inline_items); }
    JsonWriter& end_object() { return close('}'); }
    JsonWriter& begin_array(bool inline_items = false) { return open('[', inline_items); }
    JsonWriter& end_array() { return close(']'); }

    JsonWriter& key(std::string_view k) {
        separator();
        out_ += nlohmann::json(std::string(k)).dump();
        out_ += ": ";
        pending_key_ = true;
        return *this;
    }

    JsonWriter& string(std::string_view s) { return raw(nlohmann::json(std::string(s)).dump()); }
    JsonWriter& integer(long long v) { return raw(std::to_string(v)); }
    JsonWriter& boolean(bool v) { return raw(v ? "true" : "false"); }
    JsonWriter& null() { return raw("null"); }

    template <class Real>
    JsonWriter& number(const Real& v) {
        if (!is_finite(v)) return raw(nlohmann::json(format_real(v)).dump());
        return raw(format_real(v));
    }

    template <class Real>
    JsonWriter& numbers(const std::vector<Real>& vs) {
        begin_array(true);
        for (const auto& v : vs) number(v);
        return end_array();
    }

    std::string str() const { return out_ + "\n"; }

private:
    struct Level {
        bool first = true;
        bool inline_items = false;
    };

    JsonWriter& raw(std::string_view text) {
        separator();
        out_ += text;
        return *this;
    }

    void separator() {
        if (pending_key_) {
            pending_key_ = false;
            return;
        }
        if (stack_.empty()) return;
        auto& top = stack_.back();
        if (!top.first) out_ += top.inline_items ? ", " : ",";
        if (!top.inline_items) {
            out_ += '\n';
            out_.append(2 * stack_.size(), ' ');
        }
        top.first = false;
    }

    JsonWriter& open(char c, bool inline_items = false) {
        separator();
        out_ += c;
        stack_.push_back({true, inline_items || (!stack_.empty() && stack_.back().inline_items)});
        return *this;
    }

    JsonWriter& close(char c) {
        const Level top = stack_.back();
        stack_.pop_back();
        if (!top.first && !top.inline_items) {
            out_ += '\n';
            out_.append(2 * stack_.size(), ' ');
        }
        out_ += c;
        return *this;
    }

    std::string out_;
    std::vector<Level> stack_;
    bool pending_key_ = false;
};

template <class Real>
std::string to_json(const ClassificationReport<Real>& r, Precision precision) {
    JsonWriter w;
    w.begin_object();
    w.key("function").string(r.function);
    w.key("check").string(r.check);
    w.key("verdict").string(to_string(r.verdict));
    w.key("evidence").string(r.evidence());
    w.key("parameters").begin_object();
    if (r.lambda)
        w.key("lambda").number(*r.lambda);
    else
        w.key("lambda").null();
    w.key("n_max").integer(r.n_max);
    w.key("k_max").integer(r.k_max);
    w.key("tol").number(r.tol);
    w.key("precision").string(to_string(precision));
    w.end_object();
    w.key("grid").begin_object();
    w.key("lo").number(r.grid.lo);
    w.key("hi").number(r.grid.hi);
    w.key("count").integer(r.grid.count);
    w.end_object();
    w.key("min_normalized").number(r.min_normalized);
    w.key("violation_count").integer(static_cast<long long>(r.violations.size()));
    w.key("violations").begin_array();
    for (const auto& v : r.violations) {
        w.begin_object(true);
        w.key("x").number(v.x);
        w.key("n").integer(v.n);
        w.key("k").integer(v.k);
        w.key("value").number(v.value);
        w.key("scale").number(v.scale);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

/// One row per grid point: x and the smallest value/scale seen there.
template <class Real>
std::string to_csv(const ClassificationReport<Real>& r) {
    std::string out = "x,min_normalized\n";
    for (const auto& [x, m] : r.min_normalized_per_point) out += format_real(x) + "," + format_real(m) + "\n";
    return out;
}

template <class Real>
std::string to_json(const FTable<Real>& t, Precision precision) {
    JsonWriter w;
    w.begin_object();
    w.key("x").number(t.x);
    w.key("lambda").number(t.lambda);
    w.key("n_max").integer(t.n_max);
    w.key("k_max").integer(t.k_max);
    w.key("precision").string(to_string(precision));
    w.key("crosscheck_deviation").number(t.crosscheck_deviation);
    w.key("values").begin_array();
    for (const auto& row : t.values) w.numbers(row);
    w.end_array();
    w.key("scales").begin_array();
    for (const auto& row : t.scales) w.numbers(row);
    w.end_array();
    w.end_object();
    return w.str();
}

/// Header k=0..k_max, one row per n, values only.
template <class Real>
std::string table_csv(const std::vector<std::vector<Real>>& rows, int k_max) {
    std::string out;
    for (int k = 0; k <= k_max; ++k) out += (k ? ",k=" : "k=") + std::to_string(k);
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + format_real(row[k]);
        out += '\n';
    }
    return out;
}

template <class Real>
std::string to_json(const RecoveredMeasure<Real>& r, Precision precision) {
    JsonWriter w;
    w.begin_object();
    w.key("x").number(r.x);
    w.key("lambda").number(r.lambda);
    w.key("K").integer(r.K);
    w.key("precision").string(to_string(precision));
    w.key("C").number(r.C_hat);
    w.key("atoms").begin_array();
    for (const auto& a : r.rho_atoms) {
        w.begin_array(true);
        w.number(a.t).number(a.w);
        w.end_array();
    }
    w.end_array();
    w.key("diagnostics").begin_object();
    w.key("moment_residuals").numbers(r.diagnostics.moment_residuals);
    w.key("sup_error").number(r.diagnostics.sup_error);
    w.key("clamped_masses").integer(r.diagnostics.clamped_masses);
    w.key("grid").string(r.diagnostics.grid.describe());
    w.end_object();
    w.end_object();
    return w.str();
}

} // namespace stieltjes
