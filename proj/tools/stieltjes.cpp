// stieltjes: command-line front end for classifying functions against the
// generalized Stieltjes classes and recovering their representing measures.
//
// Exit codes: 0 consistent / success, 1 violation certificate or not
// completely monotone, 2 input or domain error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stieltjes/stieltjes.hpp"

namespace {

using namespace stieltjes;

constexpr int exit_ok = 0;
constexpr int exit_violation = 1;
constexpr int exit_input = 2;

struct RunConfig {
    std::string command;
    std::string expr;
    std::string measure_path;
    std::optional<double> measure_lambda;
    double lambda = 1.0;
    double lambda_prime = 0.0;
    double x = 1.0;
    std::optional<double> x2;
    int K = 64;
    std::optional<int> n_max;
    std::optional<int> k_max;
    int n = 0;
    int k = 1;
    std::string lambdas = "10,100,1000,10000";
    std::string grid;
    std::string precision;
    std::optional<double> tol;
    std::string check = "b";
    std::string out;
    std::string format = "json";
    bool lambda_given = false;
};

std::optional<Precision> parse_precision(const std::string& s) {
    if (s.empty()) return std::nullopt;
    if (s == "f64") return Precision::f64;
    if (s == "extended") return Precision::extended;
    throw Error(ErrorKind::InvalidInput, "precision must be 'f64' or 'extended', got '" + s + "'");
}

/// --precision wins, then STIELTJES_PRECISION, then the per-command default.
std::optional<Precision> requested_precision(const RunConfig& cfg) {
    if (auto p = parse_precision(cfg.precision)) return p;
    if (const char* env = std::getenv("STIELTJES_PRECISION"); env && *env) return parse_precision(env);
    return std::nullopt;
}

LogGrid parse_grid(const std::string& s, LogGrid fallback) {
    if (s.empty()) return fallback;
    LogGrid g;
    char c1 = 0, c2 = 0;
    std::istringstream in(s);
    if (!(in >> g.lo >> c1 >> g.hi >> c2 >> g.count) || c1 != ':' || c2 != ':' || !in.eof())
        throw Error(ErrorKind::InvalidInput, "grid must look like lo:hi:count, got '" + s + "'");
    g.check();
    return g;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw Error(ErrorKind::InvalidInput, "bad number '" + item + "' in list");
        }
    }
    if (out.empty()) throw Error(ErrorKind::InvalidInput, "empty list");
    return out;
}

FunctionSpec load_function_spec(const RunConfig& cfg) {
    if (cfg.expr.empty() == cfg.measure_path.empty())
        throw Error(ErrorKind::InvalidInput, "give exactly one of --expr or --measure");
    if (!cfg.expr.empty()) return FunctionSpec::from_expression(cfg.expr);
    const auto j = parse_json_text(read_file(cfg.measure_path));
    auto fn = function_from_json(j, LambdaOrder(cfg.measure_lambda.value_or(cfg.lambda)));
    if (!j.contains("expr")) fn.with_label("measure:" + cfg.measure_path);
    return fn;
}

/// Without --lambda, a measure-backed input is checked at its own order.
FunctionSpec load_function(RunConfig& cfg) {
    auto fn = load_function_spec(cfg);
    if (!cfg.lambda_given && fn.is_measure()) cfg.lambda = fn.measure().order.value();
    return fn;
}

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidInput, "cannot write '" + cfg.out + "'");
    f << text;
}

void emit_companion(const RunConfig& cfg, const std::string& suffix, const std::string& text) {
    if (cfg.out.empty()) return;
    std::string path = cfg.out;
    if (const auto dot = path.rfind(".csv"); dot != std::string::npos && dot + 4 == path.size()) path.resize(dot);
    std::ofstream f(path + suffix, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidInput, "cannot write '" + path + suffix + "'");
    f << text;
}

template <class Real>
int classify_with(const RunConfig& cfg, const FunctionSpec& fn, Precision precision, int n_max, int k_max) {
    const LogGrid grid = parse_grid(cfg.grid, LogGrid{});
    ClassificationReport<Real> report;
    if (cfg.check == "b") {
        const double tol = cfg.tol.value_or(to_double(default_rel_tol<Real>()));
        report = check_condition_b<Real>(fn, LambdaOrder(cfg.lambda), grid, n_max, k_max, tol);
    } else if (cfg.check == "c") {
        const double tol = cfg.tol.value_or(to_double(default_rel_tol<Real>()));
        report = check_condition_c<Real>(fn, grid, k_max, tol);
    } else {
        report = check_cm<Real>(fn, grid, n_max, cfg.tol.value_or(0.0));
    }
    emit(cfg, cfg.format == "csv" ? to_csv(report) : to_json(report, precision));
    return report.verdict == Verdict::violated ? exit_violation : exit_ok;
}

std::string pick_json(const PickReport& r) {
    JsonWriter w;
    w.begin_object();
    w.key("function").string(r.function);
    w.key("check").string("pick");
    w.key("verdict").string(to_string(r.verdict));
    w.key("evidence").string(r.verdict == Verdict::violated ? "certificate of non-membership"
                                                            : "grid-limited evidence");
    w.key("max_imag").number(r.max_imag);
    w.key("violations").begin_array();
    for (const auto& v : r.imag_violations) {
        w.begin_object(true);
        w.key("re").number(v.z.real()).key("im").number(v.z.imag()).key("imag_f").number(v.value);
        w.end_object();
    }
    w.end_array();
    w.key("real_violations").begin_array();
    for (const auto& v : r.real_violations) {
        w.begin_object(true);
        w.key("x").number(v.z.real()).key("f").number(v.value);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

int run_classify(RunConfig cfg) {
    const auto fn = load_function(cfg);
    if (cfg.check == "pick") {
        const auto upper = upper_half_plane_grid(-5.0, 5.0, 0.1, 5.0, 20, 20);
        const auto report = pick_property_check(fn, upper, parse_grid(cfg.grid, LogGrid{}).points(), cfg.tol.value_or(1e-12));
        emit(cfg, pick_json(report));
        return report.verdict == Verdict::violated ? exit_violation : exit_ok;
    }
    if (cfg.check != "b" && cfg.check != "c" && cfg.check != "cm")
        throw Error(ErrorKind::InvalidInput, "--check must be one of b, c, cm, pick");
    const auto requested = requested_precision(cfg);
    const int default_size = requested == Precision::extended ? 16 : 8;
    const int n_max = cfg.n_max.value_or(default_size);
    const int k_max = cfg.k_max.value_or(default_size);
    const int order = cfg.check == "b" ? n_max + k_max : cfg.check == "c" ? 2 * k_max - 1 : n_max;
    const auto precision = table_precision(requested, order);
    if (precision == Precision::extended) return classify_with<extended>(cfg, fn, precision, n_max, k_max);
    return classify_with<double>(cfg, fn, precision, n_max, k_max);
}

template <class Real>
std::string consistency_json(const ConsistencyReport<Real>& r, Precision precision) {
    JsonWriter w;
    w.begin_object();
    w.key("sup_discrepancy").number(r.sup_discrepancy);
    w.key("constant_gap").number(r.constant_gap);
    w.key("sup_error_first").number(r.first.diagnostics.sup_error);
    w.key("sup_error_second").number(r.second.diagnostics.sup_error);
    w.key("precision").string(to_string(precision));
    w.end_object();
    std::string head = w.str();
    return head + to_json(r.first, precision) + to_json(r.second, precision);
}

template <class Real>
int recover_with(const RunConfig& cfg, const FunctionSpec& fn, Precision precision) {
    RecoveryOptions opts;
    opts.grid = parse_grid(cfg.grid, opts.grid);
    opts.rel_tol = cfg.tol;
    const LambdaOrder lambda(cfg.lambda);
    if (cfg.x2) {
        const auto rep = base_point_consistency<Real>(fn, lambda, Real(cfg.x), Real(*cfg.x2), cfg.K, opts);
        emit(cfg, consistency_json(rep, precision));
        return exit_ok;
    }
    const auto rec = recover_measure<Real>(fn, lambda, Real(cfg.x), cfg.K, opts);
    if (cfg.format == "csv") {
        std::string out = "t,w\n";
        for (const auto& a : rec.rho_atoms) out += format_real(a.t) + "," + format_real(a.w) + "\n";
        emit(cfg, out);
    } else {
        emit(cfg, to_json(rec, precision));
    }
    return exit_ok;
}

int run_recover(RunConfig cfg) {
    const auto fn = load_function(cfg);
    const auto precision = recovery_precision(requested_precision(cfg), cfg.K);
    try {
        if (precision == Precision::extended) return recover_with<extended>(cfg, fn, precision);
        return recover_with<double>(cfg, fn, precision);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotCompletelyMonotone) throw;
        std::cerr << "stieltjes: " << e.what() << "\n";
        JsonWriter w;
        w.begin_object();
        w.key("error").string(to_string(e.kind()));
        w.key("message").string(e.what());
        w.key("x").number(cfg.x);
        w.key("lambda").number(cfg.lambda);
        w.key("K").integer(cfg.K);
        w.end_object();
        emit(cfg, w.str());
        return exit_violation;
    }
}

template <class Real>
int table_with(const RunConfig& cfg, const FunctionSpec& fn, Precision precision, int n_max, int k_max) {
    const auto t = f_table<Real>(fn, LambdaOrder(cfg.lambda), Real(cfg.x), n_max, k_max);
    if (cfg.format == "csv") {
        emit(cfg, table_csv(t.values, k_max));
        emit_companion(cfg, ".scales.csv", table_csv(t.scales, k_max));
    } else {
        emit(cfg, to_json(t, precision));
    }
    return exit_ok;
}

int run_table(RunConfig cfg) {
    const auto fn = load_function(cfg);
    const auto requested = requested_precision(cfg);
    const int default_size = requested == Precision::extended ? 16 : 8;
    const int n_max = cfg.n_max.value_or(default_size);
    const int k_max = cfg.k_max.value_or(default_size);
    const auto precision = table_precision(requested, n_max + k_max);
    if (precision == Precision::extended) return table_with<extended>(cfg, fn, precision, n_max, k_max);
    return table_with<double>(cfg, fn, precision, n_max, k_max);
}

template <class Real>
int moments_with(const RunConfig& cfg, const FunctionSpec& fn, Precision precision) {
    const auto c = moment_sequence_at<Real>(fn, LambdaOrder(cfg.lambda), Real(cfg.x), cfg.K);
    const Real rel = cfg.tol ? Real(*cfg.tol) : default_rel_tol<Real>();
    const auto verdict = is_cm_sequence(c.view(), CmTolerance<Real>{Real(0), rel});
    if (cfg.format == "csv") {
        std::string out = "n,c\n";
        for (std::size_t n = 0; n < c.entries.size(); ++n) out += std::to_string(n) + "," + format_real(c.entries[n]) + "\n";
        emit(cfg, out);
    } else {
        JsonWriter w;
        w.begin_object();
        w.key("x").number(cfg.x);
        w.key("lambda").number(cfg.lambda);
        w.key("N").integer(cfg.K);
        w.key("precision").string(to_string(precision));
        w.key("moments").numbers(c.entries);
        w.key("completely_monotone").boolean(verdict.completely_monotone);
        if (verdict.first_violation) {
            w.key("first_violation").begin_object(true);
            w.key("n").integer(verdict.first_violation->n);
            w.key("k").integer(verdict.first_violation->k);
            w.key("value").number(verdict.first_violation->value);
            w.end_object();
        }
        w.end_object();
        emit(cfg, w.str());
    }
    return verdict.completely_monotone ? exit_ok : exit_violation;
}

int run_moments(RunConfig cfg) {
    const auto fn = load_function(cfg);
    const auto precision = recovery_precision(requested_precision(cfg), cfg.K);
    if (precision == Precision::extended) return moments_with<extended>(cfg, fn, precision);
    return moments_with<double>(cfg, fn, precision);
}

template <class Real>
int limits_with(const RunConfig& cfg, const FunctionSpec& fn, Precision precision) {
    const auto rep = limit_checks<Real>(fn, Real(cfg.x), cfg.n, cfg.k, parse_list(cfg.lambdas));
    if (cfg.format == "csv") {
        std::string out = "lambda,scaled,large_gap,f01,f01_gap,f10,f10_gap\n";
        for (const auto& r : rep.rows)
            out += format_real(r.lambda) + "," + format_real(r.scaled) + "," + format_real(r.large_gap) + "," +
                   format_real(r.f01) + "," + format_real(r.f01_gap) + "," + format_real(r.f10) + "," +
                   format_real(r.f10_gap) + "\n";
        emit(cfg, out);
        return exit_ok;
    }
    JsonWriter w;
    w.begin_object();
    w.key("x").number(rep.x);
    w.key("n").integer(rep.n);
    w.key("k").integer(rep.k);
    w.key("precision").string(to_string(precision));
    w.key("large_lambda_target").number(rep.large_target);
    w.key("f01_small_lambda_target").number(rep.f01_target);
    w.key("f10_small_lambda_target").number(rep.f10_target);
    w.key("rows").begin_array();
    for (const auto& r : rep.rows) {
        w.begin_object(true);
        w.key("lambda").number(r.lambda);
        w.key("scaled").number(r.scaled).key("large_gap").number(r.large_gap);
        w.key("f01").number(r.f01).key("f01_gap").number(r.f01_gap);
        w.key("f10").number(r.f10).key("f10_gap").number(r.f10_gap);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    emit(cfg, w.str());
    return exit_ok;
}

int run_limits(RunConfig cfg) {
    const auto fn = load_function(cfg);
    const auto precision = requested_precision(cfg).value_or(Precision::extended);
    if (precision == Precision::extended) return limits_with<extended>(cfg, fn, precision);
    return limits_with<double>(cfg, fn, precision);
}

int run_verify_kernel(const RunConfig& cfg) {
    std::vector<std::pair<double, double>> pairs{{0.5, 1.5}, {1.0, 2.0}};
    if (cfg.lambda_prime > 0.0) pairs = {{cfg.lambda, cfg.lambda_prime}};
    const double tol = cfg.tol.value_or(1e-10);
    bool ok = true;
    JsonWriter w;
    w.begin_object();
    w.key("tolerance").number(tol);
    w.key("rows").begin_array();
    for (const auto& [l, lp] : pairs)
        for (double x : {0.1, 1.0, 10.0})
            for (double t : {0.0, 1.0, 5.0}) {
                const auto r = kernel_embedding_residual(LambdaOrder(l), LambdaOrder(lp), x, t);
                ok = ok && std::abs(r.residual) <= tol;
                w.begin_object(true);
                w.key("lambda").number(l).key("lambda_prime").number(lp).key("x").number(x).key("t").number(t);
                w.key("integral").number(r.integral).key("target").number(r.target).key("residual").number(r.residual);
                w.end_object();
            }
    w.end_array();
    w.key("pass").boolean(ok);
    w.end_object();
    emit(cfg, w.str());
    return ok ? exit_ok : exit_violation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Classify functions against generalized Stieltjes classes and recover representing measures"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_function = [&](CLI::App* sub) {
        sub->add_option("--expr", cfg.expr, "function of x, e.g. \"exp(-x)\"");
        sub->add_option("--measure", cfg.measure_path, "JSON file with {C, atoms, pieces} or a function spec");
        sub->add_option("--measure-lambda", cfg.measure_lambda, "order of the measure representation (default: --lambda)");
        sub->add_option("--lambda", cfg.lambda, "order lambda > 0");
    };
    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--out", cfg.out, "output path (default: stdout)");
        sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--precision", cfg.precision, "f64 or extended")->check(CLI::IsMember({"f64", "extended"}));
        sub->add_option("--tol", cfg.tol, "override the default tolerance");
    };

    auto* classify = app.add_subcommand("classify", "sign checks on the full F table (b), its diagonal family (c), derivatives (cm) or the upper half-plane (pick)");
    add_function(classify);
    add_output(classify);
    classify->add_option("--grid", cfg.grid, "lo:hi:count log grid (default 1e-3:1e3:61)");
    classify->add_option("--nmax", cfg.n_max);
    classify->add_option("--kmax", cfg.k_max);
    classify->add_option("--check", cfg.check, "b, c, cm or pick")->check(CLI::IsMember({"b", "c", "cm", "pick"}));

    auto* recover = app.add_subcommand("recover", "reconstruct (C, rho) from the moment sequence at x");
    add_function(recover);
    add_output(recover);
    recover->add_option("--x", cfg.x, "base point");
    recover->add_option("--x2", cfg.x2, "second base point for a consistency report");
    recover->add_option("--K", cfg.K, "reconstruction depth");
    recover->add_option("--grid", cfg.grid, "lo:hi:count grid for the re-evaluation error (default 0.5:5:50)");

    auto* table = app.add_subcommand("table", "dump the F table at one point");
    add_function(table);
    add_output(table);
    table->add_option("--x", cfg.x);
    table->add_option("--nmax", cfg.n_max);
    table->add_option("--kmax", cfg.k_max);

    auto* moments = app.add_subcommand("moments", "dump the moment sequence at x");
    add_function(moments);
    add_output(moments);
    moments->add_option("--x", cfg.x);
    moments->add_option("--K", cfg.K, "last moment index");

    auto* limits = app.add_subcommand("limits", "large- and small-lambda limits of F");
    add_function(limits);
    add_output(limits);
    limits->add_option("--x", cfg.x);
    limits->add_option("--n", cfg.n);
    limits->add_option("--k", cfg.k);
    limits->add_option("--lambdas", cfg.lambdas, "comma-separated lambda values");

    auto* verify = app.add_subcommand("verify-kernel", "residual sweep of the order-embedding integral");
    add_output(verify);
    verify->add_option("--lambda", cfg.lambda);
    verify->add_option("--lambda-prime", cfg.lambda_prime);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_input;
    }

    for (auto* sub : {classify, recover, table, moments, limits})
        if (sub->parsed()) cfg.lambda_given = sub->get_option("--lambda")->count() > 0;

    try {
        if (classify->parsed()) return run_classify(cfg);
        if (recover->parsed()) return run_recover(cfg);
        if (table->parsed()) return run_table(cfg);
        if (moments->parsed()) return run_moments(cfg);
        if (limits->parsed()) return run_limits(cfg);
        if (verify->parsed()) return run_verify_kernel(cfg);
    } catch (const Error& e) {
        std::cerr << "stieltjes: " << e.what() << "\n";
        return exit_input;
    } catch (const std::exception& e) {
        std::cerr << "stieltjes: " << e.what() << "\n";
        return exit_input;
    }
    return exit_input;
}
