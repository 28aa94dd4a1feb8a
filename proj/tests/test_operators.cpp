#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"

using namespace stieltjes;

namespace {

const double e1 = std::exp(-1.0);

FunctionSpec expr(const char* src) { return FunctionSpec::from_expression(src); }

FunctionSpec backed(const MeasureSpec& m, double lambda) { return FunctionSpec(m, LambdaOrder(lambda)); }

} // namespace

TEST(GammaRatio, Examples) {
    EXPECT_EQ(gamma_ratio<double>(0, 0, 2, LambdaOrder(1)), 2.0);
    EXPECT_EQ(gamma_ratio<double>(1, 1, 2, LambdaOrder(0.5)), 2.5);
    EXPECT_EQ(gamma_ratio<double>(3, 3, 3, LambdaOrder(0.7)), 1.0);
    EXPECT_THROW(gamma_ratio<double>(0, 3, 2, LambdaOrder(1)), Error);
}

TEST(GammaRatio, MatchesLgamma) {
    for (double lambda : {0.3, 1.0, 2.7})
        for (int n = 0; n < 5; ++n)
            for (int k = 0; k < 8; ++k)
                for (int j = 0; j <= k; ++j) {
                    const double ref = std::exp(std::lgamma(n + k + lambda) - std::lgamma(n + j + lambda));
                    EXPECT_TRUE(oracle::close(gamma_ratio<double>(n, j, k, LambdaOrder(lambda)), ref, 1e-12));
                }
}

TEST(FnkSum, Examples) {
    const auto a = f_nk_sum(derivatives(expr("1/(x+1)"), 1.0, 2), LambdaOrder(1), 1, 1);
    EXPECT_NEAR(a.value, 0.25, 1e-15);
    EXPECT_GE(a.scale, std::abs(a.value));

    for (double x : {0.1, 1.0, 30.0}) {
        const auto c = f_nk_sum(derivatives(expr("2"), x, 3), LambdaOrder(0.5), 0, 3);
        EXPECT_NEAR(c.value, 3.75, 1e-14);
    }

    EXPECT_NEAR(f_nk_sum(derivatives(expr("exp(-x)"), 1.0, 2), LambdaOrder(1), 0, 2).value, -e1, 1e-15);
}

TEST(FnkSum, InsufficientOrder) {
    const auto jet = derivatives(expr("exp(-x)"), 1.0, 2);
    try {
        f_nk_sum(jet, LambdaOrder(1), 1, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InsufficientOrder);
    }
}

TEST(FnkSum, EdgeColumnIsSignedDerivative) {
    const auto jet = derivatives(expr("log(1+1/x)*exp(-x)"), 0.7, 9);
    for (int n = 0; n <= 9; ++n) {
        const auto v = f_nk_sum(jet, LambdaOrder(1.3), n, 0);
        EXPECT_EQ(v.value, n % 2 ? -jet.derivs[n] : jet.derivs[n]);
    }
}

TEST(FnkOperator, Examples) {
    EXPECT_NEAR(f_nk_operator(expr("x^(-0.5)"), LambdaOrder(0.5), 0, 1, 1.0), 0.0, 1e-15);
    EXPECT_NEAR(f_nk_operator(expr("1/(x+1)"), LambdaOrder(1), 1, 1, 1.0), 0.25, 1e-15);
    for (double x : {0.2, 3.0}) EXPECT_EQ(f_nk_operator(expr("2"), LambdaOrder(0.5), 1, 2, x), 0.0);
}

TEST(FnkWidder, Examples) {
    const auto inv = expr("1/x");
    EXPECT_NEAR(f_nk_widder(inv, 2, 3, 0.7, WidderVariant::deriv2), 0.0, 1e-12);
    for (auto v : {WidderVariant::sum, WidderVariant::deriv1, WidderVariant::deriv2})
        EXPECT_NEAR(f_nk_widder(inv, 2, 0, 0.5, v), 16.0, 1e-13);
    const double target = -2.0 * std::exp(-2.0);
    for (auto v : {WidderVariant::sum, WidderVariant::deriv1, WidderVariant::deriv2})
        EXPECT_NEAR(f_nk_widder(expr("exp(-x)"), 1, 2, 2.0, v), target, 1e-15);
}

TEST(FnkMeasureOracle, Examples) {
    EXPECT_NEAR(f_nk_measure_oracle(oracle::measure(0, {{1, 1}}), LambdaOrder(1), 1, 1, 1.0), 0.25, 1e-15);
    for (double x : {0.1, 2.0}) EXPECT_NEAR(f_nk_measure_oracle(oracle::measure(5), LambdaOrder(2), 0, 2, x), 30.0, 1e-13);
    const auto lebesgue = oracle::measure(0, {}, {{0, 1, 1}});
    const double q = oracle::quad([](double t) { return t / ((1 + t) * (1 + t)); }, 0, 1);
    EXPECT_NEAR(q, std::log(2.0) - 0.5, 1e-15);
    EXPECT_NEAR(f_nk_measure_oracle(lebesgue, LambdaOrder(1), 0, 1, 1.0), q, 1e-14);
    EXPECT_THROW(f_nk_measure_oracle(lebesgue, LambdaOrder(1), 0, 1, -1.0), Error);
}

TEST(FnkMeasureOracle, MatchesQuadrature) {
    oracle::MeasureGenerator gen(5);
    for (int trial = 0; trial < 25; ++trial) {
        const auto m = gen.next();
        const double lambda = gen.uniform(0.2, 3.5);
        const double x = std::pow(10.0, gen.uniform(-1, 1));
        for (int n = 0; n <= 4; ++n)
            for (int k = 0; k <= 4; ++k) {
                const double got = f_nk_measure_oracle(m, LambdaOrder(lambda), n, k, x);
                const double ref = oracle::f_nk_integral(m, lambda, n, k, x);
                EXPECT_TRUE(oracle::close(got, ref, 1e-9, 1e-300)) << trial << " " << n << " " << k << ": " << got << " " << ref;
            }
    }
}

TEST(DeltaK, Examples) {
    std::vector<double> harmonic(20);
    for (int n = 0; n < 20; ++n) harmonic[n] = 1.0 / (n + 1);
    EXPECT_NEAR(delta_k(harmonic, 1, 2), 1.0 / 12.0, 1e-15);
    EXPECT_NEAR(oracle::repeated_difference(harmonic, 1, 2), 1.0 / 12.0, 1e-15);

    const std::vector<double> flat(10, 3.5);
    for (int n = 0; n < 5; ++n)
        for (int k = 1; n + k < 10; ++k) EXPECT_EQ(delta_k(flat, n, k), 0.0);

    std::vector<double> geo(5);
    for (int n = 0; n < 5; ++n) geo[n] = std::pow(0.3, n);
    EXPECT_NEAR(delta_k(geo, 0, 2), 0.49, 1e-15);

    try {
        delta_k(geo, 3, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::OutOfRange);
    }
}

TEST(DeltaK, PascalRecurrenceExact) {
    std::vector<double> c{3, -1, 4, 1, -5, 9, 2, -6, 5, 3, 5, -8, 9, 7};
    for (int n = 0; n + 1 < 14; ++n)
        for (int k = 0; n + k + 1 < 14; ++k)
            EXPECT_EQ(delta_k(c, n, k + 1), delta_k(c, n, k) - delta_k(c, n + 1, k)) << n << " " << k;
}

TEST(DeltaK, MatchesRepeatedDifferencing) {
    std::vector<extended> c(25);
    for (int n = 0; n < 25; ++n) c[n] = extended(1) / (extended(n) * n + 2);
    for (int n = 0; n < 10; ++n)
        for (int k = 0; n + k < 25; ++k) {
            const extended a = delta_k(c, n, k), b = oracle::repeated_difference(c, n, k);
            EXPECT_LT(to_double(abs(a - b)), 1e-80) << n << " " << k;
        }
}

TEST(FTable, Examples) {
    const auto t = f_table(expr("1/x"), LambdaOrder(1), 1.0, 3, 3);
    const double col0[] = {1, 1, 2, 6};
    for (int n = 0; n <= 3; ++n) {
        EXPECT_NEAR(t.values[n][0], col0[n], 1e-13);
        for (int k = 1; k <= 3; ++k) EXPECT_NEAR(t.values[n][k], 0.0, 1e-12 * t.scales[n][k]);
    }

    const auto u = f_table(expr("1/(x+1)"), LambdaOrder(1), 1.0, 1, 1);
    EXPECT_NEAR(u.values[0][0], 0.5, 1e-15);
    EXPECT_NEAR(u.values[0][1], 0.25, 1e-15);
    EXPECT_NEAR(u.values[1][0], 0.25, 1e-15);
    EXPECT_NEAR(u.values[1][1], 0.25, 1e-15);

    const auto h = f_table(expr("1/(x+1)"), LambdaOrder(0.5), 2.0, 1, 1);
    EXPECT_NEAR(h.values[0][1], -1.0 / 18.0, 1e-15);
}

TEST(FTable, ShapeAndScales) {
    const auto t = f_table(expr("exp(-x)*sqrt(x+1)"), LambdaOrder(2.2), 0.9, 4, 6);
    ASSERT_EQ(t.values.size(), 5u);
    ASSERT_EQ(t.values[0].size(), 7u);
    for (int n = 0; n <= 4; ++n)
        for (int k = 0; k <= 6; ++k) EXPECT_GE(t.scales[n][k], std::abs(t.values[n][k]));
    EXPECT_LE(t.crosscheck_deviation, 1e-12);
}

namespace {

std::vector<FunctionSpec> formula_corpus() {
    std::vector<FunctionSpec> out;
    out.push_back(backed(oracle::measure(0, {{1, 1}}), 1.0));
    out.push_back(backed(oracle::measure(0.5, {{0.2, 2}}, {{1, 3, 0.5}}), 0.5));
    out.push_back(backed(oracle::measure(0, {}, {{0, 1, 1}}), 2.0));
    out.push_back(backed(oracle::measure(1, {{0, 1}, {4, 0.3}}), 3.5));
    out.push_back(expr("exp(-x)"));
    out.push_back(expr("log(1+1/x)"));
    out.push_back(expr("x^(-0.5)+1/(x+2)"));
    out.push_back(expr("sqrt(x)*exp(-x)"));
    return out;
}

} // namespace

TEST(Equivalence, SumOperatorBinary64) {
    for (const auto& fn : formula_corpus())
        for (double lambda : {0.5, 1.0, 2.0})
            for (double x : {0.05, 1.0, 20.0}) {
                const auto jet = derivatives(fn, x, 10);
                for (int n = 0; n <= 10; ++n)
                    for (int k = 0; n + k <= 10; ++k) {
                        const auto s = f_nk_sum(jet, LambdaOrder(lambda), n, k);
                        const double op = f_nk_operator(jet, LambdaOrder(lambda), n, k);
                        EXPECT_LE(std::abs(s.value - op), 1e-8 * s.scale) << fn.label() << " " << x << " " << n << " " << k;
                    }
            }
}

TEST(Equivalence, WidderTriple) {
    for (const auto& fn : formula_corpus())
        for (double x : {0.05, 1.0, 20.0}) {
            const auto jet = derivatives(fn, x, 10);
            for (int n = 0; n <= 10; ++n)
                for (int k = 0; n + k <= 10; ++k) {
                    const auto s = f_nk_sum(jet, LambdaOrder(1), n, k);
                    const double d1 = f_nk_widder(jet, n, k, WidderVariant::deriv1);
                    const double d2 = f_nk_widder(jet, n, k, WidderVariant::deriv2);
                    EXPECT_EQ(f_nk_widder(jet, n, k, WidderVariant::sum), s.value);
                    EXPECT_LE(std::abs(s.value - d1), 1e-8 * s.scale);
                    EXPECT_LE(std::abs(s.value - d2), 1e-8 * s.scale);
                }
        }
}

TEST(Equivalence, SumMatchesMeasureOracle) {
    oracle::MeasureGenerator gen(17);
    for (int trial = 0; trial < 30; ++trial) {
        const auto m = gen.next();
        const LambdaOrder lambda(gen.uniform(0.1, 4));
        const double x = std::pow(10.0, gen.uniform(-2, 2));
        const auto d = eval_derivs(m, lambda, x, 10);
        const Jet<double> jet{x, d};
        for (int n = 0; n <= 10; ++n)
            for (int k = 0; n + k <= 10; ++k) {
                const auto s = f_nk_sum(jet, lambda, n, k);
                const double o = f_nk_measure_oracle(m, lambda, n, k, x);
                EXPECT_LE(std::abs(s.value - o), 1e-8 * s.scale) << trial << " " << n << " " << k;
            }
    }
}

TEST(Equivalence, MomentScalingIdentity) {
    // F_{n,k} = (lambda)_{n+k} * (-1)^k (Delta^k c)_n / x^n with c the moment sequence at x.
    const auto fn = expr("log(1+1/x)+exp(-x)");
    const LambdaOrder lambda(1.5);
    const extended x("0.75");
    const int N = 14;
    const auto jet = derivatives(fn, x, N);
    const auto c = moment_sequence_at(fn, lambda, x, N);
    for (int n = 0; n <= N; ++n)
        for (int k = 0; n + k <= N; ++k) {
            const auto s = f_nk_sum(jet, lambda, n, k);
            const extended via = rising_product(lambda.as<extended>(), n + k) * delta_k(c.entries, n, k) / pow(x, n);
            EXPECT_LE(to_double(abs(via - s.value) / s.scale), 1e-80) << n << " " << k;
        }
}

TEST(Nonnegativity, RandomMeasures) {
    oracle::MeasureGenerator gen(99);
    for (int trial = 0; trial < 200; ++trial) {
        const auto m = gen.next();
        const LambdaOrder lambda(gen.uniform(0.05, 5));
        const double x = std::pow(10.0, gen.uniform(-3, 3));
        const int n = gen.integer(0, 12);
        const int k = gen.integer(0, 12 - n);
        const auto d = eval_derivs(m, lambda, x, n + k);
        const auto s = f_nk_sum(Jet<double>{x, d}, lambda, n, k);
        EXPECT_GE(s.value, -1e-8 * s.scale) << trial;
    }
}
