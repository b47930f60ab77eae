#include <catch_amalgamated.hpp>

#include <limits>
#include <random>

#include "helpers.hpp"
#include "simroots/oracle.hpp"
#include "simroots/polynomial.hpp"

using namespace simroots;
using namespace testing;

TEST_CASE("from_coefficients normalizes to monic", "[polynomial]")
{
    const auto p = from_coefficients<double>(vec({1, 0, 1}));
    CHECK(p.degree() == 2);
    CHECK(max_abs_diff(p.coefficients(), vec({1, 0, 1})) == 0);

    const auto q = from_coefficients<double>(vec({2, 0, 2}));
    CHECK(max_abs_diff(q.coefficients(), vec({1, 0, 1})) == 0);

    const auto r = from_coefficients<double>(vec({C(0, 2), C(0, 4), C(0, 2)}));
    CHECK(r.coeff(2) == C(1));
    CHECK(r.coeff(1) == C(2));
}

TEST_CASE("from_coefficients rejects degenerate input", "[polynomial]")
{
    auto code_of = [](const Vec& raw) {
        try {
            (void)from_coefficients<double>(raw);
        }
        catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::UnreliableEstimate;
    };
    CHECK(code_of(vec({1, 1, 0})) == ErrorCode::DegenerateInput);
    CHECK(code_of(vec({1})) == ErrorCode::DegenerateInput);
    CHECK(code_of(vec({std::numeric_limits<double>::quiet_NaN(), 1})) == ErrorCode::DegenerateInput);
    CHECK(code_of(Vec::Ones(kMaxDegree + 2)) == ErrorCode::DegenerateInput);
    CHECK_NOTHROW(from_coefficients<double>(Vec::Ones(kMaxDegree + 1)));
}

TEST_CASE("from_roots expands the product", "[polynomial]")
{
    CHECK(max_abs_diff(from_roots<double>(vec({1, -1})).coefficients(), vec({-1, 0, 1})) == 0);
    CHECK(max_abs_diff(from_roots<double>(vec({C(0, 1), C(0, -1)})).coefficients(), vec({1, 0, 1})) == 0);
    CHECK(max_abs_diff(from_roots<double>(vec({1, 2, 3})).coefficients(), vec({-6, 11, -6, 1})) == 0);
    CHECK_THROWS_AS(from_roots<double>(Vec(0)), Error);
}

TEST_CASE("from_roots residual at random roots", "[polynomial][property]")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 8;
        const Vec roots = oracle::random_separated_roots<double>(rng, n, 4.0, 0.5);
        const auto p = from_roots<double>(roots);
        const double bound = 1e-9 * std::pow(1 + root_bound(p), n);
        for (int j = 0; j < n; ++j)
            CHECK(std::abs(p(roots(j))) <= bound);
    }
}

TEST_CASE("eval_derivatives", "[polynomial]")
{
    const auto p = from_coefficients<double>(vec({-1, 0, 1}));
    CHECK(max_abs_diff(eval_derivatives(p, C(2), 2), vec({3, 4, 2})) == 0);
    CHECK(max_abs_diff(eval_derivatives(p, C(1), 0), vec({0})) == 0);

    const auto cube = from_coefficients<double>(vec({0, 0, 0, 1}));
    CHECK(max_abs_diff(eval_derivatives(cube, C(0), 3), vec({0, 0, 0, 6})) == 0);

    CHECK_THROWS_AS(eval_derivatives(p, C(0), 3), Error);
    CHECK_THROWS_AS(eval_derivatives(p, C(0), -1), Error);
}

TEST_CASE("eval_derivatives reports overflow", "[polynomial]")
{
    const auto p = from_coefficients<double>(Vec::Ones(101));
    try {
        (void)eval_derivatives(p, C(1e200), 1);
        FAIL("expected overflow");
    }
    catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NumericOverflow);
    }
}

TEST_CASE("eval_derivatives matches finite differences", "[polynomial][property]")
{
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 7;
        const Vec roots = oracle::random_separated_roots<double>(rng, n, 3.0, 0.5);
        const auto p = from_roots<double>(roots);
        const C z = oracle::random_point_away_from<double>(rng, roots, 4.0, 0.2);
        const double h = 1e-6;
        const C fd = (p(z + h) - p(z - h)) / (2 * h);
        CHECK(oracle::relative_error(eval_derivatives(p, z, 1)(1), fd) <= 1e-5);
    }
}

TEST_CASE("eval_derivatives top order is n!", "[polynomial]")
{
    const auto p = from_roots<double>(vec({1, C(0, 2), -3, 0.5, C(1, 1)}));
    CHECK(eval_derivatives(p, C(0.3, -0.7), 5)(5) == C(120));
}

TEST_CASE("reciprocal_derivatives", "[polynomial]")
{
    const auto p = from_coefficients<double>(vec({-1, 0, 1}));
    const Vec r = reciprocal_derivatives(p, C(2), 1);
    CHECK(close(r(0), 1.0 / 3, 1e-15));
    CHECK(close(r(1), -4.0 / 9, 1e-15));

    const C c(0.5, -2);
    const auto lin = from_coefficients<double>(vec({-c, 1}));
    const Vec rl = reciprocal_derivatives(lin, c + 1.0, 1);
    CHECK(close(rl(0), 1, 1e-15));
    CHECK(close(rl(1), -1, 1e-15));

    try {
        (void)reciprocal_derivatives(p, C(1), 2);
        FAIL("expected EvaluationAtRoot");
    }
    catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EvaluationAtRoot);
    }
}

TEST_CASE("reciprocal_derivatives match finite differences of 1/f", "[polynomial][property]")
{
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + trial % 5;
        const Vec roots = oracle::random_separated_roots<double>(rng, n, 2.0, 0.5);
        const auto p = from_roots<double>(roots);
        const C z = oracle::random_point_away_from<double>(rng, roots, 3.0, 0.3);
        const Vec r = reciprocal_derivatives(p, z, 3);
        auto g = [&](const C& w) { return 1.0 / p(w); };
        const double h = 1e-3;
        const C d1 = (g(z + h) - g(z - h)) / (2 * h);
        const C d2 = (g(z + h) - 2.0 * g(z) + g(z - h)) / (h * h);
        const C d3 = (g(z + 2 * h) - 2.0 * g(z + h) + 2.0 * g(z - h) - g(z - 2 * h)) / (2 * h * h * h);
        CHECK(oracle::relative_error(r(1), d1) <= 1e-4);
        CHECK(oracle::relative_error(r(2), d2) <= 1e-4);
        CHECK(oracle::relative_error(r(3), d3) <= 1e-4);
    }
}

TEST_CASE("scaled reciprocal derivatives equal f^{k+1} (1/f)^{(k)}", "[polynomial]")
{
    const auto p = from_roots<double>(vec({1, -2, C(0, 1), 3}));
    const C z(0.4, 0.9);
    const Vec d = eval_derivatives(p, z, 4);
    const Vec scaled = scaled_reciprocal_derivatives<double>(d, 4);
    const Vec plain = reciprocal_derivatives(p, z, 4);
    C fpow = d(0);
    for (int k = 0; k <= 4; ++k) {
        CHECK(oracle::relative_error(scaled(k), fpow * plain(k)) <= 1e-13);
        fpow *= d(0);
    }
}

TEST_CASE("log-derivative lemma", "[polynomial][property]")
{
    std::mt19937_64 rng(14);
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + trial % 8;
        const Vec roots = oracle::random_separated_roots<double>(rng, n, 4.0, 0.5);
        const auto p = from_roots<double>(roots);
        const C z = oracle::random_point_away_from<double>(rng, roots, 5.0, 0.1);
        const Vec t = taylor_coefficients(p, z, n);
        Vec inv(n);
        for (int j = 0; j < n; ++j)
            inv(j) = 1.0 / (z - roots(j));
        for (int k = 0; k <= n; ++k)
            worst = std::max(worst, oracle::relative_error(t(k) / t(0), oracle::elementary_symmetric_direct<double>(inv, k)));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("root_bound", "[polynomial]")
{
    CHECK(root_bound(from_coefficients<double>(vec({-1, 0, 1}))) == 2);
    CHECK(root_bound(from_coefficients<double>(vec({0, 0, 0, 1}))) == 1);
    CHECK(root_bound(from_coefficients<double>(vec({-6, 11, -6, 1}))) == 12);

    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 50; ++trial) {
        const Vec roots = oracle::random_separated_roots<double>(rng, 5, 6.0, 0.3);
        const double bound = root_bound(from_roots<double>(roots));
        for (int j = 0; j < 5; ++j)
            CHECK(std::abs(roots(j)) <= bound);
    }
}

TEST_CASE("long double instantiation", "[polynomial]")
{
    using LC = std::complex<long double>;
    ComplexVector<long double> raw(3);
    raw << LC(-1), LC(0), LC(1);
    const auto p = from_coefficients<long double>(raw);
    const auto d = eval_derivatives(p, LC(2), 2);
    CHECK(d(0) == LC(3));
    CHECK(d(1) == LC(4));
    CHECK(root_bound(p) == 2.0L);
}
