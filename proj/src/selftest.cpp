#include "simroots/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "simroots/driver.hpp"
#include "simroots/iteration.hpp"
#include "simroots/oracle.hpp"
#include "simroots/symmetric.hpp"

namespace simroots::selftest {

namespace {

using C = Complex<double>;
using Vec = ComplexVector<double>;

SuiteResult finish(std::string name, double worst, double tolerance, int cases, std::string detail = {})
{
    SuiteResult r;
    r.name = std::move(name);
    r.worst = worst;
    r.tolerance = tolerance;
    r.cases = cases;
    r.passed = worst <= tolerance;
    r.detail = std::move(detail);
    return r;
}

double min_separation(const Vec& roots)
{
    double sep = std::numeric_limits<double>::infinity();
    for (Index a = 0; a < roots.size(); ++a)
        for (Index b = a + 1; b < roots.size(); ++b)
            sep = std::min(sep, std::abs(roots(a) - roots(b)));
    return sep;
}

Vec random_tuple(std::mt19937_64& rng, int n)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vec x(n);
    for (int j = 0; j < n; ++j)
        x(j) = C(u(rng), u(rng));
    return x;
}

/// Relative error with the scale taken from the magnitude of the terms being summed.
double scaled_error(const C& got, const C& want, double scale)
{
    return std::abs(got - want) / std::max({std::abs(want), scale, 1e-300});
}

/// Largest term magnitude in the subset expansion of e_k(x); the natural scale for its rounding error.
double elementary_scale(const Vec& x, int k)
{
    Vec abs_x(x.size());
    for (Index j = 0; j < x.size(); ++j)
        abs_x(j) = C(std::abs(x(j)), 0);
    return std::abs(oracle::elementary_symmetric_direct<double>(abs_x, k));
}

} // namespace

SuiteResult check_log_derivative_lemma(std::uint64_t seed, int polynomials, int points_per_polynomial,
                                       bool inject_fault)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> degree(1, 8);
    double worst = 0;
    int cases = 0;
    for (int c = 0; c < polynomials; ++c) {
        const int n = degree(rng);
        const Vec roots = oracle::random_separated_roots<double>(rng, n, 4.0, 0.5);
        const Polynomial<double> p = from_roots<double>(roots);
        for (int t = 0; t < points_per_polynomial; ++t) {
            const C z = oracle::random_point_away_from<double>(rng, roots, 5.0, 0.1);
            const Vec taylor = taylor_coefficients(p, z, n);
            Vec inv(n);
            for (int j = 0; j < n; ++j)
                inv(j) = 1.0 / (z - roots(j));
            for (int k = 0; k <= n; ++k) {
                C got = taylor(k) / taylor(0);
                if (inject_fault && c == 0 && t == 0 && k == n)
                    got *= 1.0 + 1e-6;
                const C want = oracle::elementary_symmetric_direct<double>(inv, k);
                worst = std::max(worst, oracle::relative_error(got, want));
                ++cases;
            }
        }
    }
    return finish("log-derivative lemma", worst, 1e-9, cases);
}

SuiteResult check_newton_identities(std::uint64_t seed, int cases)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> size(1, 8);
    std::uniform_int_distribution<int> order(1, 8);
    double worst = 0;
    for (int c = 0; c < cases; ++c) {
        const int n = size(rng);
        const int m = order(rng);
        const Vec x = random_tuple(rng, n);
        std::vector<C> e(m, C(0));
        for (int k = 1; k <= std::min(m, n); ++k)
            e[k - 1] = oracle::elementary_symmetric_direct<double>(x, k);
        const C got = power_sum_table(m).evaluate<double>(e);
        const C want = oracle::power_sum_direct<double>(x, m);
        // the power sum can cancel to near zero; measure against sum |x_j|^m
        double scale = 0;
        for (Index j = 0; j < x.size(); ++j)
            scale += std::pow(std::abs(x(j)), m);
        worst = std::max(worst, scaled_error(got, want, scale));
    }
    return finish("newton identities", worst, 1e-10, cases);
}

SuiteResult check_symbolic_tables()
{
    std::ostringstream bad;
    int cases = 0;
    auto expect = [&](bool ok, const std::string& what) {
        ++cases;
        if (!ok)
            bad << what << "; ";
    };

    expect(power_sum_in_elementary(1).to_string() == "e1", "u_1");
    expect(power_sum_in_elementary(2).to_string() == "e1^2 - 2*e2", "u_2");
    expect(power_sum_in_elementary(3).to_string() == "e1^3 - 3*e1*e2 + 3*e3", "u_3");

    auto weights = [](int d) {
        std::vector<std::pair<std::vector<int>, std::int64_t>> out;
        for (const auto& t : partition_table(d).terms)
            out.emplace_back(t.multiplicities, t.weight);
        return out;
    };
    using W = std::vector<std::pair<std::vector<int>, std::int64_t>>;
    expect(weights(2) == W{{{0, 1}, 1}, {{2, 0}, 1}}, "H_2");
    expect(weights(3) == W{{{0, 0, 1}, 2}, {{1, 1, 0}, 3}, {{3, 0, 0}, 1}}, "H_3");
    expect(weights(4) == W{{{0, 0, 0, 1}, 6}, {{1, 0, 1, 0}, 8}, {{0, 2, 0, 0}, 3}, {{2, 1, 0, 0}, 6}, {{4, 0, 0, 0}, 1}},
           "H_4");

    const std::string detail = bad.str();
    return finish("symbolic tables", detail.empty() ? 0.0 : 1.0, 0.0, cases, detail);
}

SuiteResult check_homogeneous_expansion(std::uint64_t seed, int cases)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> size(1, 6);
    std::uniform_int_distribution<int> degree(1, 5);
    double worst = 0;
    for (int c = 0; c < cases; ++c) {
        const int n = size(rng);
        const int d = degree(rng);
        const Vec x = random_tuple(rng, n);
        LaggedSums<double> s{Vec(d)};
        for (int r = 1; r <= d; ++r)
            s.values(r - 1) = oracle::power_sum_direct<double>(x, r);
        const C got = eval_H<double>(d, s);
        const C want = double(factorial(d)) * oracle::homogeneous_direct<double>(x, d);
        Vec abs_x(n);
        for (int j = 0; j < n; ++j)
            abs_x(j) = C(std::abs(x(j)), 0);
        const double scale = double(factorial(d)) * std::abs(oracle::homogeneous_direct<double>(abs_x, d));
        worst = std::max(worst, scaled_error(got, want, scale));
    }
    return finish("homogeneous expansion", worst, 1e-10, cases);
}

SuiteResult check_c_and_v(std::uint64_t seed, int cases)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> degree(2, 8);
    double worst = 0;
    int checks = 0;
    for (int c = 0; c < cases; ++c) {
        const int n = degree(rng);
        const Vec roots = oracle::random_separated_roots<double>(rng, n, 4.0, 0.5);
        const Polynomial<double> p = from_roots<double>(roots);
        const C z = oracle::random_point_away_from<double>(rng, roots, 5.0, 0.1);
        const Index i = std::uniform_int_distribution<Index>(0, n - 1)(rng);
        const Vec others = detail::without_index(roots, i);

        Vec shifted(n - 1);
        for (int j = 0; j < n - 1; ++j)
            shifted(j) = z - others(j);
        for (int m = 0; m <= n - 1; ++m) {
            const C got = eval_c_mi<double>(z, others, m);
            const C want = oracle::elementary_symmetric_direct<double>(shifted, m);
            worst = std::max(worst, scaled_error(got, want, elementary_scale(shifted, m)));
            ++checks;
        }

        // low-order closed forms in z and b_k = sum_{j != i} lambda_j^k
        const double nn = n;
        const C b1 = oracle::power_sum_direct<double>(others, 1);
        const C b2 = oracle::power_sum_direct<double>(others, 2);
        const C c1 = (nn - 1) * z - b1;
        const C c2 = (nn - 1) * (nn - 2) * z * z / 2.0 - (nn - 2) * b1 * z + (b1 * b1 - b2) / 2.0;
        worst = std::max(worst, scaled_error(eval_c_mi<double>(z, others, 0), C(1), 1.0));
        worst = std::max(worst, scaled_error(eval_c_mi<double>(z, others, 1), c1, elementary_scale(shifted, 1)));
        if (n >= 3)
            worst = std::max(worst, scaled_error(eval_c_mi<double>(z, others, 2), c2, elementary_scale(shifted, 2)));
        checks += 3;

        Vec inv(n);
        for (int j = 0; j < n; ++j)
            inv(j) = 1.0 / (z - roots(j));
        const C f = p(z);
        for (int m = 1; m <= n; ++m) {
            const C want = f * oracle::elementary_symmetric_direct<double>(inv, n - m);
            worst = std::max(worst, oracle::relative_error(eval_v_m(p, z, m), want));
            ++checks;
        }
    }
    return finish("c_{m;i} and v_m", worst, 1e-9, checks);
}

SuiteResult check_reduction_identities(std::uint64_t seed, int states)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> degree(2, 8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0;
    auto compare = [&](const StepOutcome<double>& a, const StepOutcome<double>& b) {
        for (Index i = 0; i < a.next.size(); ++i)
            worst = std::max(worst, oracle::relative_error(a.next(i), b.next(i)));
    };
    for (int s = 0; s < states; ++s) {
        const int n = degree(rng);
        const Vec roots = oracle::random_separated_roots<double>(rng, n, 4.0, 0.5);
        const Polynomial<double> p = from_roots<double>(roots);
        const double sep = min_separation(roots);
        Vec z = roots;
        for (int j = 0; j < n; ++j)
            z(j) += std::polar(0.3 * sep * u(rng), 2 * std::numbers::pi * u(rng));

        const auto aberth = aberth_step(p, z);
        compare(mth_root_step(p, z, 1), aberth);
        compare(householder_step(p, z, 1), aberth);
        compare(mth_root_step(p, z, 2), gargantini_step(p, z));
        compare(householder_step(p, z, 2), halley_explicit_step(p, z));
    }
    return finish("reduction identities", worst, 1e-12, states);
}

SuiteResult check_one_step_exactness(std::uint64_t seed, int cases_per_method)
{
    const std::vector<MethodSpec> methods = {
        MethodSpec::durand_kerner(),        MethodSpec::householder(1),         MethodSpec::householder(2),
        MethodSpec::householder(3),         MethodSpec::householder(4),         MethodSpec::weierstrass_linear(1),
        MethodSpec::weierstrass_linear(2),  MethodSpec::weierstrass_linear(3),  MethodSpec::weierstrass_quadratic(1),
        MethodSpec::weierstrass_quadratic(2), MethodSpec::weierstrass_quadratic(3), MethodSpec::mth_root(1),
        MethodSpec::mth_root(2),            MethodSpec::mth_root(3),
    };
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> degree(4, 8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0;
    std::string worst_method;
    for (const MethodSpec& method : methods) {
        for (int c = 0; c < cases_per_method; ++c) {
            const int n = degree(rng);
            const Vec roots = oracle::random_separated_roots<double>(rng, n, 4.0, 0.5);
            const Polynomial<double> p = from_roots<double>(roots);
            const Index i = std::uniform_int_distribution<Index>(0, n - 1)(rng);
            Vec z = roots;
            z(i) += std::polar(0.3 * min_separation(roots) * u(rng), 2 * std::numbers::pi * u(rng));
            const double err = std::abs(step(method, p, z).next(i) - roots(i));
            if (err > worst) {
                worst = err;
                worst_method = method.name();
            }
        }
    }
    return finish("one-step exactness", worst, 1e-9, cases_per_method * static_cast<int>(methods.size()),
                  "worst method " + worst_method);
}

std::vector<SuiteResult> run_all(const Options& opts)
{
    const int k = std::max(1, opts.scale);
    const std::uint64_t s = opts.seed;
    return {
        check_log_derivative_lemma(s, 40 * k, 5, opts.inject_fault),
        check_newton_identities(s + 1, 200 * k),
        check_symbolic_tables(),
        check_homogeneous_expansion(s + 2, 200 * k),
        check_c_and_v(s + 3, 100 * k),
        check_reduction_identities(s + 4, 50 * k),
        check_one_step_exactness(s + 5, 10 * k),
    };
}

} // namespace simroots::selftest
