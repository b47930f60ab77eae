#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "simroots/driver.hpp"

using namespace simroots;
using namespace testing;

namespace {

Vec degree6_roots()
{
    return vec({1, -1, 2, -2, C(0, 1.5), C(0, -1.5)});
}

bool trace_is_finite(const IterationTrace<double>& t)
{
    for (const auto& rec : t.per_iteration) {
        if (!all_finite<double>(rec.approximations) || !std::isfinite(rec.max_residual) || !std::isfinite(rec.max_step))
            return false;
        if (rec.max_error && !std::isfinite(*rec.max_error))
            return false;
    }
    return true;
}

} // namespace

TEST_CASE("SolveConfig validation", "[driver]")
{
    SolveConfig<double> cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.max_iter = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = {};
    cfg.tol_residual = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = {};
    cfg.collision_delta = -1;
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("initial guesses", "[driver]")
{
    const double pi = std::numbers::pi;
    const Vec z = initial_guesses(from_coefficients<double>(vec({-1, 0, 1})));
    REQUIRE(z.size() == 2);
    CHECK(close(z(0), std::polar(2.0, pi / 4), 1e-15));
    CHECK(close(z(1), std::polar(2.0, 5 * pi / 4), 1e-15));

    // centroid 1: (z - 1)^3 + 0.5 has a_2 = -3
    const Vec w = initial_guesses(from_coefficients<double>(vec({-0.5, 3, -3, 1})));
    CHECK(close(w.sum() / 3.0, 1, 1e-14));

    const Vec lin = initial_guesses(from_coefficients<double>(vec({-3, 1})));
    CHECK(close(lin(0), C(3, 4), 1e-15));
}

TEST_CASE("Durand-Kerner solve of z^2 - 1", "[driver]")
{
    const auto p = from_coefficients<double>(vec({-1, 0, 1}));
    const auto trace = run(MethodSpec::durand_kerner(), p, vec({2, -2}), SolveConfig<double>{});
    CHECK(trace.termination == Termination::ResidualMet);
    const Vec z = trace.final().approximations;
    CHECK(matched_max_error<double>(z, vec({1, -1})) <= 1e-10);
}

TEST_CASE("starting at the roots stops immediately", "[driver]")
{
    const Vec roots = degree6_roots();
    const auto p = from_roots<double>(roots);
    const auto trace = run(MethodSpec::aberth(), p, roots, SolveConfig<double>{}, std::optional(roots));
    CHECK(trace.termination == Termination::ResidualMet);
    CHECK(trace.iterations() <= 1);
}

TEST_CASE("trace structure", "[driver]")
{
    const Vec roots = degree6_roots();
    const auto p = from_roots<double>(roots);
    for (const MethodSpec& m : {MethodSpec::durand_kerner(), MethodSpec::aberth(), MethodSpec::householder(3),
                                MethodSpec::weierstrass_quadratic(2), MethodSpec::mth_root(3)}) {
        INFO(m.name());
        const auto trace = solve(m, p, SolveConfig<double>{}, std::optional(roots));
        REQUIRE_FALSE(trace.per_iteration.empty());
        for (std::size_t k = 0; k < trace.per_iteration.size(); ++k) {
            CHECK(trace.per_iteration[k].iteration == static_cast<int>(k));
            CHECK(trace.per_iteration[k].max_error.has_value());
        }
        CHECK(trace_is_finite(trace));
        CHECK(trace.termination == Termination::ResidualMet);
        CHECK(*trace.final().max_error <= 1e-10);

        // residual non-increasing over the last three iterations
        const auto& r = trace.per_iteration;
        if (r.size() >= 3) {
            CHECK(r[r.size() - 1].max_residual <= r[r.size() - 2].max_residual);
            CHECK(r[r.size() - 2].max_residual <= r[r.size() - 3].max_residual);
        }
    }
}

TEST_CASE("solve is deterministic", "[driver]")
{
    const auto p = from_roots<double>(vec({1, 1.5, C(0, 2), -3, C(-1, -1)}));
    SolveConfig<double> cfg;
    cfg.seed = 99;
    const auto a = solve(MethodSpec::gargantini(), p, cfg);
    const auto b = solve(MethodSpec::gargantini(), p, cfg);
    REQUIRE(a.per_iteration.size() == b.per_iteration.size());
    for (std::size_t k = 0; k < a.per_iteration.size(); ++k) {
        CHECK(max_abs_diff(a.per_iteration[k].approximations, b.per_iteration[k].approximations) == 0);
        CHECK(a.per_iteration[k].max_residual == b.per_iteration[k].max_residual);
    }
}

TEST_CASE("iteration cap", "[driver]")
{
    const auto p = from_roots<double>(degree6_roots());
    SolveConfig<double> cfg;
    cfg.max_iter = 2;
    const auto trace = solve(MethodSpec::durand_kerner(), p, cfg);
    CHECK(trace.termination == Termination::MaxIterReached);
    CHECK(trace.iterations() == 2);
}

TEST_CASE("singular sweep terminates", "[driver]")
{
    // z^2 + 1 with one coordinate on the root i and the other at 0, where v_1 vanishes
    const auto p = from_coefficients<double>(vec({1, 0, 1}));
    const auto trace = run(MethodSpec::weierstrass_linear(1), p, vec({0, C(0, 1)}), SolveConfig<double>{});
    CHECK(trace.termination == Termination::Singular);
    CHECK(trace.iterations() == 1);
    CHECK(trace.final().flags[0] == CoordinateFlag::SingularDenominator);
    CHECK(trace.final().flags[1] == CoordinateFlag::AlreadyConverged);
}

TEST_CASE("multiple root never produces non-finite values", "[driver]")
{
    const auto p = from_roots<double>(vec({1, 1, 1, 1}));
    for (const MethodSpec& m : {MethodSpec::durand_kerner(), MethodSpec::aberth(), MethodSpec::weierstrass_linear(1),
                                MethodSpec::weierstrass_quadratic(3), MethodSpec::householder(4)}) {
        INFO(m.name());
        CHECK(trace_is_finite(solve(m, p, SolveConfig<double>{})));
    }
}

TEST_CASE("run validates its inputs", "[driver]")
{
    const auto p = from_coefficients<double>(vec({-1, 0, 1}));
    CHECK_THROWS_AS(run(MethodSpec::aberth(), p, vec({1, 2, 3}), SolveConfig<double>{}), Error);
    CHECK_THROWS_AS(run(MethodSpec::aberth(), p, vec({1, std::nan("")}), SolveConfig<double>{}), Error);
    CHECK_THROWS_AS(run(MethodSpec::weierstrass_linear(2), p, vec({1, 2}), SolveConfig<double>{}), Error);
    CHECK_THROWS_AS(run(MethodSpec::aberth(), p, vec({1, 2}), SolveConfig<double>{}, std::optional(vec({1}))), Error);
}

TEST_CASE("greedy matching", "[driver]")
{
    CHECK(matched_max_error<double>(vec({1.1, -0.9}), vec({-1, 1})) == Catch::Approx(0.1));
    // estimate 0 claims the root at 0, leaving 3 for the second estimate
    CHECK(matched_max_error<double>(vec({0.1, 0.2}), vec({0, 3})) == Catch::Approx(2.8));
    CHECK_THROWS_AS(matched_max_error<double>(vec({1}), vec({1, 2})), Error);
}

TEST_CASE("estimate_order on constructed sequences", "[driver]")
{
    std::vector<double> quad;
    for (int k = 0; k < 5; ++k)
        quad.push_back(std::pow(10.0, -2.0 * std::pow(2.0, k)));
    const auto q = estimate_order(quad);
    CHECK(q.order == Catch::Approx(2.0).margin(0.01));
    CHECK(q.points_used == 2);
    CHECK(q.reliable);

    // 10^{-1.5 * 3^k} leaves no pair inside the default window; widen it
    std::vector<double> cubic;
    for (int k = 0; k < 4; ++k)
        cubic.push_back(std::pow(10.0, -1.5 * std::pow(3.0, k)));
    CHECK_THROWS_AS(estimate_order(cubic), Error);
    const auto c = estimate_order(cubic, OrderWindow<double>{1e-300, 1.0, 0.0});
    CHECK(c.order == Catch::Approx(3.0).margin(0.01));
}

TEST_CASE("estimate_order recovers synthetic exponents", "[driver][property]")
{
    const OrderWindow<double> wide{1e-300, 1.0, 0.0};
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
        for (double c : {0.3, 1.0, 2.5}) {
            std::vector<double> e = {1e-2};
            while (e.back() > 1e-200 && e.size() < 12)
                e.push_back(c * std::pow(e.back(), p));
            const auto est = estimate_order(e, wide);
            INFO("p=" << p << " C=" << c);
            CHECK(est.order == Catch::Approx(p).margin(0.05));
            CHECK(est.residual_fit_error < 1e-6);
        }
    }
}

TEST_CASE("estimate_order edge cases", "[driver]")
{
    try {
        (void)estimate_order(std::vector<double>{1.0, 0.5});
        FAIL("expected UnreliableEstimate");
    }
    catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnreliableEstimate);
    }
    const auto one = estimate_order(std::vector<double>{1e-2, 1e-6, 1e-20});
    CHECK(one.points_used == 1);
    CHECK_FALSE(one.reliable);
    CHECK(one.order == Catch::Approx(3.0));

    // the cap admits a start that rounds just above 1e-2
    CHECK(OrderWindow<double>{}.contains(1e-2 * (1 + 1e-12)));
    CHECK_FALSE(OrderWindow<double>{}.contains(1e-13));
}

TEST_CASE("Durand-Kerner order on the degree-6 problem", "[driver]")
{
    const Vec roots = degree6_roots();
    const auto p = from_roots<double>(roots);
    const auto trace = run(MethodSpec::durand_kerner(), p, perturbed_roots<double>(roots, 1e-2, 0),
                           SolveConfig<double>{}, std::optional(roots));
    const auto est = estimate_order(trace);
    CHECK(est.order >= 1.6);
    CHECK(est.order <= 2.4);
}

TEST_CASE("convergence study", "[driver]")
{
    const Vec roots = degree6_roots();
    const auto p = from_roots<double>(roots);
    const auto rows = convergence_study<double>(
        p, roots, {MethodSpec::durand_kerner(), MethodSpec::aberth(), MethodSpec::householder(2)}, {}, 1e-2, 0);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
        REQUIRE(row.order);
        CHECK(row.termination == Termination::ResidualMet);
    }
    CHECK(rows[0].order->order < rows[1].order->order);
    CHECK(rows[1].order->order < rows[2].order->order);

    CHECK(convergence_study<double>(p, roots, {}, {}, 1e-2, 0).empty());

    const Vec repeated = vec({1, 1, 1});
    CHECK_THROWS_AS(convergence_study<double>(from_roots<double>(repeated), repeated, {MethodSpec::aberth()}, {},
                                              1e-2, 0),
                    Error);
}

TEST_CASE("perturbed roots sit at the requested distance", "[driver]")
{
    const Vec roots = degree6_roots();
    const Vec z = perturbed_roots<double>(roots, 1e-2, 5);
    for (Index i = 0; i < roots.size(); ++i)
        CHECK(std::abs(z(i) - roots(i)) == Catch::Approx(1e-2).epsilon(1e-10));
    CHECK(max_abs_diff(z, perturbed_roots<double>(roots, 1e-2, 5)) == 0);
}

TEST_CASE("long double solve", "[driver]")
{
    using LC = std::complex<long double>;
    ComplexVector<long double> roots(3);
    roots << LC(1), LC(-2), LC(0, 1);
    const auto p = from_roots<long double>(roots);
    SolveConfig<long double> cfg;
    cfg.tol_residual = 1e-15L;
    const auto trace = solve(MethodSpec::aberth(), p, cfg, std::optional(roots));
    CHECK(trace.termination == Termination::ResidualMet);
    CHECK(*trace.final().max_error < 1e-14L);
}
