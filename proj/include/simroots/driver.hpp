#ifndef SIMROOTS_DRIVER_HPP
#define SIMROOTS_DRIVER_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "common.hpp"
#include "iteration.hpp"
#include "polynomial.hpp"

namespace simroots {

enum class Termination { ResidualMet, StepMet, MaxIterReached, Stagnated, Singular };

inline const char* to_string(Termination t)
{
    switch (t) {
    case Termination::ResidualMet: return "ResidualMet";
    case Termination::StepMet: return "StepMet";
    case Termination::MaxIterReached: return "MaxIterReached";
    case Termination::Stagnated: return "Stagnated";
    case Termination::Singular: return "Singular";
    }
    return "Unknown";
}

enum class InitStrategy { CenteredCircle, UserProvided };

template <typename Real>
struct SolveConfig {
    Real tol_residual = Real(1e-12);
    Real tol_step = Real(1e-13);
    int max_iter = 200;
    Real collision_delta = Real(1e-12);
    std::uint64_t seed = 0;
    InitStrategy init_strategy = InitStrategy::CenteredCircle;

    void validate() const
    {
        if (!(tol_residual > 0) || !(tol_step > 0) || !(collision_delta > 0))
            throw Error(ErrorCode::DegenerateInput, "tolerances must be strictly positive");
        if (max_iter < 1)
            throw Error(ErrorCode::DegenerateInput, "max_iter must be at least 1");
    }
};

template <typename Real>
struct IterationRecord {
    int iteration = 0;
    RootVector<Real> approximations;
    /// max_i |f(z_i)|
    Real max_residual = 0;
    /// max_i |z_i^(k) - z_i^(k-1)|; zero for the initial record
    Real max_step = 0;
    /// Matched distance to the reference roots, when they are known.
    std::optional<Real> max_error;
    /// Per-coordinate flags of the sweep that produced this record; empty for k = 0.
    std::vector<CoordinateFlag> flags;
};

template <typename Real>
struct IterationTrace {
    std::vector<IterationRecord<Real>> per_iteration;
    Termination termination = Termination::MaxIterReached;

    const IterationRecord<Real>& final() const { return per_iteration.back(); }
    int iterations() const { return per_iteration.back().iteration; }
};

template <typename Real>
struct OrderEstimate {
    Real order = 0;
    /// Number of (e_k, e_{k+1}) pairs used in the fit.
    int points_used = 0;
    /// RMS residual of the log-log fit.
    Real residual_fit_error = 0;
    bool reliable = false;
};

/// Points on the Cauchy-bound circle around the root centroid -a_{n-1}/n.
template <typename Real>
RootVector<Real> initial_guesses(const Polynomial<Real>& p)
{
    const int n = p.degree();
    const Complex<Real> centre = -p.coeff(n - 1) / Real(n);
    const Real radius = root_bound(p);
    const Real pi = std::numbers::pi_v<Real>;
    RootVector<Real> z(n);
    for (int k = 0; k < n; ++k) {
        const Real theta = 2 * pi * Real(k) / Real(n) + pi / (2 * Real(n));
        z(k) = centre + std::polar(radius, theta);
    }
    return z;
}

namespace detail {

template <typename Real>
Real finite_or_max(Real x)
{
    return std::isfinite(x) ? x : std::numeric_limits<Real>::max();
}

template <typename Real>
Real max_residual(const Polynomial<Real>& p, const RootVector<Real>& z)
{
    Real r = 0;
    for (Index i = 0; i < z.size(); ++i)
        r = std::max(r, finite_or_max(std::abs(p(z(i)))));
    return r;
}

} // namespace detail

/**
 * Greedy matching: each estimate, in index order, takes the nearest reference
 * root not yet claimed. Returns the largest matched distance.
 */
template <typename Real>
Real matched_max_error(const RootVector<Real>& estimates, const RootVector<Real>& reference)
{
    if (estimates.size() != reference.size())
        throw Error(ErrorCode::DegenerateInput, "reference root count differs from degree");
    std::vector<bool> claimed(static_cast<std::size_t>(reference.size()), false);
    Real worst = 0;
    for (Index i = 0; i < estimates.size(); ++i) {
        Index best = -1;
        Real best_dist = std::numeric_limits<Real>::infinity();
        for (Index j = 0; j < reference.size(); ++j) {
            if (claimed[static_cast<std::size_t>(j)])
                continue;
            const Real dist = std::abs(estimates(i) - reference(j));
            if (best < 0 || dist < best_dist) {
                best = j;
                best_dist = dist;
            }
        }
        claimed[static_cast<std::size_t>(best)] = true;
        worst = std::max(worst, detail::finite_or_max(best_dist));
    }
    return worst;
}

/**
 * Iterates `method` from `init` until one of the stopping rules fires:
 * residual, step size, singular sweep, stagnation (10 sweeps without the step
 * shrinking) or the iteration cap.
 */
template <typename Real>
IterationTrace<Real> run(const MethodSpec& method, const Polynomial<Real>& p, const RootVector<Real>& init,
                         const SolveConfig<Real>& cfg, const std::optional<RootVector<Real>>& reference = std::nullopt)
{
    cfg.validate();
    method.validate(p.degree());
    if (init.size() != p.degree())
        throw Error(ErrorCode::DegenerateInput, "initial vector length differs from degree");
    if (!all_finite<Real>(init))
        throw Error(ErrorCode::DegenerateInput, "non-finite initial approximation");
    if (reference && reference->size() != p.degree())
        throw Error(ErrorCode::DegenerateInput, "reference root count differs from degree");

    IterationTrace<Real> trace;
    auto record = [&](int k, RootVector<Real> z, Real step, std::vector<CoordinateFlag> flags) {
        IterationRecord<Real> rec;
        rec.iteration = k;
        rec.max_residual = detail::max_residual(p, z);
        rec.max_step = step;
        if (reference)
            rec.max_error = matched_max_error(z, *reference);
        rec.approximations = std::move(z);
        rec.flags = std::move(flags);
        trace.per_iteration.push_back(std::move(rec));
        return trace.per_iteration.back().max_residual;
    };

    if (record(0, init, Real(0), {}) <= cfg.tol_residual) {
        trace.termination = Termination::ResidualMet;
        return trace;
    }

    StepOptions<Real> opts;
    opts.delta = cfg.collision_delta;
    opts.seed = cfg.seed;

    Real previous_step = std::numeric_limits<Real>::infinity();
    int stalled = 0;
    for (int k = 1;; ++k) {
        const RootVector<Real>& current = trace.per_iteration.back().approximations;
        opts.sweep = static_cast<std::uint64_t>(k);
        StepOutcome<Real> outcome = step(method, p, current, opts);

        const Real max_step = detail::finite_or_max((outcome.next - current).cwiseAbs().maxCoeff());
        bool moved = false;
        bool singular = false;
        for (CoordinateFlag f : outcome.flags) {
            moved = moved || f == CoordinateFlag::Updated || f == CoordinateFlag::CollisionPerturbed;
            singular = singular || f == CoordinateFlag::SingularDenominator;
        }

        const Real residual = record(k, std::move(outcome.next), max_step, std::move(outcome.flags));

        if (residual <= cfg.tol_residual) {
            trace.termination = Termination::ResidualMet;
            break;
        }
        if (singular && !moved) {
            trace.termination = Termination::Singular;
            break;
        }
        if (max_step <= cfg.tol_step) {
            trace.termination = Termination::StepMet;
            break;
        }
        stalled = max_step >= previous_step ? stalled + 1 : 0;
        previous_step = max_step;
        if (stalled >= 10) {
            trace.termination = Termination::Stagnated;
            break;
        }
        if (k >= cfg.max_iter) {
            trace.termination = Termination::MaxIterReached;
            break;
        }
    }
    return trace;
}

/// run() starting from initial_guesses(p).
template <typename Real>
IterationTrace<Real> solve(const MethodSpec& method, const Polynomial<Real>& p, const SolveConfig<Real>& cfg = {},
                           const std::optional<RootVector<Real>>& reference = std::nullopt)
{
    return run(method, p, initial_guesses(p), cfg, reference);
}

/**
 * Limits on max_error for a trace point to count in the order fit. The floor
 * is exclusive. The cap admits values up to cap * (1 + cap_slack), so a start
 * perturbed by exactly `cap` still counts after rounding.
 */
template <typename Real>
struct OrderWindow {
    Real floor = Real(1e-13);
    Real cap = Real(1e-2);
    Real cap_slack = Real(1e-6);

    bool contains(Real e) const { return e > floor && e <= cap * (Real(1) + cap_slack); }
};

/**
 * Least-squares slope of log e_{k+1} against log e_k over consecutive pairs
 * whose errors both lie inside the window. A single pair gives the
 * ratio log e_{k+1} / log e_k and is flagged unreliable.
 */
template <typename Real>
OrderEstimate<Real> estimate_order(const std::vector<Real>& errors, const OrderWindow<Real>& window = {})
{
    auto usable = [&](Real e) { return window.contains(e); };
    std::vector<Real> xs, ys;
    for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
        if (usable(errors[k]) && usable(errors[k + 1])) {
            xs.push_back(std::log(errors[k]));
            ys.push_back(std::log(errors[k + 1]));
        }
    }
    if (xs.empty())
        throw Error(ErrorCode::UnreliableEstimate, "no consecutive errors inside the fitting window");

    OrderEstimate<Real> est;
    est.points_used = static_cast<int>(xs.size());
    if (xs.size() == 1) {
        est.order = ys[0] / xs[0];
        est.reliable = false;
        return est;
    }

    const Real count = Real(xs.size());
    Real mx = 0, my = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= count;
    my /= count;
    Real sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
    }
    if (!(sxx > 0))
        throw Error(ErrorCode::UnreliableEstimate, "errors do not vary across the fitting window");

    est.order = sxy / sxx;
    const Real intercept = my - est.order * mx;
    Real ss = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const Real r = ys[k] - (intercept + est.order * xs[k]);
        ss += r * r;
    }
    est.residual_fit_error = std::sqrt(ss / count);
    est.reliable = true;
    return est;
}

template <typename Real>
OrderEstimate<Real> estimate_order(const IterationTrace<Real>& trace, const OrderWindow<Real>& window = {})
{
    std::vector<Real> errors;
    for (const auto& rec : trace.per_iteration) {
        if (!rec.max_error)
            throw Error(ErrorCode::UnreliableEstimate, "trace has no reference errors");
        errors.push_back(*rec.max_error);
    }
    return estimate_order(errors, window);
}

template <typename Real>
struct StudyRow {
    MethodSpec method;
    int iterations = 0;
    Real final_residual = 0;
    std::optional<Real> final_error;
    std::optional<OrderEstimate<Real>> order;
    std::optional<Termination> termination;
    /// Set when the run itself or the order fit failed.
    std::string error;
};

/// Throws DegenerateInput unless the roots are pairwise distinct.
template <typename Real>
void require_distinct(const RootVector<Real>& roots)
{
    for (Index i = 0; i < roots.size(); ++i)
        for (Index j = i + 1; j < roots.size(); ++j)
            if (!(std::abs(roots(i) - roots(j)) > Real(1e-10) * (Real(1) + std::abs(roots(i)))))
                throw Error(ErrorCode::DegenerateInput, "reference roots are not distinct");
}

/// Each root moved by init_error in a seeded random direction.
template <typename Real>
RootVector<Real> perturbed_roots(const RootVector<Real>& roots, Real init_error, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<Real> angle(0, 2 * std::numbers::pi_v<Real>);
    RootVector<Real> z(roots.size());
    for (Index i = 0; i < roots.size(); ++i)
        z(i) = roots(i) + std::polar(init_error, angle(rng));
    return z;
}

/**
 * Runs every method from the same perturbed copy of the known roots and
 * tabulates iterations, final residual, estimated order and termination.
 * Per-method failures land in the row instead of aborting the study.
 */
template <typename Real>
std::vector<StudyRow<Real>> convergence_study(const Polynomial<Real>& p, const RootVector<Real>& roots,
                                              const std::vector<MethodSpec>& methods, const SolveConfig<Real>& cfg,
                                              Real init_error, std::uint64_t seed)
{
    if (roots.size() != p.degree())
        throw Error(ErrorCode::DegenerateInput, "reference root count differs from degree");
    require_distinct(roots);
    if (!(init_error > 0))
        throw Error(ErrorCode::DegenerateInput, "init_error must be positive");

    const RootVector<Real> init = perturbed_roots(roots, init_error, seed);
    std::vector<StudyRow<Real>> rows;
    for (const MethodSpec& method : methods) {
        StudyRow<Real> row;
        row.method = method;
        try {
            const IterationTrace<Real> trace = run(method, p, init, cfg, std::optional(roots));
            row.iterations = trace.iterations();
            row.final_residual = trace.final().max_residual;
            row.final_error = trace.final().max_error;
            row.termination = trace.termination;
            try {
                row.order = estimate_order(trace);
            }
            catch (const Error& e) {
                row.error = e.what();
            }
        }
        catch (const Error& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace simroots

#endif // SIMROOTS_DRIVER_HPP
