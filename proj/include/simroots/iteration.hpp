#ifndef SIMROOTS_ITERATION_HPP
#define SIMROOTS_ITERATION_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "common.hpp"
#include "polynomial.hpp"
#include "symmetric.hpp"

namespace simroots {

enum class MethodKind {
    DurandKerner,
    Aberth,
    Gargantini,
    MthRoot,
    Householder,
    WeierstrassLinear,
    WeierstrassQuadratic,
};

/// A simultaneous iteration together with its order parameter (m or d) where it has one.
struct MethodSpec {
    MethodKind kind = MethodKind::DurandKerner;
    int param = 0;

    static MethodSpec durand_kerner() { return {MethodKind::DurandKerner, 0}; }
    static MethodSpec aberth() { return {MethodKind::Aberth, 0}; }
    static MethodSpec gargantini() { return {MethodKind::Gargantini, 0}; }
    static MethodSpec mth_root(int m) { return {MethodKind::MthRoot, m}; }
    static MethodSpec householder(int d) { return {MethodKind::Householder, d}; }
    static MethodSpec weierstrass_linear(int m) { return {MethodKind::WeierstrassLinear, m}; }
    static MethodSpec weierstrass_quadratic(int m) { return {MethodKind::WeierstrassQuadratic, m}; }

    bool has_param() const
    {
        return kind == MethodKind::MthRoot || kind == MethodKind::Householder ||
               kind == MethodKind::WeierstrassLinear || kind == MethodKind::WeierstrassQuadratic;
    }

    /// Throws DegenerateInput when the parameter is out of range for degree n.
    void validate(int n) const
    {
        if (!has_param())
            return;
        if (param < 1 || param > kMaxSymbolicOrder)
            throw Error(ErrorCode::DegenerateInput,
                        name() + ": parameter must lie in 1.." + std::to_string(kMaxSymbolicOrder));
        const bool weierstrass =
            kind == MethodKind::WeierstrassLinear || kind == MethodKind::WeierstrassQuadratic;
        // degree 1 has no admissible m; those steps fall back to the exact linear solve
        if (weierstrass && n >= 2 && param > n - 1)
            throw Error(ErrorCode::DegenerateInput, name() + ": m must satisfy m <= n-1");
    }

    std::string name() const
    {
        switch (kind) {
        case MethodKind::DurandKerner: return "DurandKerner";
        case MethodKind::Aberth: return "Aberth";
        case MethodKind::Gargantini: return "Gargantini";
        case MethodKind::MthRoot: return "MthRoot(" + std::to_string(param) + ")";
        case MethodKind::Householder: return "Householder(" + std::to_string(param) + ")";
        case MethodKind::WeierstrassLinear: return "WeierstrassLinear(" + std::to_string(param) + ")";
        case MethodKind::WeierstrassQuadratic: return "WeierstrassQuadratic(" + std::to_string(param) + ")";
        }
        return "Unknown";
    }

    friend bool operator==(const MethodSpec&, const MethodSpec&) = default;
};

enum class CoordinateFlag { Updated, AlreadyConverged, SingularDenominator, CollisionPerturbed };

inline const char* to_string(CoordinateFlag flag)
{
    switch (flag) {
    case CoordinateFlag::Updated: return "Updated";
    case CoordinateFlag::AlreadyConverged: return "AlreadyConverged";
    case CoordinateFlag::SingularDenominator: return "SingularDenominator";
    case CoordinateFlag::CollisionPerturbed: return "CollisionPerturbed";
    }
    return "Unknown";
}

template <typename Real>
struct StepOptions {
    /// Collision threshold factor; approximations closer than delta * max(1, |z_i|) collide.
    Real delta = Real(1e-12);
    std::uint64_t seed = 0;
    /// Sweep counter, mixed into the per-index perturbation stream.
    std::uint64_t sweep = 0;
};

template <typename Real>
struct StepOutcome {
    RootVector<Real> next;
    std::vector<CoordinateFlag> flags;
};

/**
 * The m-th root of `bracket` nearest to `reference`. Ties go to the candidate
 * with the smallest principal argument. Empty when bracket is zero.
 */
template <typename Real>
std::optional<Complex<Real>> select_branch(int m, const Complex<Real>& bracket, const Complex<Real>& reference)
{
    if (bracket == Complex<Real>(0) || !is_finite(bracket))
        return std::nullopt;
    if (m == 1)
        return bracket;

    const Real two_pi = 2 * std::numbers::pi_v<Real>;
    const Real modulus = std::pow(std::abs(bracket), Real(1) / Real(m));
    const Real base_arg = std::arg(bracket) / Real(m);

    std::optional<Complex<Real>> best;
    Real best_dist = 0;
    const Real tie_tol = Real(8) * std::numeric_limits<Real>::epsilon();
    for (int k = 0; k < m; ++k) {
        const Complex<Real> c = std::polar(modulus, base_arg + two_pi * Real(k) / Real(m));
        const Real dist = std::abs(reference - c);
        if (!best) {
            best = c;
            best_dist = dist;
            continue;
        }
        const Real scale = std::max({dist, best_dist, modulus});
        if (dist < best_dist - tie_tol * scale) {
            best = c;
            best_dist = dist;
        }
        else if (dist <= best_dist + tie_tol * scale && std::arg(c) < std::arg(*best)) {
            best = c;
            best_dist = std::min(dist, best_dist);
        }
    }
    return best;
}

namespace detail {

/// num / den, or empty when den is negligible against num or the result is not finite.
template <typename Real>
std::optional<Complex<Real>> guarded_quotient(const Complex<Real>& num, const Complex<Real>& den)
{
    const Real threshold = Real(1e-300) * std::max(Real(1), std::abs(num));
    if (!(std::abs(den) >= threshold) || den == Complex<Real>(0))
        return std::nullopt;
    const Complex<Real> q = num / den;
    if (!is_finite(q))
        return std::nullopt;
    return q;
}

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic unit complex for (seed, sweep, index, attempt).
template <typename Real>
Complex<Real> perturbation_direction(std::uint64_t seed, std::uint64_t sweep, Index i, int attempt)
{
    std::uint64_t key = splitmix64(seed);
    key = splitmix64(key ^ sweep);
    key = splitmix64(key ^ static_cast<std::uint64_t>(i));
    key = splitmix64(key ^ static_cast<std::uint64_t>(attempt));
    // top 53 bits -> [0, 1)
    const Real u = Real(key >> 11) * Real(0x1.0p-53);
    return std::polar(Real(1), 2 * std::numbers::pi_v<Real> * u);
}

template <typename Real>
Complex<Real> int_power(const Complex<Real>& x, int k)
{
    Complex<Real> r(1);
    for (int j = 0; j < k; ++j)
        r *= x;
    return r;
}

template <typename Real>
Real collision_threshold(const Complex<Real>& zi, Real delta)
{
    return delta * std::max(Real(1), std::abs(zi));
}

/// Moves zi off any approximation closer than the collision threshold. Returns false if it cannot.
template <typename Real>
bool separate_from_others(const RootVector<Real>& z, Index i, Complex<Real>& zi, const StepOptions<Real>& opts,
                          bool& perturbed)
{
    constexpr int kMaxAttempts = 16;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        const Real threshold = collision_threshold(zi, opts.delta);
        bool collides = false;
        for (Index j = 0; j < z.size() && !collides; ++j)
            collides = j != i && !(std::abs(zi - z(j)) >= threshold);
        if (!collides)
            return true;
        const Real size = opts.delta * (Real(1) + std::abs(zi)) * std::ldexp(Real(1), attempt);
        zi += size * perturbation_direction<Real>(opts.seed, opts.sweep, i, attempt);
        perturbed = true;
    }
    return false;
}

enum class UpdateStatus { Ok, Converged, Singular };

template <typename Real>
struct IndexUpdate {
    UpdateStatus status;
    Complex<Real> value{};

    static IndexUpdate ok(const Complex<Real>& v) { return {UpdateStatus::Ok, v}; }
    static IndexUpdate converged() { return {UpdateStatus::Converged, {}}; }
    static IndexUpdate singular() { return {UpdateStatus::Singular, {}}; }
    static IndexUpdate from(const std::optional<Complex<Real>>& v)
    {
        return v ? ok(*v) : singular();
    }
};

/**
 * Runs `update(zi, i)` for every index against the unchanged input vector and
 * assembles the outcome. `update` sees the (possibly perturbed) zi.
 */
template <typename Real, typename Update>
StepOutcome<Real> jacobi_sweep(const Polynomial<Real>& p, const RootVector<Real>& z, const StepOptions<Real>& opts,
                               Update&& update)
{
    if (z.size() != p.degree())
        throw Error(ErrorCode::DegenerateInput, "approximation count differs from degree");

    StepOutcome<Real> out{z, std::vector<CoordinateFlag>(static_cast<std::size_t>(z.size()))};
    for (Index i = 0; i < z.size(); ++i) {
        auto& flag = out.flags[static_cast<std::size_t>(i)];
        if (p(z(i)) == Complex<Real>(0)) {
            flag = CoordinateFlag::AlreadyConverged;
            continue;
        }

        Complex<Real> zi = z(i);
        bool perturbed = false;
        if (!separate_from_others(z, i, zi, opts, perturbed)) {
            flag = CoordinateFlag::SingularDenominator;
            continue;
        }

        IndexUpdate<Real> result = IndexUpdate<Real>::singular();
        try {
            result = update(zi, i);
        }
        catch (const Error&) {
            result = IndexUpdate<Real>::singular();
        }

        if (result.status == UpdateStatus::Ok && is_finite(result.value)) {
            out.next(i) = result.value;
            flag = perturbed ? CoordinateFlag::CollisionPerturbed : CoordinateFlag::Updated;
        }
        else if (result.status == UpdateStatus::Converged) {
            flag = CoordinateFlag::AlreadyConverged;
        }
        else {
            flag = CoordinateFlag::SingularDenominator;
        }
    }
    return out;
}

template <typename Real>
ComplexVector<Real> without_index(const RootVector<Real>& z, Index i)
{
    ComplexVector<Real> others(z.size() - 1);
    others << z.head(i), z.tail(z.size() - i - 1);
    return others;
}

template <typename Real>
Complex<Real> product_of_differences(const Complex<Real>& zi, const RootVector<Real>& z, Index i)
{
    Complex<Real> prod(1);
    for (Index j = 0; j < z.size(); ++j)
        if (j != i)
            prod *= zi - z(j);
    return prod;
}

/// Taylor coefficients f^{(k)}/k! for k = 0..order, zero-padded past the degree.
template <typename Real>
ComplexVector<Real> padded_taylor(const Polynomial<Real>& p, const Complex<Real>& z, int order)
{
    ComplexVector<Real> t = ComplexVector<Real>::Zero(order + 1);
    const int available = std::min(order, p.degree());
    t.head(available + 1) = taylor_coefficients(p, z, available);
    return t;
}

template <typename Real>
LaggedSums<Real> lagged_sums_excluding(const Complex<Real>& zi, const RootVector<Real>& z, Index i, int r_max,
                                       const StepOptions<Real>& opts)
{
    return lagged_sums<Real>(zi, z, i, r_max, collision_threshold(zi, opts.delta));
}

template <typename Real>
IndexUpdate<Real> weierstrass_update(const Polynomial<Real>& p, const RootVector<Real>& z, Index i,
                                     const Complex<Real>& zi)
{
    const Complex<Real> f = p(zi);
    if (f == Complex<Real>(0))
        return IndexUpdate<Real>::converged();
    const auto w = guarded_quotient(f, product_of_differences(zi, z, i));
    if (!w)
        return IndexUpdate<Real>::singular();
    return IndexUpdate<Real>::ok(zi - *w);
}

} // namespace detail

/// Durand-Kerner: z_i - f(z_i) / prod_{j != i} (z_i - z_j).
template <typename Real>
StepOutcome<Real> dk_step(const Polynomial<Real>& p, const RootVector<Real>& z, const StepOptions<Real>& opts = {})
{
    return detail::jacobi_sweep(p, z, opts, [&](const Complex<Real>& zi, Index i) {
        return detail::weierstrass_update(p, z, i, zi);
    });
}

/// Maehly-Ehrlich-Aberth in the form z_i - f / (f' - f S_1).
template <typename Real>
StepOutcome<Real> aberth_step(const Polynomial<Real>& p, const RootVector<Real>& z, const StepOptions<Real>& opts = {})
{
    return detail::jacobi_sweep(p, z, opts, [&](const Complex<Real>& zi, Index i) {
        const auto t = detail::padded_taylor(p, zi, 1);
        if (t(0) == Complex<Real>(0))
            return detail::IndexUpdate<Real>::converged();
        const auto s = detail::lagged_sums_excluding(zi, z, i, 1, opts);
        const auto corr = detail::guarded_quotient(t(0), t(1) - t(0) * s(1));
        return detail::IndexUpdate<Real>::from(corr ? std::optional(zi - *corr) : std::nullopt);
    });
}

/**
 * Generalized m-th root method z_i - [F_m - S_m]^{-1/m}, evaluated after
 * multiplying the bracket through by f^m:
 *   z_i - f / c,  c = branch of (f^m F_m - f^m S_m)^{1/m} nearest f'.
 */
template <typename Real>
StepOutcome<Real> mth_root_step(const Polynomial<Real>& p, const RootVector<Real>& z, int m,
                                const StepOptions<Real>& opts = {})
{
    MethodSpec::mth_root(m).validate(p.degree());
    return detail::jacobi_sweep(p, z, opts, [&](const Complex<Real>& zi, Index i) {
        const auto t = detail::padded_taylor(p, zi, std::max(m, 1));
        const Complex<Real> f = t(0);
        if (f == Complex<Real>(0))
            return detail::IndexUpdate<Real>::converged();
        const auto s = detail::lagged_sums_excluding(zi, z, i, m, opts);
        const Complex<Real> scaled_fm = eval_F_m_scaled<Real>(t, m);
        const Complex<Real> bracket = scaled_fm - detail::int_power(f, m) * s(m);
        const auto c = select_branch<Real>(m, bracket, t(1));
        if (!c)
            return detail::IndexUpdate<Real>::singular();
        const auto corr = detail::guarded_quotient(f, *c);
        return detail::IndexUpdate<Real>::from(corr ? std::optional(zi - *corr) : std::nullopt);
    });
}

/// Ostrowski-Gargantini, written out directly: bracket f'^2 - f f'' - f^2 S_2.
template <typename Real>
StepOutcome<Real> gargantini_step(const Polynomial<Real>& p, const RootVector<Real>& z,
                                  const StepOptions<Real>& opts = {})
{
    return detail::jacobi_sweep(p, z, opts, [&](const Complex<Real>& zi, Index i) {
        const auto t = detail::padded_taylor(p, zi, 2);
        const Complex<Real> f = t(0), fp = t(1), fpp = Real(2) * t(2);
        if (f == Complex<Real>(0))
            return detail::IndexUpdate<Real>::converged();
        const auto s = detail::lagged_sums_excluding(zi, z, i, 2, opts);
        const Complex<Real> bracket = fp * fp - f * fpp - f * f * s(2);
        const auto c = select_branch<Real>(2, bracket, fp);
        if (!c)
            return detail::IndexUpdate<Real>::singular();
        const auto corr = detail::guarded_quotient(f, *c);
        return detail::IndexUpdate<Real>::from(corr ? std::optional(zi - *corr) : std::nullopt);
    });
}

/**
 * Simultaneous Householder method of order d + 2:
 *   z_i + d (1/f)^{(d-1)} / [(1/f)^{(d)} + (-1)^{d-1} H_d / f].
 * Both sides are multiplied by f^{d+1} so nothing divides by f.
 */
template <typename Real>
StepOutcome<Real> householder_step(const Polynomial<Real>& p, const RootVector<Real>& z, int d,
                                   const StepOptions<Real>& opts = {})
{
    MethodSpec::householder(d).validate(p.degree());
    const PartitionTermTable& table = partition_table_cached(d);
    return detail::jacobi_sweep(p, z, opts, [&](const Complex<Real>& zi, Index i) {
        ComplexVector<Real> derivs = ComplexVector<Real>::Zero(d + 1);
        const int available = std::min(d, p.degree());
        derivs.head(available + 1) = eval_derivatives(p, zi, available);
        const Complex<Real> f = derivs(0);
        if (f == Complex<Real>(0))
            return detail::IndexUpdate<Real>::converged();

        const ComplexVector<Real> r = scaled_reciprocal_derivatives<Real>(derivs, d);
        const auto s = detail::lagged_sums_excluding(zi, z, i, d, opts);
        const Complex<Real> h = eval_H<Real>(table, s);
        const Real sign = (d % 2 == 1) ? Real(1) : Real(-1);
        const Complex<Real> num = Real(d) * f * r(d - 1);
        const Complex<Real> den = r(d) + sign * h * detail::int_power(f, d);
        const auto corr = detail::guarded_quotient(num, den);
        return detail::IndexUpdate<Real>::from(corr ? std::optional(zi + *corr) : std::nullopt);
    });
}

/// Simultaneous Halley method in its explicit closed form; kept to cross-check householder_step(d = 2).
template <typename Real>
StepOutcome<Real> halley_explicit_step(const Polynomial<Real>& p, const RootVector<Real>& z,
                                       const StepOptions<Real>& opts = {})
{
    return detail::jacobi_sweep(p, z, opts, [&](const Complex<Real>& zi, Index i) {
        const auto t = detail::padded_taylor(p, zi, 2);
        const Complex<Real> f = t(0), fp = t(1), fpp = Real(2) * t(2);
        if (f == Complex<Real>(0))
            return detail::IndexUpdate<Real>::converged();
        const auto s = detail::lagged_sums_excluding(zi, z, i, 2, opts);
        const Complex<Real> den = Real(2) * fp * fp - f * fpp - f * f * (s(2) + s(1) * s(1));
        const auto corr = detail::guarded_quotient(Real(2) * f * fp, den);
        return detail::IndexUpdate<Real>::from(corr ? std::optional(zi - *corr) : std::nullopt);
    });
}

/**
 * Weierstrass-like linearized method:
 *   W_i = f(z_i) / prod_{j != i} (z_i - z_j)
 *   z_i - W_i (c_{m;i} + W_i c_{m-1;i}) / v_m(z_i)
 * m = 1 is the n z + a_{n-1} variant.
 */
template <typename Real>
StepOutcome<Real> weierstrass_linear_step(const Polynomial<Real>& p, const RootVector<Real>& z, int m,
                                          const StepOptions<Real>& opts = {})
{
    MethodSpec::weierstrass_linear(m).validate(p.degree());
    if (p.degree() == 1)
        return dk_step(p, z, opts);
    return detail::jacobi_sweep(p, z, opts, [&](const Complex<Real>& zi, Index i) {
        const Complex<Real> f = p(zi);
        if (f == Complex<Real>(0))
            return detail::IndexUpdate<Real>::converged();
        const auto w = detail::guarded_quotient(f, detail::product_of_differences(zi, z, i));
        if (!w)
            return detail::IndexUpdate<Real>::singular();
        const ComplexVector<Real> others = detail::without_index(z, i);
        const Complex<Real> c_m = eval_c_mi<Real>(zi, others, m);
        const Complex<Real> c_prev = eval_c_mi<Real>(zi, others, m - 1);
        const Complex<Real> v = eval_v_m(p, zi, m);
        const auto corr = detail::guarded_quotient(*w * (c_m + *w * c_prev), v);
        return detail::IndexUpdate<Real>::from(corr ? std::optional(zi - *corr) : std::nullopt);
    });
}

/**
 * Weierstrass-like quadratic method: solves
 *   c_{m-1;i} t^2 - v_m t + W_i c_{m;i} = 0
 * for the smaller-modulus root t and returns z_i - t.
 */
template <typename Real>
StepOutcome<Real> weierstrass_quadratic_step(const Polynomial<Real>& p, const RootVector<Real>& z, int m,
                                             const StepOptions<Real>& opts = {})
{
    MethodSpec::weierstrass_quadratic(m).validate(p.degree());
    if (p.degree() == 1)
        return dk_step(p, z, opts);
    return detail::jacobi_sweep(p, z, opts, [&](const Complex<Real>& zi, Index i) {
        const Complex<Real> f = p(zi);
        if (f == Complex<Real>(0))
            return detail::IndexUpdate<Real>::converged();
        const auto w = detail::guarded_quotient(f, detail::product_of_differences(zi, z, i));
        if (!w)
            return detail::IndexUpdate<Real>::singular();
        const ComplexVector<Real> others = detail::without_index(z, i);
        const Complex<Real> a = eval_c_mi<Real>(zi, others, m - 1);
        const Complex<Real> b = eval_v_m(p, zi, m);
        const Complex<Real> c = *w * eval_c_mi<Real>(zi, others, m);

        // larger root via the sign-matched discriminant, smaller one from the product c/a
        const Complex<Real> disc = std::sqrt(b * b - Real(4) * a * c);
        const Complex<Real> plus = b + disc;
        const Complex<Real> minus = b - disc;
        const Complex<Real> q = std::abs(plus) >= std::abs(minus) ? plus : minus;
        const auto t = detail::guarded_quotient(Real(2) * c, q);
        return detail::IndexUpdate<Real>::from(t ? std::optional(zi - *t) : std::nullopt);
    });
}

/// One Jacobi sweep of `method`.
template <typename Real>
StepOutcome<Real> step(const MethodSpec& method, const Polynomial<Real>& p, const RootVector<Real>& z,
                       const StepOptions<Real>& opts = {})
{
    method.validate(p.degree());
    switch (method.kind) {
    case MethodKind::DurandKerner: return dk_step(p, z, opts);
    case MethodKind::Aberth: return aberth_step(p, z, opts);
    case MethodKind::Gargantini: return gargantini_step(p, z, opts);
    case MethodKind::MthRoot: return mth_root_step(p, z, method.param, opts);
    case MethodKind::Householder: return householder_step(p, z, method.param, opts);
    case MethodKind::WeierstrassLinear: return weierstrass_linear_step(p, z, method.param, opts);
    case MethodKind::WeierstrassQuadratic: return weierstrass_quadratic_step(p, z, method.param, opts);
    }
    throw Error(ErrorCode::DegenerateInput, "unknown method");
}

} // namespace simroots

#endif // SIMROOTS_ITERATION_HPP
