#ifndef SIMROOTS_ORACLE_HPP
#define SIMROOTS_ORACLE_HPP

// Brute-force reference computations. Tests and the selftest compare the
// production routines against these; nothing on the solve path calls them.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "common.hpp"
#include "polynomial.hpp"

namespace simroots::oracle {

/// e_k(x) by expanding prod_j (1 + x_j t) column by column.
template <typename Real>
Complex<Real> elementary_symmetric_direct(const ComplexVector<Real>& x, int k)
{
    const Index n = x.size();
    if (k < 0 || k > n)
        throw Error(ErrorCode::DegenerateInput, "k out of range for e_k");
    std::vector<Complex<Real>> e(n + 1, Complex<Real>(0));
    e[0] = Complex<Real>(1);
    for (Index j = 0; j < n; ++j)
        for (Index c = j + 1; c >= 1; --c)
            e[c] += x(j) * e[c - 1];
    return e[k];
}

template <typename Real>
Complex<Real> power_sum_direct(const ComplexVector<Real>& x, int m)
{
    Complex<Real> s(0);
    for (Index j = 0; j < x.size(); ++j) {
        Complex<Real> power(1);
        for (int r = 0; r < m; ++r)
            power *= x(j);
        s += power;
    }
    return s;
}

/// h_k(x) summed over every size-k multiset of indices.
template <typename Real>
Complex<Real> homogeneous_direct(const ComplexVector<Real>& x, int k)
{
    const Index n = x.size();
    if (k < 0 || n > 8 || k > 6)
        throw Error(ErrorCode::DegenerateInput, "homogeneous_direct limited to n <= 8, k <= 6");
    if (k == 0)
        return Complex<Real>(1);
    if (n == 0)
        return Complex<Real>(0);

    std::vector<Index> idx(k, 0);
    Complex<Real> total(0);
    while (true) {
        Complex<Real> prod(1);
        for (Index j : idx)
            prod *= x(j);
        total += prod;

        // next non-decreasing index tuple
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == n - 1)
            --pos;
        if (pos < 0)
            break;
        ++idx[pos];
        for (int q = pos + 1; q < k; ++q)
            idx[q] = idx[pos];
    }
    return total;
}

/**
 * ((-1)^{m-1}/(m-1)!) d^{m-1}/dz^{m-1} (f'/f) by central differences,
 * step h = 1e-5 (1 + |z|). Only m = 1, 2, 3.
 */
template <typename Real>
Complex<Real> f_m_finite_difference(const Polynomial<Real>& p, const Complex<Real>& z, int m)
{
    if (m < 1 || m > 3)
        throw Error(ErrorCode::DegenerateInput, "finite-difference F_m supports m = 1..3");

    auto log_derivative = [&](const Complex<Real>& w) {
        const ComplexVector<Real> d = eval_derivatives(p, w, 1);
        if (d(0) == Complex<Real>(0))
            throw Error(ErrorCode::EvaluationAtRoot, "f vanishes on the stencil");
        return d(1) / d(0);
    };

    const Complex<Real> g0 = log_derivative(z);
    if (m == 1)
        return g0;

    const Real h = Real(1e-5) * (Real(1) + std::abs(z));
    const Complex<Real> gp = log_derivative(z + h);
    const Complex<Real> gm = log_derivative(z - h);
    if (m == 2)
        return -(gp - gm) / (Real(2) * h);
    return (gp - Real(2) * g0 + gm) / (h * h) / Real(2);
}

/**
 * n random roots with |root| <= max_modulus and pairwise distance >= min_separation,
 * by rejection sampling.
 */
template <typename Real, typename Rng>
RootVector<Real> random_separated_roots(Rng& rng, int n, Real max_modulus, Real min_separation)
{
    std::uniform_real_distribution<Real> radius(0, 1);
    std::uniform_real_distribution<Real> angle(0, 2 * std::numbers::pi_v<Real>);
    RootVector<Real> roots(n);
    int filled = 0;
    int attempts = 0;
    while (filled < n) {
        if (++attempts > 100000)
            throw Error(ErrorCode::DegenerateInput, "cannot place separated roots");
        const Complex<Real> candidate = std::polar(max_modulus * std::sqrt(radius(rng)), angle(rng));
        bool ok = true;
        for (int j = 0; j < filled && ok; ++j)
            ok = std::abs(candidate - roots(j)) >= min_separation;
        if (ok)
            roots(filled++) = candidate;
    }
    return roots;
}

/// A point at distance >= min_distance from every root, inside radius `box`.
template <typename Real, typename Rng>
Complex<Real> random_point_away_from(Rng& rng, const RootVector<Real>& roots, Real box, Real min_distance)
{
    std::uniform_real_distribution<Real> coord(-box, box);
    for (int attempt = 0; attempt < 100000; ++attempt) {
        const Complex<Real> z(coord(rng), coord(rng));
        bool ok = true;
        for (Index j = 0; j < roots.size() && ok; ++j)
            ok = std::abs(z - roots(j)) >= min_distance;
        if (ok)
            return z;
    }
    throw Error(ErrorCode::DegenerateInput, "cannot place evaluation point");
}

/// Relative error |a - b| / max(|b|, floor).
template <typename Real>
Real relative_error(const Complex<Real>& a, const Complex<Real>& b, Real floor = Real(1e-300))
{
    return std::abs(a - b) / std::max(std::abs(b), floor);
}

} // namespace simroots::oracle

#endif // SIMROOTS_ORACLE_HPP
