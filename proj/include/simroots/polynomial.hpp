#ifndef SIMROOTS_POLYNOMIAL_HPP
#define SIMROOTS_POLYNOMIAL_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "common.hpp"

namespace simroots {

/// Largest supported degree; n! must stay finite in binary64.
inline constexpr int kMaxDegree = 170;

/**
 * Monic complex polynomial z^n + a_{n-1} z^{n-1} + ... + a_0.
 *
 * Coefficients are stored in ascending order and the leading one is exactly 1.
 * Instances are immutable; build them with from_coefficients() or from_roots().
 */
template <typename Real>
class Polynomial {
public:
    using Scalar = Complex<Real>;

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    const ComplexVector<Real>& coefficients() const { return coeffs_; }

    const Scalar& coeff(int k) const { return coeffs_(k); }

    /// Plain Horner evaluation; never throws.
    Scalar operator()(const Scalar& z) const
    {
        Scalar acc = coeffs_(degree());
        for (int k = degree() - 1; k >= 0; --k)
            acc = acc * z + coeffs_(k);
        return acc;
    }

    template <typename R>
    friend Polynomial<R> from_coefficients(const ComplexVector<R>& raw);

private:
    explicit Polynomial(ComplexVector<Real> monic) : coeffs_(std::move(monic)) {}

    ComplexVector<Real> coeffs_;
};

/// Normalizes to monic by dividing through by the leading coefficient.
template <typename Real>
Polynomial<Real> from_coefficients(const ComplexVector<Real>& raw)
{
    if (raw.size() < 2)
        throw Error(ErrorCode::DegenerateInput, "polynomial needs at least two coefficients");
    if (raw.size() - 1 > kMaxDegree)
        throw Error(ErrorCode::DegenerateInput, "degree exceeds " + std::to_string(kMaxDegree));
    if (!all_finite<Real>(raw))
        throw Error(ErrorCode::DegenerateInput, "non-finite coefficient");

    const Complex<Real> lead = raw(raw.size() - 1);
    if (lead == Complex<Real>(0))
        throw Error(ErrorCode::DegenerateInput, "leading coefficient is zero");

    ComplexVector<Real> monic = raw;
    if (lead != Complex<Real>(1)) {
        monic /= lead;
        if (!all_finite<Real>(monic))
            throw Error(ErrorCode::NumericOverflow, "normalizing to monic overflowed");
    }
    monic(monic.size() - 1) = Complex<Real>(1);
    return Polynomial<Real>(std::move(monic));
}

template <typename Real>
Polynomial<Real> from_coefficients(std::initializer_list<Complex<Real>> raw)
{
    ComplexVector<Real> v(static_cast<Index>(raw.size()));
    std::copy(raw.begin(), raw.end(), v.data());
    return from_coefficients<Real>(v);
}

/// Expands prod_j (z - roots_j) by sequential multiplication.
template <typename Real>
Polynomial<Real> from_roots(const RootVector<Real>& roots)
{
    const Index n = roots.size();
    if (n == 0)
        throw Error(ErrorCode::DegenerateInput, "no roots given");

    ComplexVector<Real> c = ComplexVector<Real>::Zero(n + 1);
    c(0) = Complex<Real>(1);
    for (Index j = 0; j < n; ++j) {
        // multiply the current degree-j polynomial by (z - roots_j)
        for (Index k = j + 1; k >= 1; --k)
            c(k) = c(k - 1) - roots(j) * c(k);
        c(0) = -roots(j) * c(0);
    }
    if (!all_finite<Real>(c))
        throw Error(ErrorCode::NumericOverflow, "root expansion overflowed");
    return from_coefficients<Real>(c);
}

/**
 * Taylor coefficients f^{(k)}(z)/k! for k = 0..order, by repeated synthetic
 * division (one deflation pass per order).
 */
template <typename Real>
ComplexVector<Real> taylor_coefficients(const Polynomial<Real>& p, const Complex<Real>& z, int order)
{
    const int n = p.degree();
    if (order < 0 || order > n)
        throw Error(ErrorCode::DegenerateInput, "derivative order out of range");

    ComplexVector<Real> b = p.coefficients();
    ComplexVector<Real> out(order + 1);
    for (int k = 0; k <= order; ++k) {
        for (int j = n - 1; j >= k; --j)
            b(j) += z * b(j + 1);
        out(k) = b(k);
    }
    if (!all_finite<Real>(out))
        throw Error(ErrorCode::NumericOverflow, "derivative evaluation overflowed");
    return out;
}

/// [f(z), f'(z), ..., f^{(k)}(z)].
template <typename Real>
ComplexVector<Real> eval_derivatives(const Polynomial<Real>& p, const Complex<Real>& z, int k)
{
    ComplexVector<Real> d = taylor_coefficients(p, z, k);
    Real fact = 1;
    for (int j = 2; j <= k; ++j) {
        fact *= Real(j);
        d(j) *= fact;
    }
    if (!all_finite<Real>(d))
        throw Error(ErrorCode::NumericOverflow, "derivative evaluation overflowed");
    return d;
}

/**
 * f^{k+1} (1/f)^{(k)} for k = 0..d, given derivs = [f, f', ..., f^{(d)}].
 *
 * These stay bounded as f -> 0, which is what the Householder-type updates
 * need. Recurrence: R_0 = 1, R_k = -sum_{j=1..k} C(k,j) f^{(j)} f^{j-1} R_{k-j}.
 */
template <typename Real>
ComplexVector<Real> scaled_reciprocal_derivatives(const ComplexVector<Real>& derivs, int d)
{
    const Complex<Real> f = derivs(0);
    ComplexVector<Real> fpow(d + 1);
    fpow(0) = Complex<Real>(1);
    for (int j = 1; j <= d; ++j)
        fpow(j) = fpow(j - 1) * f;

    ComplexVector<Real> r(d + 1);
    r(0) = Complex<Real>(1);
    for (int k = 1; k <= d; ++k) {
        Complex<Real> acc(0);
        for (int j = 1; j <= k; ++j)
            acc += Real(binomial(k, j)) * derivs(j) * fpow(j - 1) * r(k - j);
        r(k) = -acc;
    }
    return r;
}

/// [(1/f)(z), (1/f)'(z), ..., (1/f)^{(d)}(z)] via the Leibniz recurrence.
template <typename Real>
ComplexVector<Real> reciprocal_derivatives(const Polynomial<Real>& p, const Complex<Real>& z, int d)
{
    if (d < 0)
        throw Error(ErrorCode::DegenerateInput, "negative derivative order");
    const int available = std::min(d, p.degree());
    ComplexVector<Real> derivs = ComplexVector<Real>::Zero(d + 1);
    derivs.head(available + 1) = eval_derivatives(p, z, available);

    const Complex<Real> f = derivs(0);
    if (f == Complex<Real>(0))
        throw Error(ErrorCode::EvaluationAtRoot, "1/f is singular at a root");

    const Complex<Real> inv_f = Complex<Real>(1) / f;
    ComplexVector<Real> r(d + 1);
    r(0) = inv_f;
    for (int k = 1; k <= d; ++k) {
        Complex<Real> acc(0);
        for (int j = 1; j <= k; ++j)
            acc += Real(binomial(k, j)) * derivs(j) * r(k - j);
        r(k) = -inv_f * acc;
    }
    if (!all_finite<Real>(r))
        throw Error(ErrorCode::NumericOverflow, "reciprocal derivatives overflowed");
    return r;
}

/// Cauchy bound 1 + max_{k<n} |a_k|.
template <typename Real>
Real root_bound(const Polynomial<Real>& p)
{
    Real m = 0;
    for (int k = 0; k < p.degree(); ++k)
        m = std::max(m, std::abs(p.coeff(k)));
    return Real(1) + m;
}

} // namespace simroots

#endif // SIMROOTS_POLYNOMIAL_HPP
