#ifndef SIMROOTS_SYMMETRIC_HPP
#define SIMROOTS_SYMMETRIC_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "common.hpp"
#include "polynomial.hpp"

namespace simroots {

/// Cap on m and d for the exact tables; d! must fit in a signed 64-bit integer.
inline constexpr int kMaxSymbolicOrder = 20;

/**
 * Integer-coefficient polynomial in the elementary symmetric variables e_1 ... e_m.
 *
 * A term is keyed by its exponent multi-index (nu_1, ..., nu_m). Zero
 * coefficients are never stored.
 */
class SymExpr {
public:
    using Exponents = std::vector<int>;
    using TermMap = std::map<Exponents, std::int64_t>;

    explicit SymExpr(int num_vars) : num_vars_(num_vars) {}

    /// The single variable e_k.
    static SymExpr variable(int num_vars, int k);

    int num_vars() const { return num_vars_; }
    const TermMap& terms() const { return terms_; }
    std::int64_t coefficient(const Exponents& nu) const;

    void add_term(const Exponents& nu, std::int64_t coeff);

    SymExpr& operator+=(const SymExpr& other);
    SymExpr scaled(std::int64_t factor) const;
    /// Product with e_k.
    SymExpr times_variable(int k) const;

    /// sum_k k * nu_k
    static int weight(const Exponents& nu);
    bool is_isobaric(int w) const;

    /// e.g. "e1^3 - 3*e1*e2 + 3*e3"
    std::string to_string() const;

    /// Value at e_k = e[k-1]; missing trailing entries count as zero.
    template <typename Real>
    Complex<Real> evaluate(std::span<const Complex<Real>> e) const;

    /**
     * Value of scale^w * expr(g_1/scale, ..., g_m/scale) for an isobaric expr of
     * weight w, computed without dividing by scale. Each term becomes
     * coeff * prod g_k^{nu_k} * scale^{w - sum nu_k}.
     */
    template <typename Real>
    Complex<Real> evaluate_homogenized(std::span<const Complex<Real>> g, const Complex<Real>& scale,
                                       int w) const;

private:
    int num_vars_;
    TermMap terms_;
};

/// u_m: the power sum p_m written in e_1 ... e_m, built with Newton's recurrence.
SymExpr power_sum_in_elementary(int m);

/// Memoized power_sum_in_elementary; safe to call from several threads.
const SymExpr& power_sum_table(int m);

struct PartitionTerm {
    /// r_1 ... r_d with sum_j j * r_j = d
    std::vector<int> multiplicities;
    /// d! / prod_j (r_j! j^{r_j})
    std::int64_t weight;
};

struct PartitionTermTable {
    int degree = 0;
    std::vector<PartitionTerm> terms;
};

/// All partitions of d, reverse-lexicographic in (r_d, ..., r_1), with exact weights.
PartitionTermTable partition_table(int d);

/// Memoized partition_table; safe to call from several threads.
const PartitionTermTable& partition_table_cached(int d);

/// Evaluates sum_terms weight * prod_j x[j-1]^{r_j}.
template <typename Real>
Complex<Real> eval_partition_sum(const PartitionTermTable& table, std::span<const Complex<Real>> x)
{
    Complex<Real> total(0);
    for (const auto& term : table.terms) {
        Complex<Real> prod{Real(term.weight)};
        for (std::size_t j = 0; j < term.multiplicities.size(); ++j)
            for (int r = 0; r < term.multiplicities[j]; ++r)
                prod *= x[j];
        total += prod;
    }
    return total;
}

// ---------------------------------------------------------------------------
// numeric evaluation

template <typename Real>
Complex<Real> SymExpr::evaluate(std::span<const Complex<Real>> e) const
{
    Complex<Real> total(0);
    for (const auto& [nu, coeff] : terms_) {
        Complex<Real> prod{Real(coeff)};
        for (std::size_t k = 0; k < nu.size(); ++k) {
            if (nu[k] == 0)
                continue;
            const Complex<Real> ek = k < e.size() ? e[k] : Complex<Real>(0);
            for (int r = 0; r < nu[k]; ++r)
                prod *= ek;
        }
        total += prod;
    }
    return total;
}

template <typename Real>
Complex<Real> SymExpr::evaluate_homogenized(std::span<const Complex<Real>> g, const Complex<Real>& scale,
                                            int w) const
{
    Complex<Real> total(0);
    for (const auto& [nu, coeff] : terms_) {
        Complex<Real> prod{Real(coeff)};
        int factors = 0;
        for (std::size_t k = 0; k < nu.size(); ++k) {
            if (nu[k] == 0)
                continue;
            const Complex<Real> gk = k < g.size() ? g[k] : Complex<Real>(0);
            for (int r = 0; r < nu[k]; ++r)
                prod *= gk;
            factors += nu[k];
        }
        for (int r = factors; r < w; ++r)
            prod *= scale;
        total += prod;
    }
    return total;
}

/**
 * F_m(z) evaluated as u_m(f'/f, f''/(2! f), ..., f^{(n)}/(n! f)).
 * Throws EvaluationAtRoot when f(z) = 0.
 */
template <typename Real>
Complex<Real> eval_F_m(const Polynomial<Real>& p, const Complex<Real>& z, int m)
{
    if (m < 1)
        throw Error(ErrorCode::DegenerateInput, "F_m needs m >= 1");
    const int order = std::min(m, p.degree());
    const ComplexVector<Real> taylor = taylor_coefficients(p, z, order);
    const Complex<Real> f = taylor(0);
    if (f == Complex<Real>(0))
        throw Error(ErrorCode::EvaluationAtRoot, "F_m is singular at a root");

    std::vector<Complex<Real>> e(m, Complex<Real>(0));
    for (int k = 1; k <= order; ++k)
        e[k - 1] = taylor(k) / f;
    const Complex<Real> value = power_sum_table(m).evaluate<Real>(e);
    if (!is_finite(value))
        throw Error(ErrorCode::NumericOverflow, "F_m overflowed");
    return value;
}

/// f(z)^m F_m(z); finite at roots of f. `taylor` holds f^{(k)}(z)/k! for k = 0..min(m, n).
template <typename Real>
Complex<Real> eval_F_m_scaled(const ComplexVector<Real>& taylor, int m)
{
    std::vector<Complex<Real>> g(m, Complex<Real>(0));
    for (Index k = 1; k < taylor.size() && k <= m; ++k)
        g[k - 1] = taylor(k);
    return power_sum_table(m).evaluate_homogenized<Real>(g, taylor(0), m);
}

/// S_1 ... S_r of the lagged sums sum_j 1/(z - w_j)^r.
template <typename Real>
struct LaggedSums {
    ComplexVector<Real> values;

    /// S_r, 1-based.
    const Complex<Real>& operator()(int r) const { return values(r - 1); }
    std::span<const Complex<Real>> span() const { return {values.data(), static_cast<std::size_t>(values.size())}; }
};

template <typename Real>
Real default_collision_delta(const Complex<Real>& z)
{
    return Real(1e-12) * std::max(Real(1), std::abs(z));
}

/**
 * Lagged sums over points(j) for every j != exclude. Pass exclude = -1 to use
 * every point. Throws CollisionDetected with the offending index when
 * |z - points(j)| < delta.
 */
template <typename Real>
LaggedSums<Real> lagged_sums(const Complex<Real>& z, const ComplexVector<Real>& points, Index exclude,
                             int r_max, Real delta)
{
    LaggedSums<Real> s{ComplexVector<Real>::Zero(r_max)};
    for (Index j = 0; j < points.size(); ++j) {
        if (j == exclude)
            continue;
        const Complex<Real> diff = z - points(j);
        if (!(std::abs(diff) >= delta) || diff == Complex<Real>(0))
            throw Error(ErrorCode::CollisionDetected, "coincident approximations", j);
        const Complex<Real> q = Complex<Real>(1) / diff;
        Complex<Real> power = q;
        for (int r = 0; r < r_max; ++r) {
            s.values(r) += power;
            power *= q;
        }
    }
    return s;
}

template <typename Real>
LaggedSums<Real> lagged_sums(const Complex<Real>& z, const ComplexVector<Real>& others, int r_max)
{
    return lagged_sums<Real>(z, others, -1, r_max, default_collision_delta(z));
}

/// H_d = sum over partitions of d of weight * prod S_j^{r_j}.
template <typename Real>
Complex<Real> eval_H(const PartitionTermTable& table, const LaggedSums<Real>& s)
{
    if (s.values.size() < table.degree)
        throw Error(ErrorCode::DegenerateInput, "too few lagged sums for H_d");
    return eval_partition_sum<Real>(table, s.span());
}

template <typename Real>
Complex<Real> eval_H(int d, const LaggedSums<Real>& s)
{
    return eval_H<Real>(partition_table_cached(d), s);
}

/// v_m(z) = sum_{l=0..m} a_{n-m+l} C(n-m+l, n-m) z^l.
template <typename Real>
Complex<Real> eval_v_m(const Polynomial<Real>& p, const Complex<Real>& z, int m)
{
    const int n = p.degree();
    if (m < 1 || m > n)
        throw Error(ErrorCode::DegenerateInput, "v_m needs 1 <= m <= n");
    Complex<Real> acc(0);
    for (int l = m; l >= 0; --l)
        acc = acc * z + p.coeff(n - m + l) * Real(binomial(n - m + l, n - m));
    return acc;
}

/**
 * c_{m;i} = e_m(z - w_1, ..., z - w_{n-1}) over the points `others`, from the
 * closed form in z and the power sums b_k = sum_j w_j^k.
 */
template <typename Real>
Complex<Real> eval_c_mi(const Complex<Real>& z, const ComplexVector<Real>& others, int m)
{
    const Index n_minus_1 = others.size();
    if (m < 0 || m > n_minus_1)
        throw Error(ErrorCode::DegenerateInput, "c_{m;i} needs 0 <= m <= n-1");
    if (m > kMaxSymbolicOrder)
        throw Error(ErrorCode::DegenerateInput, "c_{m;i} order exceeds table cap");
    if (m == 0)
        return Complex<Real>(1);

    // negated power sums -b_1 ... -b_m
    std::vector<Complex<Real>> neg_b(m, Complex<Real>(0));
    for (Index j = 0; j < n_minus_1; ++j) {
        Complex<Real> power = others(j);
        for (int k = 0; k < m; ++k) {
            neg_b[k] -= power;
            power *= others(j);
        }
    }

    Complex<Real> acc(0);
    for (int l = m; l >= 0; --l) {
        const int k = m - l;
        Complex<Real> inner(1);
        if (k > 0)
            inner = eval_partition_sum<Real>(partition_table_cached(k), neg_b) / Real(factorial(k));
        acc = acc * z + Real(binomial(n_minus_1 - m + l, l)) * inner;
    }
    return acc;
}

} // namespace simroots

#endif // SIMROOTS_SYMMETRIC_HPP
