#ifndef SIMROOTS_COMMON_HPP
#define SIMROOTS_COMMON_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace simroots {

template <typename Real>
using Complex = std::complex<Real>;

/// Column vector of complex values; used for coefficients and root estimates.
template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

/// The n current (or exact) root values z_1 ... z_n.
template <typename Real>
using RootVector = ComplexVector<Real>;

using Index = Eigen::Index;

enum class ErrorCode {
    DegenerateInput,
    NumericOverflow,
    EvaluationAtRoot,
    CollisionDetected,
    UnreliableEstimate,
};

inline const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::NumericOverflow: return "NumericOverflow";
    case ErrorCode::EvaluationAtRoot: return "EvaluationAtRoot";
    case ErrorCode::CollisionDetected: return "CollisionDetected";
    case ErrorCode::UnreliableEstimate: return "UnreliableEstimate";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, std::optional<Index> index = std::nullopt)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), index_(index)
    {
    }

    ErrorCode code() const noexcept { return code_; }

    /// Offending position, set for CollisionDetected.
    std::optional<Index> index() const noexcept { return index_; }

private:
    ErrorCode code_;
    std::optional<Index> index_;
};

template <typename Real>
bool is_finite(const Complex<Real>& z)
{
    using std::isfinite;
    return isfinite(z.real()) && isfinite(z.imag());
}

template <typename Real>
bool all_finite(const ComplexVector<Real>& v)
{
    for (Index i = 0; i < v.size(); ++i)
        if (!is_finite(v(i)))
            return false;
    return true;
}

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw Error(ErrorCode::NumericOverflow, "integer addition overflow");
    return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw Error(ErrorCode::NumericOverflow, "integer multiplication overflow");
    return r;
}

} // namespace detail

/// Exact binomial coefficient C(n, k); zero outside 0 <= k <= n.
inline std::int64_t binomial(std::int64_t n, std::int64_t k)
{
    if (k < 0 || n < 0 || k > n)
        return 0;
    if (k > n - k)
        k = n - k;
    std::int64_t result = 1;
    for (std::int64_t j = 1; j <= k; ++j) {
        // result * (n - k + j) is divisible by j at every step
        result = detail::checked_mul(result, n - k + j) / j;
    }
    return result;
}

/// Exact n!; throws NumericOverflow past 20!.
inline std::int64_t factorial(int n)
{
    std::int64_t result = 1;
    for (int j = 2; j <= n; ++j)
        result = detail::checked_mul(result, j);
    return result;
}

} // namespace simroots

#endif // SIMROOTS_COMMON_HPP
