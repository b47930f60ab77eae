#ifndef SIMROOTS_TESTS_HELPERS_HPP
#define SIMROOTS_TESTS_HELPERS_HPP

#include <complex>
#include <initializer_list>

#include "simroots/common.hpp"

namespace testing {

using C = std::complex<double>;
using Vec = simroots::ComplexVector<double>;

inline Vec vec(std::initializer_list<C> values)
{
    Vec v(static_cast<simroots::Index>(values.size()));
    simroots::Index k = 0;
    for (const C& x : values)
        v(k++) = x;
    return v;
}

inline bool close(const C& a, const C& b, double tol)
{
    return std::abs(a - b) <= tol;
}

inline double max_abs_diff(const Vec& a, const Vec& b)
{
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace testing

#endif // SIMROOTS_TESTS_HELPERS_HPP
