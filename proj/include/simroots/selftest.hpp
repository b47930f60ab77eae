#ifndef SIMROOTS_SELFTEST_HPP
#define SIMROOTS_SELFTEST_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace simroots::selftest {

struct SuiteResult {
    std::string name;
    bool passed = false;
    /// Largest observed deviation (relative or absolute, per suite).
    double worst = 0;
    double tolerance = 0;
    int cases = 0;
    std::string detail;
};

struct Options {
    std::uint64_t seed = 0;
    /// Scales the default case counts.
    int scale = 1;
    /// Negative control: nudges one production value so its suite must fail.
    bool inject_fault = false;
};

/// f^{(k)}/(k! f) against e_k(1/(z - lambda_j)), every 0 <= k <= n.
SuiteResult check_log_derivative_lemma(std::uint64_t seed, int polynomials, int points_per_polynomial,
                                       bool inject_fault = false);
/// u_m at e_k(x) against the direct power sum.
SuiteResult check_newton_identities(std::uint64_t seed, int cases);
/// Exact u_1..u_3 and H_2..H_4 tables.
SuiteResult check_symbolic_tables();
/// eval_H against d! h_d of the same values.
SuiteResult check_homogeneous_expansion(std::uint64_t seed, int cases);
/// c_{m;i} against e_m of the shifted values and the low-order closed forms; v_m against f e_{n-m}.
SuiteResult check_c_and_v(std::uint64_t seed, int cases);
/// mth_root(1) = aberth = householder(1), mth_root(2) = gargantini, householder(2) = explicit Halley.
SuiteResult check_reduction_identities(std::uint64_t seed, int states);
/// All-but-one coordinate exact: the stepped coordinate lands on its root.
SuiteResult check_one_step_exactness(std::uint64_t seed, int cases_per_method);

std::vector<SuiteResult> run_all(const Options& opts);

} // namespace simroots::selftest

#endif // SIMROOTS_SELFTEST_HPP
