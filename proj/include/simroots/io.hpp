#ifndef SIMROOTS_IO_HPP
#define SIMROOTS_IO_HPP

// Problem files, solve/compare reports and CSV traces. Binary64 only.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "driver.hpp"
#include "iteration.hpp"
#include "polynomial.hpp"

namespace simroots::io {

/// Malformed file or bad command-line value.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ProblemFile {
    std::string label;
    ComplexVector<double> coefficients;
    std::optional<RootVector<double>> known_roots;

    int degree() const { return static_cast<int>(coefficients.size()) - 1; }
};

ProblemFile parse_problem(const nlohmann::json& doc);
ProblemFile load_problem(const std::string& path);

/// Names accepted on the command line, in display order.
const std::vector<std::string>& method_names();

/// e.g. ("householder", std::nullopt, 2). Throws InputError on unknown names or a missing/extra parameter.
MethodSpec parse_method(const std::string& name, std::optional<int> m, std::optional<int> d);

/// "dk", "mroot:3", "householder:2", ...
MethodSpec parse_method_token(const std::string& token);

/// Inverse of parse_method_token.
std::string method_token(const MethodSpec& method);

nlohmann::json method_descriptor(const MethodSpec& method);

/// 17 significant digits.
std::string format_real(double x);

nlohmann::json complex_pair(const Complex<double>& z);
RootVector<double> parse_complex_pairs(const nlohmann::json& arr, const std::string& field);

nlohmann::json make_solve_report(const std::string& label, const MethodSpec& method, int degree,
                                  const IterationTrace<double>& trace,
                                  const std::optional<OrderEstimate<double>>& order);

/// Header iter,max_residual,max_step,max_error; LF endings; max_error empty when unknown.
void write_trace_csv(std::ostream& os, const IterationTrace<double>& trace);

struct TraceRow {
    int iter = 0;
    double max_residual = 0;
    double max_step = 0;
    std::optional<double> max_error;
};

std::vector<TraceRow> read_trace_csv(std::istream& is);

nlohmann::json make_compare_report(const std::string& label, const std::vector<StudyRow<double>>& rows,
                                   double init_error, std::uint64_t seed);

/// Header method,iterations,final_residual,estimated_order,termination.
void write_compare_csv(std::ostream& os, const std::vector<StudyRow<double>>& rows);

} // namespace simroots::io

#endif // SIMROOTS_IO_HPP
