#include "simroots/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace simroots::io {

namespace {

Complex<double> parse_pair(const nlohmann::json& v, const std::string& field)
{
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw InputError(field + ": every entry must be a [re, im] pair of numbers");
    return {v[0].get<double>(), v[1].get<double>()};
}

std::string join_names()
{
    std::string out;
    for (const auto& n : method_names())
        out += (out.empty() ? "" : "|") + n;
    return out;
}

double parse_csv_double(const std::string& cell)
{
    double value = 0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw InputError("bad numeric CSV cell: '" + cell + "'");
    return value;
}

} // namespace

RootVector<double> parse_complex_pairs(const nlohmann::json& arr, const std::string& field)
{
    if (!arr.is_array())
        throw InputError(field + " must be an array of [re, im] pairs");
    RootVector<double> out(static_cast<Index>(arr.size()));
    for (std::size_t k = 0; k < arr.size(); ++k)
        out(static_cast<Index>(k)) = parse_pair(arr[k], field);
    return out;
}

ProblemFile parse_problem(const nlohmann::json& doc)
{
    if (!doc.is_object())
        throw InputError("problem file must be a JSON object");
    if (!doc.contains("coefficients"))
        throw InputError("problem file lacks 'coefficients'");

    ProblemFile problem;
    problem.coefficients = parse_complex_pairs(doc["coefficients"], "coefficients");
    if (problem.coefficients.size() < 2)
        throw InputError("coefficients: need at least two entries");
    if (problem.coefficients(problem.coefficients.size() - 1) == Complex<double>(0))
        throw InputError("coefficients: leading entry must be nonzero");
    if (!all_finite<double>(problem.coefficients))
        throw InputError("coefficients: values must be finite");

    if (doc.contains("known_roots") && !doc["known_roots"].is_null()) {
        RootVector<double> roots = parse_complex_pairs(doc["known_roots"], "known_roots");
        if (roots.size() != problem.degree())
            throw InputError("known_roots: expected " + std::to_string(problem.degree()) + " entries, got " +
                             std::to_string(roots.size()));
        problem.known_roots = std::move(roots);
    }
    if (doc.contains("label")) {
        if (!doc["label"].is_string())
            throw InputError("label must be a string");
        problem.label = doc["label"].get<std::string>();
    }
    return problem;
}

ProblemFile load_problem(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    }
    catch (const nlohmann::json::parse_error& e) {
        throw InputError("'" + path + "' is not valid JSON: " + e.what());
    }
    return parse_problem(doc);
}

const std::vector<std::string>& method_names()
{
    static const std::vector<std::string> names = {"dk", "aberth", "gargantini", "mroot", "householder", "wlin", "wquad"};
    return names;
}

MethodSpec parse_method(const std::string& name, std::optional<int> m, std::optional<int> d)
{
    auto no_param = [&](MethodSpec spec) {
        if (m || d)
            throw InputError("method '" + name + "' takes no --m/--d parameter");
        return spec;
    };
    auto need = [&](std::optional<int> value, std::optional<int> other, const char* flag) {
        if (!value)
            throw InputError("method '" + name + "' requires " + flag);
        if (other)
            throw InputError("method '" + name + "' takes only " + flag);
        if (*value < 1)
            throw InputError(std::string(flag) + " must be a positive integer");
        return *value;
    };

    if (name == "dk")
        return no_param(MethodSpec::durand_kerner());
    if (name == "aberth")
        return no_param(MethodSpec::aberth());
    if (name == "gargantini")
        return no_param(MethodSpec::gargantini());
    if (name == "mroot")
        return MethodSpec::mth_root(need(m, d, "--m"));
    if (name == "householder")
        return MethodSpec::householder(need(d, m, "--d"));
    if (name == "wlin")
        return MethodSpec::weierstrass_linear(need(m, d, "--m"));
    if (name == "wquad")
        return MethodSpec::weierstrass_quadratic(need(m, d, "--m"));
    throw InputError("unknown method '" + name + "'; valid names: " + join_names());
}

MethodSpec parse_method_token(const std::string& token)
{
    const auto colon = token.find(':');
    const std::string name = token.substr(0, colon);
    std::optional<int> param;
    if (colon != std::string::npos) {
        const std::string digits = token.substr(colon + 1);
        int value = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
        if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size())
            throw InputError("bad method parameter in '" + token + "'");
        param = value;
    }
    if (name == "householder")
        return parse_method(name, std::nullopt, param);
    return parse_method(name, param, std::nullopt);
}

std::string method_token(const MethodSpec& method)
{
    switch (method.kind) {
    case MethodKind::DurandKerner: return "dk";
    case MethodKind::Aberth: return "aberth";
    case MethodKind::Gargantini: return "gargantini";
    case MethodKind::MthRoot: return "mroot:" + std::to_string(method.param);
    case MethodKind::Householder: return "householder:" + std::to_string(method.param);
    case MethodKind::WeierstrassLinear: return "wlin:" + std::to_string(method.param);
    case MethodKind::WeierstrassQuadratic: return "wquad:" + std::to_string(method.param);
    }
    return "unknown";
}

nlohmann::json method_descriptor(const MethodSpec& method)
{
    nlohmann::json j;
    const std::string token = method_token(method);
    j["kind"] = token.substr(0, token.find(':'));
    j["name"] = method.name();
    if (method.kind == MethodKind::Householder)
        j["d"] = method.param;
    else if (method.has_param())
        j["m"] = method.param;
    return j;
}

std::string format_real(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

nlohmann::json complex_pair(const Complex<double>& z)
{
    return nlohmann::json::array({z.real(), z.imag()});
}

nlohmann::json make_solve_report(const std::string& label, const MethodSpec& method, int degree,
                                  const IterationTrace<double>& trace,
                                  const std::optional<OrderEstimate<double>>& order)
{
    const auto& last = trace.final();
    nlohmann::json report;
    report["label"] = label;
    report["method"] = method_descriptor(method);
    report["degree"] = degree;
    report["termination"] = to_string(trace.termination);
    report["iterations"] = trace.iterations();

    nlohmann::json approx = nlohmann::json::array();
    for (Index i = 0; i < last.approximations.size(); ++i)
        approx.push_back(complex_pair(last.approximations(i)));
    report["approximations"] = std::move(approx);
    report["final_max_residual"] = last.max_residual;
    report["final_max_error"] = last.max_error ? nlohmann::json(*last.max_error) : nlohmann::json(nullptr);

    if (order) {
        report["estimated_order"] = {{"order", order->order},
                                     {"points_used", order->points_used},
                                     {"residual_fit_error", order->residual_fit_error},
                                     {"reliable", order->reliable}};
    }
    else {
        report["estimated_order"] = nullptr;
    }

    // last-sweep flag per coordinate, plus totals over every sweep
    nlohmann::json last_flags = nlohmann::json::array();
    for (CoordinateFlag f : last.flags)
        last_flags.push_back(to_string(f));
    std::map<std::string, int> totals = {
        {"Updated", 0}, {"AlreadyConverged", 0}, {"SingularDenominator", 0}, {"CollisionPerturbed", 0}};
    for (const auto& rec : trace.per_iteration)
        for (CoordinateFlag f : rec.flags)
            ++totals[to_string(f)];
    report["flags"] = {{"last_sweep", std::move(last_flags)}, {"totals", totals}};
    return report;
}

void write_trace_csv(std::ostream& os, const IterationTrace<double>& trace)
{
    os << "iter,max_residual,max_step,max_error\n";
    for (const auto& rec : trace.per_iteration) {
        os << rec.iteration << ',' << format_real(rec.max_residual) << ',' << format_real(rec.max_step) << ',';
        if (rec.max_error)
            os << format_real(*rec.max_error);
        os << '\n';
    }
}

std::vector<TraceRow> read_trace_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line != "iter,max_residual,max_step,max_error")
        throw InputError("trace CSV header mismatch");
    std::vector<TraceRow> rows;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            cells.push_back(cell);
        if (!line.empty() && line.back() == ',')
            cells.emplace_back();
        if (cells.size() != 4)
            throw InputError("trace CSV row must have four cells: '" + line + "'");
        TraceRow row;
        row.iter = static_cast<int>(parse_csv_double(cells[0]));
        row.max_residual = parse_csv_double(cells[1]);
        row.max_step = parse_csv_double(cells[2]);
        if (!cells[3].empty())
            row.max_error = parse_csv_double(cells[3]);
        rows.push_back(row);
    }
    return rows;
}

nlohmann::json make_compare_report(const std::string& label, const std::vector<StudyRow<double>>& rows,
                                   double init_error, std::uint64_t seed)
{
    nlohmann::json table = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json r;
        r["method"] = method_descriptor(row.method);
        r["iterations"] = row.iterations;
        r["final_residual"] = row.final_residual;
        r["final_error"] = row.final_error ? nlohmann::json(*row.final_error) : nlohmann::json(nullptr);
        if (row.order) {
            r["estimated_order"] = row.order->order;
            r["order_points_used"] = row.order->points_used;
            r["order_reliable"] = row.order->reliable;
        }
        else {
            r["estimated_order"] = nullptr;
            r["order_points_used"] = 0;
            r["order_reliable"] = false;
        }
        r["termination"] = row.termination ? nlohmann::json(to_string(*row.termination)) : nlohmann::json(nullptr);
        r["error"] = row.error.empty() ? nlohmann::json(nullptr) : nlohmann::json(row.error);
        table.push_back(std::move(r));
    }
    return {{"label", label}, {"init_error", init_error}, {"seed", seed}, {"rows", std::move(table)}};
}

void write_compare_csv(std::ostream& os, const std::vector<StudyRow<double>>& rows)
{
    os << "method,iterations,final_residual,estimated_order,termination\n";
    for (const auto& row : rows) {
        os << method_token(row.method) << ',' << row.iterations << ',' << format_real(row.final_residual) << ',';
        if (row.order)
            os << format_real(row.order->order);
        os << ',';
        if (row.termination)
            os << to_string(*row.termination);
        os << '\n';
    }
}

} // namespace simroots::io
