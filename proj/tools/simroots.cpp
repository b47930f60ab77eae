#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "simroots/io.hpp"
#include "simroots/selftest.hpp"
#include "simroots/simroots.hpp"

namespace {

using namespace simroots;

constexpr int kExitOk = 0;
constexpr int kExitNonConvergence = 1;
constexpr int kExitUsage = 2;

void emit(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "stdout") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw io::InputError("cannot write '" + path + "'");
    out << text;
}

std::ofstream open_for_write(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw io::InputError("cannot write '" + path + "'");
    return out;
}

struct SolveArgs {
    std::string input;
    std::string method = "aberth";
    std::optional<int> m;
    std::optional<int> d;
    double tol = 1e-12;
    int max_iter = 200;
    std::uint64_t seed = 0;
    std::string trace;
    std::string output;
};

int cmd_solve(const SolveArgs& args)
{
    const io::ProblemFile problem = io::load_problem(args.input);
    const MethodSpec method = io::parse_method(args.method, args.m, args.d);
    const Polynomial<double> p = from_coefficients<double>(problem.coefficients);
    method.validate(p.degree());

    SolveConfig<double> cfg;
    cfg.tol_residual = args.tol;
    cfg.max_iter = args.max_iter;
    cfg.seed = args.seed;
    cfg.validate();

    const IterationTrace<double> trace = solve(method, p, cfg, problem.known_roots);

    std::optional<OrderEstimate<double>> order;
    if (problem.known_roots) {
        try {
            order = estimate_order(trace);
        }
        catch (const Error&) {
            // too few points in the fit window; reported as null
        }
    }

    if (!args.trace.empty()) {
        std::ofstream csv = open_for_write(args.trace);
        io::write_trace_csv(csv, trace);
    }
    emit(args.output, io::make_solve_report(problem.label, method, p.degree(), trace, order).dump(2) + "\n");

    switch (trace.termination) {
    case Termination::ResidualMet:
    case Termination::StepMet:
        return kExitOk;
    default:
        std::cerr << "solve did not converge: " << to_string(trace.termination) << "\n";
        return kExitNonConvergence;
    }
}

struct CompareArgs {
    std::string input;
    std::vector<std::string> methods = {"dk", "aberth", "householder:2"};
    double init_error = 1e-2;
    std::uint64_t seed = 0;
    std::string csv;
    std::string output;
};

int cmd_compare(const CompareArgs& args)
{
    const io::ProblemFile problem = io::load_problem(args.input);
    if (!problem.known_roots)
        throw io::InputError("compare needs known_roots in the problem file");

    std::vector<MethodSpec> methods;
    for (const std::string& token : args.methods)
        methods.push_back(io::parse_method_token(token));
    const Polynomial<double> p = from_coefficients<double>(problem.coefficients);
    for (const MethodSpec& method : methods)
        method.validate(p.degree());

    SolveConfig<double> cfg;
    cfg.seed = args.seed;
    const auto rows = convergence_study(p, *problem.known_roots, methods, cfg, args.init_error, args.seed);

    if (!args.csv.empty()) {
        std::ofstream csv = open_for_write(args.csv);
        io::write_compare_csv(csv, rows);
    }
    emit(args.output, io::make_compare_report(problem.label, rows, args.init_error, args.seed).dump(2) + "\n");
    return kExitOk;
}

int cmd_selftest(std::uint64_t seed, bool inject_fault)
{
    selftest::Options opts;
    opts.seed = seed;
    opts.inject_fault = inject_fault;
    bool all = true;
    for (const auto& suite : selftest::run_all(opts)) {
        std::cout << (suite.passed ? "PASS " : "FAIL ") << suite.name << "  cases=" << suite.cases
                  << "  worst=" << suite.worst << "  tol=" << suite.tolerance;
        if (!suite.detail.empty())
            std::cout << "  (" << suite.detail << ")";
        std::cout << "\n";
        all = all && suite.passed;
    }
    return all ? kExitOk : kExitNonConvergence;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Simultaneous polynomial root finder"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "Approximate all roots of one polynomial");
    solve_cmd->add_option("--input", solve_args.input, "Problem file (JSON)")->required();
    solve_cmd->add_option("--method", solve_args.method, "dk|aberth|gargantini|mroot|householder|wlin|wquad")
        ->capture_default_str();
    solve_cmd->add_option("--m", solve_args.m, "Order parameter for mroot, wlin, wquad");
    solve_cmd->add_option("--d", solve_args.d, "Order parameter for householder");
    solve_cmd->add_option("--tol", solve_args.tol, "Residual tolerance")->capture_default_str();
    solve_cmd->add_option("--max-iter", solve_args.max_iter, "Iteration cap")->capture_default_str();
    solve_cmd->add_option("--seed", solve_args.seed, "Seed for collision perturbations")->capture_default_str();
    solve_cmd->add_option("--trace", solve_args.trace, "Write the per-iteration CSV trace here");
    solve_cmd->add_option("--output", solve_args.output, "Report destination (path or stdout)");

    CompareArgs compare_args;
    auto* compare_cmd = app.add_subcommand("compare", "Convergence study from perturbed known roots");
    compare_cmd->add_option("--input", compare_args.input, "Problem file with known_roots")->required();
    compare_cmd->add_option("--methods", compare_args.methods, "Comma list, e.g. dk,aberth,householder:2")
        ->delimiter(',')
        ->capture_default_str();
    compare_cmd->add_option("--init-error", compare_args.init_error, "Initial perturbation size")
        ->capture_default_str();
    compare_cmd->add_option("--seed", compare_args.seed, "Perturbation seed")->capture_default_str();
    compare_cmd->add_option("--csv", compare_args.csv, "Also write the table as CSV");
    compare_cmd->add_option("--output", compare_args.output, "Report destination (path or stdout)");

    std::uint64_t selftest_seed = 0;
    bool inject_fault = false;
    auto* selftest_cmd = app.add_subcommand("selftest", "Run the embedded identity suites");
    selftest_cmd->add_option("--seed", selftest_seed, "Seed for the random cases")->capture_default_str();
    selftest_cmd->add_flag("--inject-fault", inject_fault)->group("");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*solve_cmd)
            return cmd_solve(solve_args);
        if (*compare_cmd)
            return cmd_compare(compare_args);
        return cmd_selftest(selftest_seed, inject_fault);
    }
    catch (const io::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::DegenerateInput ? kExitUsage : kExitNonConvergence;
    }
}
