#pragma once

#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qstat/cli/commands.hpp"
#include "qstat/cli/config.hpp"
#include "qstat/cli/output.hpp"

namespace qstat::cli {

enum ExitCode { exit_ok = 0, exit_check_failed = 1, exit_usage = 2, exit_domain = 3 };

using Getenv = std::function<const char*(const char*)>;

namespace detail {

/// Flag values as parsed; each is applied over the config file only when
/// it was given on the command line.
struct FlagValues {
    std::string config;
    std::string family;
    std::string q;
    double eta_min = 0, eta_max = 0, temperature = 0, x_min = 0, x_max = 0;
    int steps = 0, order = 0, dim = 0, precision = 0, jobs = 0;
    std::string variable, format, output, plot;
    double h = 0, k = 0, mass = 0;
    int multiplicity = 0;
};

inline void add_options(CLI::App& sub, FlagValues& f, const std::string& name)
{
    sub.add_option("--config", f.config, "INI config file ([general], [" + name + "], [constants])");
    sub.add_option("--format", f.format, "output format: csv or json");
    sub.add_option("--output,-o", f.output, "output file (default stdout)");
    sub.add_option("--precision", f.precision, "significant digits (default 15)");
    sub.add_option("--jobs,-j", f.jobs, "worker threads (default: all processors)");
    if (name == "verify") {
        return;
    }
    if (name != "limits") {
        sub.add_option("--family", f.family, "b or f");
        sub.add_option("--q", f.q, "q in (0, 1]; comma list where a sweep is allowed");
    }
    if (name == "occupation" || name == "bounds" || name == "limits") {
        sub.add_option("--eta-min", f.eta_min, "smallest eta = beta (E - mu)");
        sub.add_option("--eta-max", f.eta_max, "largest eta");
        sub.add_option("--steps", f.steps, "grid points");
    }
    if (name == "occupation" || name == "bounds" || name == "eos" || name == "virial") {
        sub.add_option("--plot", f.plot, "write a gnuplot script to this file");
    }
    if (name == "eos") {
        sub.add_option("--temperature,-T", f.temperature, "temperature");
        sub.add_option("--variable", f.variable, "sweep variable: z or density (lambda^3/v)");
        sub.add_option("--x-min", f.x_min, "sweep start");
        sub.add_option("--x-max", f.x_max, "sweep end");
        sub.add_option("--steps", f.steps, "grid points");
        sub.add_option("--planck", f.h, "Planck constant h");
        sub.add_option("--boltzmann", f.k, "Boltzmann constant k");
        sub.add_option("--mass", f.mass, "particle mass");
        sub.add_option("--multiplicity", f.multiplicity, "internal degeneracy g_s (F family)");
    }
    if (name == "virial") {
        sub.add_option("--order", f.order, "truncation order K >= 2");
    }
    if (name == "fock") {
        sub.add_option("--dim", f.dim, "B-family Fock dimension");
    }
}

inline bool given(const CLI::App& sub, const std::string& flag)
{
    try {
        return sub.count(flag) > 0;
    } catch (const CLI::OptionNotFound&) {
        return false;
    }
}

inline RunConfig resolve(const CLI::App& sub, const FlagValues& f, const Getenv& getenv)
{
    RunConfig c;
    c.command = sub.get_name();
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) {
            throw UsageError("cannot open config file '" + f.config + "'");
        }
        apply_config_file(in, c);
    }
    apply_environment(c.constants, getenv);
    if (given(sub, "--family")) {
        try {
            c.family = parse_family(f.family);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    if (given(sub, "--q")) c.q = parse_list(f.q);
    if (given(sub, "--eta-min")) c.eta_min = f.eta_min;
    if (given(sub, "--eta-max")) c.eta_max = f.eta_max;
    if (given(sub, "--steps")) c.steps = f.steps;
    if (given(sub, "--temperature")) c.temperature = f.temperature;
    if (given(sub, "--variable")) c.variable = f.variable;
    if (given(sub, "--x-min")) c.x_min = f.x_min;
    if (given(sub, "--x-max")) c.x_max = f.x_max;
    if (given(sub, "--order")) c.order = f.order;
    if (given(sub, "--dim")) c.dim = f.dim;
    if (given(sub, "--format")) c.format = f.format;
    if (given(sub, "--output")) c.output = f.output;
    if (given(sub, "--plot")) c.plot = f.plot;
    if (given(sub, "--precision")) c.precision = f.precision;
    if (given(sub, "--jobs")) c.jobs = f.jobs;
    if (given(sub, "--planck")) c.constants.h = f.h;
    if (given(sub, "--boltzmann")) c.constants.k = f.k;
    if (given(sub, "--mass")) c.constants.mass = f.mass;
    if (given(sub, "--multiplicity")) c.constants.multiplicity = f.multiplicity;
    if (c.format != "csv" && c.format != "json") {
        throw UsageError("unknown output format '" + c.format + "' (expected csv or json)");
    }
    return c;
}

} // namespace detail

/// Parses `args` (without the program name), runs the command and writes
/// the dataset to `out` or the configured file. Returns the exit code.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                   const Getenv& getenv = [](const char* n) -> const char* { return std::getenv(n); })
{
    CLI::App app{"Thermostatistics of q-deformed B- and F-anyon gases"};
    app.name("qstat");
    app.require_subcommand(1);
    detail::FlagValues flags;
    const std::pair<const char*, const char*> commands[] = {
        {"occupation", "occupation numbers on an eta grid"},
        {"bounds", "continued-fraction convergents against the exact B occupation"},
        {"eos", "equation of state over a fugacity or density sweep"},
        {"virial", "virial coefficients by series reversion"},
        {"fock", "matrix representation checks"},
        {"verify", "full oracle verification report"},
        {"limits", "q -> 1 regression against Bose-Einstein and Fermi-Dirac"}};
    for (const auto& [name, help] : commands) {
        detail::add_options(*app.add_subcommand(name, help), flags, name);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        const auto subs = app.get_subcommands();
        out << (subs.empty() ? app.help() : subs.front()->help());
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        const CLI::App* sub = app.get_subcommands().front();
        const RunConfig config = detail::resolve(*sub, flags, getenv);
        const CommandResult result = run_command(config);
        if (config.output.empty()) {
            write_dataset(result.data, config.format, config.precision, out);
        } else {
            std::ofstream file(config.output, std::ios::binary);
            if (!file) {
                throw UsageError("cannot write output file '" + config.output + "'");
            }
            write_dataset(result.data, config.format, config.precision, file);
        }
        if (!config.plot.empty()) {
            const std::string script = emit_plot_script(result.data, config.command, config.precision);
            std::ofstream file(config.plot, std::ios::binary);
            if (!file) {
                throw UsageError("cannot write plot file '" + config.plot + "'");
            }
            file << script;
        }
        if (result.status != 0) {
            err << "one or more checks failed\n";
        }
        return result.status == 0 ? exit_ok : exit_check_failed;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return exit_domain;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const ConvergenceError& e) {
        err << "computation failed: " << e.what() << '\n';
        return exit_check_failed;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_check_failed;
    }
}

} // namespace qstat::cli
