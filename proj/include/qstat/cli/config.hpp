#pragma once

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "qstat/family.hpp"
#include "qstat/qfunctions.hpp"

namespace qstat::cli {

inline constexpr int schema_version = 1;

/// Bad flags, bad config file contents or an unsupported option combination.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Constants {
    double h = 1.0;
    double k = 1.0;
    double mass = 1.0;
    int multiplicity = 1;

    UnitSystem units() const { return {h, k}; }
};

struct RunConfig {
    std::string command;
    Family family = Family::B;
    std::vector<double> q{0.5};
    double eta_min = 0.8;
    double eta_max = 6.0;
    int steps = 100;
    double temperature = 1.0;
    std::string variable = "z"; // eos sweep variable: z or density
    double x_min = 0.01;
    double x_max = 0.4;
    int order = 4;
    int dim = 32;
    std::string format = "csv";
    std::string output;         // empty: stdout
    std::string plot;           // empty: no plot script
    int precision = 15;
    int jobs = 0;               // 0: hardware concurrency
    Constants constants;
};

inline const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names{"occupation", "bounds", "eos", "virial", "fock", "verify", "limits"};
    return names;
}

inline std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
        } catch (const std::exception&) {
            throw UsageError("not a number: '" + item + "'");
        }
    }
    if (out.empty()) {
        throw UsageError("empty value list");
    }
    return out;
}

namespace detail {

template <typename T>
void read_key(const boost::property_tree::ptree& section, const std::string& key, T& target)
{
    if (const auto v = section.get_optional<std::string>(key)) {
        try {
            if constexpr (std::is_same_v<T, std::string>) {
                target = *v;
            } else if constexpr (std::is_same_v<T, int>) {
                target = std::stoi(*v);
            } else {
                target = std::stod(*v);
            }
        } catch (const std::exception&) {
            throw UsageError("config key '" + key + "' has an invalid value '" + *v + "'");
        }
    }
}

inline void apply_section(const boost::property_tree::ptree& s, RunConfig& c)
{
    if (const auto fam = s.get_optional<std::string>("family")) {
        try {
            c.family = parse_family(*fam);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    if (const auto q = s.get_optional<std::string>("q")) {
        c.q = parse_list(*q);
    }
    read_key(s, "eta_min", c.eta_min);
    read_key(s, "eta_max", c.eta_max);
    read_key(s, "steps", c.steps);
    read_key(s, "temperature", c.temperature);
    read_key(s, "variable", c.variable);
    read_key(s, "x_min", c.x_min);
    read_key(s, "x_max", c.x_max);
    read_key(s, "order", c.order);
    read_key(s, "dim", c.dim);
    read_key(s, "format", c.format);
    read_key(s, "precision", c.precision);
    read_key(s, "jobs", c.jobs);
}

inline void apply_constants(const boost::property_tree::ptree& s, Constants& k)
{
    read_key(s, "h", k.h);
    read_key(s, "k", k.k);
    read_key(s, "mass", k.mass);
    read_key(s, "multiplicity", k.multiplicity);
}

} // namespace detail

/// Flat INI file: [general] applies to every command, [<command>] to one
/// command (and wins over [general]), [constants] holds h, k, mass,
/// multiplicity.
inline void apply_config_file(std::istream& in, RunConfig& c)
{
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw UsageError(std::string("config file: ") + e.what());
    }
    for (const auto& [name, section] : tree) {
        if (section.empty() && !section.data().empty()) {
            throw UsageError("config file: key '" + name + "' outside a section");
        }
        const bool known = name == "general" || name == "constants"
                           || std::find(command_names().begin(), command_names().end(), name) != command_names().end();
        if (!known) {
            throw UsageError("config file: unknown section [" + name + "]");
        }
    }
    if (const auto g = tree.get_child_optional("general")) {
        detail::apply_section(*g, c);
    }
    if (const auto s = tree.get_child_optional(c.command)) {
        detail::apply_section(*s, c);
    }
    if (const auto k = tree.get_child_optional("constants")) {
        detail::apply_constants(*k, c.constants);
    }
}

/// QSTAT_CONST_H, QSTAT_CONST_K, QSTAT_CONST_MASS, QSTAT_CONST_MULTIPLICITY.
/// `getenv` is injectable for tests.
template <typename Getenv>
void apply_environment(Constants& k, Getenv&& getenv)
{
    boost::property_tree::ptree s;
    const std::pair<const char*, const char*> keys[] = {{"QSTAT_CONST_H", "h"},
                                                       {"QSTAT_CONST_K", "k"},
                                                       {"QSTAT_CONST_MASS", "mass"},
                                                       {"QSTAT_CONST_MULTIPLICITY", "multiplicity"}};
    for (const auto& [var, key] : keys) {
        if (const char* v = getenv(var)) {
            s.put(key, std::string(v));
        }
    }
    detail::apply_constants(s, k);
}

inline void apply_environment(Constants& k)
{
    apply_environment(k, [](const char* name) -> const char* { return std::getenv(name); });
}

/// Resolved configuration as ordered key/value text, written into every
/// output. Output path, plot path and job count do not affect results and
/// are left out so that outputs compare byte-for-byte.
inline std::vector<std::pair<std::string, std::string>> describe(const RunConfig& c)
{
    auto num = [](double v) {
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    };
    std::string qs;
    for (std::size_t i = 0; i < c.q.size(); ++i) {
        qs += (i ? "," : "") + num(c.q[i]);
    }
    std::vector<std::pair<std::string, std::string>> out{{"command", c.command},
                                                          {"family", std::string(to_string(c.family))},
                                                          {"q", qs}};
    if (c.command == "occupation" || c.command == "bounds" || c.command == "limits") {
        out.emplace_back("eta_min", num(c.eta_min));
        out.emplace_back("eta_max", num(c.eta_max));
        out.emplace_back("steps", std::to_string(c.steps));
    }
    if (c.command == "eos") {
        out.emplace_back("temperature", num(c.temperature));
        out.emplace_back("variable", c.variable);
        out.emplace_back("x_min", num(c.x_min));
        out.emplace_back("x_max", num(c.x_max));
        out.emplace_back("steps", std::to_string(c.steps));
    }
    if (c.command == "virial") {
        out.emplace_back("order", std::to_string(c.order));
    }
    if (c.command == "fock") {
        out.emplace_back("dim", std::to_string(c.dim));
    }
    out.emplace_back("precision", std::to_string(c.precision));
    out.emplace_back("h", num(c.constants.h));
    out.emplace_back("k", num(c.constants.k));
    out.emplace_back("mass", num(c.constants.mass));
    out.emplace_back("multiplicity", std::to_string(c.constants.multiplicity));
    return out;
}

} // namespace qstat::cli
