#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace qstat {

/// One line of a verification report.
///
/// `erratum` marks a check whose purpose is to document a conflict between
/// two stated forms of the same quantity; such entries carry the
/// evidence in `residual`/`note` and are never counted as failures.
struct CheckResult {
    std::string id;
    std::string description;
    std::vector<std::pair<std::string, double>> inputs;
    double residual = 0.0;
    double threshold = 0.0;
    bool passed = false;
    bool erratum = false;
    std::string note;
};

struct VerificationReport {
    std::vector<CheckResult> checks;

    bool all_passed() const
    {
        return std::all_of(checks.begin(), checks.end(),
                           [](const CheckResult& c) { return c.erratum || c.passed; });
    }

    std::size_t failures() const
    {
        return static_cast<std::size_t>(std::count_if(
            checks.begin(), checks.end(), [](const CheckResult& c) { return !c.erratum && !c.passed; }));
    }

    std::vector<const CheckResult*> errata() const
    {
        std::vector<const CheckResult*> out;
        for (const auto& c : checks) {
            if (c.erratum) {
                out.push_back(&c);
            }
        }
        return out;
    }

    void append(const VerificationReport& other)
    {
        checks.insert(checks.end(), other.checks.begin(), other.checks.end());
    }

    /// `name: residual=<r> threshold=<t> PASS|FAIL|ERRATUM`, one check per line.
    std::string to_text() const
    {
        std::string out;
        char buf[96];
        for (const auto& c : checks) {
            out += c.id;
            std::snprintf(buf, sizeof buf, ": residual=%.6e threshold=%.3e ", c.residual, c.threshold);
            out += buf;
            out += c.erratum ? "ERRATUM" : (c.passed ? "PASS" : "FAIL");
            if (!c.note.empty()) {
                out += "  # ";
                out += c.note;
            }
            out += '\n';
        }
        return out;
    }
};

inline CheckResult make_check(std::string id, std::string description,
                              std::vector<std::pair<std::string, double>> inputs, double residual,
                              double threshold)
{
    CheckResult c;
    c.id = std::move(id);
    c.description = std::move(description);
    c.inputs = std::move(inputs);
    c.residual = residual;
    c.threshold = threshold;
    c.passed = residual <= threshold;
    return c;
}

} // namespace qstat
