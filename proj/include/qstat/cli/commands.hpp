#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "qstat/cli/config.hpp"
#include "qstat/cli/output.hpp"
#include "qstat/qstat.hpp"

namespace qstat::cli {

struct CommandResult {
    Dataset data;
    int status = 0; // 0 ok, 1 a reported check failed
};

/// Evaluates fn(0..n-1) on up to `jobs` threads; results are stored by
/// index, so the order never depends on scheduling. The exception from
/// the lowest failing index is rethrown.
template <typename T>
std::vector<T> parallel_map(std::size_t n, int jobs, const std::function<T(std::size_t)>& fn)
{
    std::vector<T> out(n);
    std::vector<std::exception_ptr> errors(n);
    std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs) : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, std::max<std::size_t>(n, 1));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

inline std::vector<double> linspace(double lo, double hi, int steps)
{
    if (steps < 1) {
        throw UsageError("steps must be >= 1");
    }
    if (lo > hi) {
        throw UsageError("range minimum exceeds maximum");
    }
    std::vector<double> v(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        v[static_cast<std::size_t>(i)] = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
    }
    return v;
}

namespace detail {

using Row = std::vector<Cell>;

inline std::vector<QParam> resolve_q(const RunConfig& c)
{
    std::vector<QParam> out;
    for (double v : c.q) {
        if (!(v > 0.0) || !(v <= 1.0)) {
            throw DomainError("q = " + format_number(v) + " is outside 0 < q <= 1 (q^-1 enters every formula)");
        }
        out.emplace_back(v);
    }
    return out;
}

inline QParam single_q(const RunConfig& c)
{
    const auto qs = resolve_q(c);
    if (qs.size() != 1) {
        throw UsageError(c.command + " takes a single q value");
    }
    return qs.front();
}

inline void require_b_eta(const QParam& q, double eta_min)
{
    const double edge = q.is_classical_limit() ? 0.0 : q.log_inverse();
    if (!(eta_min > edge)) {
        throw DomainError("B-family occupation n = ln((e^eta - 1/q)/(e^eta - q)) / (2 ln q) needs e^eta > 1/q: eta_min = "
                          + format_number(eta_min) + " is not above ln(1/q) = " + format_number(edge));
    }
}

inline Dataset base(const RunConfig& c, std::vector<std::string> columns)
{
    Dataset d;
    d.kind = c.command;
    d.columns = std::move(columns);
    d.metadata = describe(c);
    return d;
}

inline std::string status(const CheckResult& r) { return r.erratum ? "ERRATUM" : (r.passed ? "PASS" : "FAIL"); }

} // namespace detail

inline CommandResult run_occupation(const RunConfig& c)
{
    const QParam q = detail::single_q(c);
    const auto etas = linspace(c.eta_min, c.eta_max, c.steps);
    if (c.family == Family::B) {
        detail::require_b_eta(q, c.eta_min);
        Dataset d = detail::base(c, {"eta", "n_exact", "n_jd", "n_lower", "n_upper"});
        d.rows = parallel_map<detail::Row>(etas.size(), c.jobs, [&](std::size_t i) {
            const double eta = etas[i];
            const auto conv = cf_convergents(q, Eta(eta), 2);
            return detail::Row{eta, b_occupation(q, Eta(eta)), b_occupation_jd(q, std::exp(-eta)), conv[0], conv[1]};
        });
        d.notes.push_back("n_jd is the Jackson-derivative occupation at w = exp(-eta)");
        d.notes.push_back("n_lower and n_upper are the first two continued-fraction convergents; both lie below n_exact");
        return {d, 0};
    }
    Dataset d = detail::base(c, {"eta", "g", "n_exact", "n_arcsin", "n_trace"});
    d.rows = parallel_map<detail::Row>(etas.size(), c.jobs, [&](std::size_t i) {
        const double eta = etas[i];
        const double trace = trace_average(TraceSpec{Family::F, q, eta, 2, Observable::adag_a});
        return detail::Row{eta, f_occupancy_argument(q, Eta(eta)), f_occupation(q, Eta(eta)),
                           f_occupation_arcsin(q, Eta(eta)), trace};
    });
    d.notes.push_back("n_trace is the two-state trace average of a+a, independent of q");
    return {d, 0};
}

inline CommandResult run_bounds(const RunConfig& c)
{
    if (c.family != Family::B) {
        throw UsageError("bounds applies to the B family only");
    }
    const QParam q = detail::single_q(c);
    detail::require_b_eta(q, c.eta_min);
    const auto etas = linspace(c.eta_min, c.eta_max, c.steps);
    Dataset d = detail::base(c, {"eta", "n_lower", "n_upper", "n_exact", "n_upper_alt_shift", "rigorous_upper", "brackets"});
    d.rows = parallel_map<detail::Row>(etas.size(), c.jobs, [&](std::size_t i) {
        const double eta = etas[i];
        const auto p = cf_bounds(q, Eta(eta));
        const auto br = occupation_bracket(q, Eta(eta));
        const double e = std::exp(eta);
        const double alt = e > p.quoted_upper_shift ? p.prefactor / (e - p.quoted_upper_shift) : std::nan("");
        return detail::Row{eta, p.lower, p.upper, p.exact, alt, br.upper, p.brackets() ? 1.0 : 0.0};
    });
    const auto p = cf_bounds(q, Eta(etas.front()));
    d.notes.push_back("prefactor (1/q - q)/(2 ln(1/q)) = " + format_number(p.prefactor, c.precision));
    d.notes.push_back("n_lower shift q = " + format_number(p.lower_shift, c.precision) + ", n_upper shift (q + 1/q)/2 = "
                      + format_number(p.upper_shift, c.precision));
    d.notes.push_back("n_upper_alt_shift uses the alternative shift q + 1/q = "
                      + format_number(p.quoted_upper_shift, c.precision) + " (conflicts with (q + 1/q)/2)");
    d.notes.push_back("convergents increase toward n_exact, so n_upper is not an upper bound; rigorous_upper uses shift 1/q");
    return {d, 0};
}

inline CommandResult run_eos(const RunConfig& c)
{
    const auto qs = detail::resolve_q(c);
    if (c.variable != "z" && c.variable != "density") {
        throw UsageError("--variable must be z or density");
    }
    if (!(c.x_min > 0.0)) {
        throw DomainError("equation-of-state sweep needs x_min > 0 (fugacity and density are positive)");
    }
    if (!(c.temperature > 0.0)) {
        throw DomainError("thermal wavelength h/sqrt(2 pi m k T) needs T > 0");
    }
    const auto xs = linspace(c.x_min, c.x_max, c.steps);
    for (const auto& q : qs) {
        if (c.family == Family::B && c.variable == "z" && !(c.x_max < q.value())) {
            throw DomainError("B-family g_n(q, z) = sum [r] z^r / r^(n+1) needs z < q: x_max = " + format_number(c.x_max)
                              + " with q = " + format_number(q.value()));
        }
        if (c.family == Family::B && c.variable == "density") {
            const double sup = g_n_supremum(q, 1.5);
            if (!(c.x_max < sup)) {
                throw DomainError("B-family density lambda^3/v = g_3/2(q, z) is bounded by " + format_number(sup)
                                  + " at q = " + format_number(q.value()) + "; x_max = " + format_number(c.x_max));
            }
        }
    }
    Dataset d = detail::base(c, {"q", "T", "z", "density", "P_lambda3_over_kT", "pressure", "internal_energy",
                                 "entropy", "number_density", "grand_potential"});
    const std::size_t n = qs.size() * xs.size();
    d.rows = parallel_map<detail::Row>(n, c.jobs, [&](std::size_t i) {
        const QParam& q = qs[i / xs.size()];
        const double x = xs[i % xs.size()];
        GasParams p;
        p.family = c.family;
        p.q = q;
        p.temperature = c.temperature;
        p.mass = c.constants.mass;
        p.multiplicity = c.constants.multiplicity;
        p.units = c.constants.units();
        if (c.variable == "z") {
            p.state = Fugacity{x};
        } else {
            p.state = ReducedDensity{x};
        }
        const auto s = state(p);
        const double lambda3 = s.wavelength * s.wavelength * s.wavelength;
        const double kt = p.units.k * p.temperature;
        return detail::Row{q.value(), c.temperature, s.fugacity, s.number_density * lambda3,
                           s.pressure * lambda3 / kt, s.pressure, s.internal_energy, s.entropy, s.number_density,
                           s.grand_potential};
    });
    return {d, 0};
}

inline CommandResult run_virial(const RunConfig& c)
{
    const auto qs = detail::resolve_q(c);
    if (c.order < 2) {
        throw DomainError("virial expansion needs order K >= 2");
    }
    const auto k = static_cast<std::size_t>(c.order);
    const auto coeffs = parallel_map<std::vector<double>>(qs.size(), c.jobs, [&](std::size_t i) {
        return virial_coefficients(c.family, qs[i], k);
    });
    Dataset d = detail::base(c, {"q", "k", "b_k"});
    for (std::size_t i = 0; i < qs.size(); ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            d.rows.push_back({qs[i].value(), static_cast<double>(j + 1), coeffs[i][j]});
        }
    }
    if (c.family == Family::F) {
        double spread = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            double lo = coeffs[0][j];
            double hi = coeffs[0][j];
            for (const auto& v : coeffs) {
                lo = std::min(lo, v[j]);
                hi = std::max(hi, v[j]);
            }
            spread = std::max(spread, hi - lo);
        }
        d.notes.push_back("F-family coefficients do not depend on q; max spread across q = " + format_number(spread, 3));
    } else {
        d.notes.push_back("b_2 = -(q + 1/q)/2^(7/2)");
    }
    return {d, 0};
}

inline CommandResult run_fock(const RunConfig& c)
{
    const auto qs = detail::resolve_q(c);
    if (c.family == Family::B && c.dim < 2) {
        throw DomainError("B-family Fock representation needs dim >= 2");
    }
    const auto reports = parallel_map<VerificationReport>(qs.size(), c.jobs, [&](std::size_t i) {
        return verify_rep(c.family == Family::B ? build_b_rep(qs[i], static_cast<std::size_t>(c.dim))
                                                : build_f_rep(qs[i]));
    });
    Dataset d = detail::base(c, {"q", "check", "residual", "threshold", "status"});
    int status = 0;
    for (std::size_t i = 0; i < qs.size(); ++i) {
        for (const auto& r : reports[i].checks) {
            d.rows.push_back({qs[i].value(), r.id, r.residual, r.threshold, detail::status(r)});
        }
        status = reports[i].all_passed() ? status : 1;
    }
    if (c.family == Family::B) {
        d.notes.push_back("the algebra relation is checked on states 0..dim-2; the top state is a truncation artifact");
    }
    return {d, status};
}

inline CommandResult run_verify(const RunConfig& c)
{
    const auto report = run_verification_suite();
    Dataset d = detail::base(c, {"check", "residual", "threshold", "status", "note"});
    for (const auto& r : report.checks) {
        std::string inputs;
        for (const auto& [k, v] : r.inputs) {
            inputs += (inputs.empty() ? "" : " ") + k + "=" + format_number(v, 6);
        }
        std::string note = r.note;
        if (!inputs.empty()) {
            note = note.empty() ? inputs : inputs + "; " + note;
        }
        d.rows.push_back({r.id, r.residual, r.threshold, detail::status(r), note});
    }
    d.notes.push_back(std::to_string(report.checks.size()) + " checks, " + std::to_string(report.failures())
                      + " failures, " + std::to_string(report.errata().size()) + " errata");
    return {d, report.all_passed() ? 0 : 1};
}

/// q -> 1 regression: the analytic q = 1 branch against Bose-Einstein and
/// Fermi-Dirac to 1e-14, and q = 1 - 1e-9 to 1e-6 relative.
inline CommandResult run_limits(const RunConfig& c)
{
    if (!(c.eta_min > 0.0)) {
        throw DomainError("Bose-Einstein reference 1/(e^eta - 1) needs eta > 0: eta_min = " + format_number(c.eta_min));
    }
    const auto etas = linspace(c.eta_min, c.eta_max, c.steps);
    struct Case {
        Family family;
        double q;
        double tolerance;
    };
    const Case cases[] = {{Family::B, 1.0, 1e-14}, {Family::B, 1.0 - 1e-9, 1e-6},
                          {Family::F, 1.0, 1e-14}, {Family::F, 1.0 - 1e-9, 1e-6}};
    Dataset d = detail::base(c, {"family", "q", "eta", "value", "reference", "rel_error", "threshold", "status"});
    const std::size_t n = std::size(cases) * etas.size();
    d.rows = parallel_map<detail::Row>(n, c.jobs, [&](std::size_t i) {
        const Case& k = cases[i / etas.size()];
        const double eta = etas[i % etas.size()];
        const QParam q(k.q);
        const double value = k.family == Family::B ? b_occupation(q, Eta(eta)) : f_occupation(q, Eta(eta));
        const double ref = k.family == Family::B ? 1.0 / std::expm1(eta) : 1.0 / (std::exp(eta) + 1.0);
        const double err = std::abs(value - ref) / std::abs(ref);
        return detail::Row{std::string(to_string(k.family)), k.q, eta, value, ref, err, k.tolerance,
                           std::string(err <= k.tolerance ? "PASS" : "FAIL")};
    });
    int status = 0;
    for (const auto& r : d.rows) {
        status = std::get<std::string>(r.back()) == "PASS" ? status : 1;
    }
    return {d, status};
}

inline CommandResult run_command(const RunConfig& c)
{
    if (c.precision < 1 || c.precision > 17) {
        throw UsageError("precision must be between 1 and 17 significant digits");
    }
    if (c.command == "occupation") return run_occupation(c);
    if (c.command == "bounds") return run_bounds(c);
    if (c.command == "eos") return run_eos(c);
    if (c.command == "virial") return run_virial(c);
    if (c.command == "fock") return run_fock(c);
    if (c.command == "verify") return run_verify(c);
    if (c.command == "limits") return run_limits(c);
    throw UsageError("unknown command '" + c.command + "'");
}

} // namespace qstat::cli
