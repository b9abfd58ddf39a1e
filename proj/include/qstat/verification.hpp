#pragma once

#include <cmath>
#include <functional>
#include <future>
#include <numbers>
#include <string>
#include <vector>

#include "qstat/algebra.hpp"
#include "qstat/distributions.hpp"
#include "qstat/oracle.hpp"
#include "qstat/power_series.hpp"
#include "qstat/qcore.hpp"
#include "qstat/qfunctions.hpp"
#include "qstat/report.hpp"
#include "qstat/taylor.hpp"
#include "qstat/thermo.hpp"

namespace qstat {

namespace detail {

inline CheckResult erratum(std::string id, std::string description,
                           std::vector<std::pair<std::string, double>> inputs, double discrepancy,
                           std::string note)
{
    CheckResult c = make_check(std::move(id), std::move(description), std::move(inputs), discrepancy, 0.0);
    c.erratum = true;
    c.passed = false;
    c.note = std::move(note);
    return c;
}

inline const std::vector<double>& verify_q_grid()
{
    static const std::vector<double> g{0.3, 0.5, 0.8, 0.95, 1.0};
    return g;
}

// Eta values measured from the domain edge ln(1/q).
inline const std::vector<double>& verify_eta_offsets()
{
    static const std::vector<double> g{0.05, 0.3, 1.0, 3.0};
    return g;
}

inline VerificationReport verify_fock_reps()
{
    VerificationReport r;
    for (double qv : verify_q_grid()) {
        const QParam q(qv);
        r.append(verify_rep(build_b_rep(q, 32)));
        r.append(verify_rep(build_f_rep(q)));
    }
    return r;
}

inline VerificationReport verify_trace_identities()
{
    VerificationReport r;
    for (double qv : verify_q_grid()) {
        const QParam q(qv);
        const double edge = q.is_classical_limit() ? 0.0 : q.log_inverse();
        for (double off : verify_eta_offsets()) {
            const double eta = edge + off;
            r.checks.push_back(make_check("trace.b.cyclic_identity",
                                          "(e^eta - q)<[N]> = <q^-N> over the adaptive B trace",
                                          {{"q", qv}, {"eta", eta}},
                                          check_detailed_trace_identity_b(q, eta), 1e-10));
            r.checks.push_back(make_check("occupation.b.single_variable_equation",
                                          "n satisfies e^eta = (q^-n + q [n]) / [n]", {{"q", qv}, {"eta", eta}},
                                          occupation_equation_residual(q, eta), 1e-12));
        }
        for (double eta : {-2.0, 0.0, 1.0, 4.0}) {
            r.checks.push_back(make_check("trace.f.cyclic_identity",
                                          "(e^eta + q^-1)<a+a> = <q^-N> over the two F states",
                                          {{"q", qv}, {"eta", eta}}, check_detailed_trace_identity_f(q, eta),
                                          1e-14));
        }
    }
    return r;
}

inline VerificationReport verify_matrix_traces()
{
    VerificationReport r;
    const Observable observables[] = {Observable::number,      Observable::q_pow_number,
                                      Observable::q_pow_minus_number, Observable::basic_number,
                                      Observable::adag_a,      Observable::a_adag};
    for (double qv : {0.5, 0.9, 1.0}) {
        const QParam q(qv);
        const double eta = (q.is_classical_limit() ? 0.0 : q.log_inverse()) + 0.5;
        for (Family fam : {Family::B, Family::F}) {
            for (Observable o : observables) {
                const TraceSpec spec{fam, q, eta, 64, o};
                const double scalar = trace_average_fixed(spec, 64);
                const double matrix = trace_average_matrix(spec, 64);
                r.checks.push_back(make_check(std::string("trace.") + std::string(to_string(fam)) + ".matrix_vs_scalar",
                                              "matrix and spectral truncated traces of " + to_string(o),
                                              {{"q", qv}, {"eta", eta}, {"n_max", 64.0}},
                                              std::abs(scalar - matrix) / std::max(1.0, std::abs(scalar)), 1e-12));
            }
        }
    }
    return r;
}

inline VerificationReport verify_domain_coincidence()
{
    VerificationReport r;
    for (double qv : {0.3, 0.5, 0.8}) {
        const QParam q(qv);
        const double edge = q.log_inverse();
        double mismatches = 0.0;
        for (double off : {-0.2, -1e-3, 1e-3, 0.2}) {
            const double eta = edge + off;
            bool trace_ok = true;
            bool occupation_ok = true;
            try {
                detail::validate_trace(TraceSpec{Family::B, q, eta, 4096, Observable::q_pow_minus_number});
            } catch (const DomainError&) {
                trace_ok = false;
            }
            try {
                (void)b_occupation(q, Eta(eta));
            } catch (const DomainError&) {
                occupation_ok = false;
            }
            mismatches += trace_ok == occupation_ok ? 0.0 : 1.0;
        }
        r.checks.push_back(make_check("oracle.b.domain_coincidence",
                                      "q^-N trace converges exactly where the occupation is defined",
                                      {{"q", qv}}, mismatches, 0.0));
    }
    return r;
}

inline VerificationReport verify_continued_fraction()
{
    VerificationReport r;
    for (double qv : verify_q_grid()) {
        const QParam q(qv);
        const double edge = q.is_classical_limit() ? 0.0 : q.log_inverse();
        for (double off : verify_eta_offsets()) {
            const double eta = edge + off;
            const double exact = b_occupation(q, Eta(eta));
            const double cf = cf_convergent(q, Eta(eta), 60);
            r.checks.push_back(make_check("cf.b.closed_form_equivalence",
                                          "60th convergent equals the closed-form occupation",
                                          {{"q", qv}, {"eta", eta}}, std::abs(cf - exact), 1e-12));
            if (!q.is_classical_limit()) {
                const auto br = occupation_bracket(q, Eta(eta));
                const double violation = std::max(0.0, std::max(br.lower - br.exact, br.exact - br.upper));
                r.checks.push_back(make_check("cf.b.rigorous_bracket",
                                              "second convergent <= n <= prefactor / (e^eta - 1/q)",
                                              {{"q", qv}, {"eta", eta}}, violation, 0.0));
            }
        }
    }
    return r;
}

inline VerificationReport verify_errata()
{
    VerificationReport r;
    {
        // Bose limit of the two occupation prefactors.
        const QParam q(1.0 - 1e-9);
        const double eta = 1.0;
        const double bose = 1.0 / std::expm1(eta);
        const double full = b_occupation(q, Eta(eta), OccupationPrefactor::full_log);
        r.checks.push_back(erratum("erratum.occupation_prefactor",
                                   "occupation with prefactor 1/ln q vs 1/(2 ln q^-1)", {{"q", q.value()}, {"eta", eta}},
                                   std::abs(full - bose) / bose,
                                   "1/ln q form tends to 2/(e^eta - 1); the 1/(2 ln q^-1) form is used"));
    }
    {
        const QParam q(0.5);
        const double z = 0.25;
        const double g32 = g_n(q, z, 1.5);
        const double g52 = g_n(q, z, 2.5);
        r.checks.push_back(erratum("erratum.pressure_form", "P lambda^3/kT = g_3/2 vs g_5/2", {{"q", 0.5}, {"z", z}},
                                   std::abs(g32 - g52) / g52,
                                   "g_3/2 pressure contradicts the virial route; P = (kT/lambda^3) g_5/2 is used"));
    }
    {
        const QParam q(0.5);
        const auto p = cf_bounds(q, Eta(std::log(4.0)));
        r.checks.push_back(erratum("erratum.upper_bound_shift",
                                   "second convergent shift (q + 1/q)/2 vs the quoted q + 1/q", {{"q", 0.5}},
                                   std::abs(p.quoted_upper_shift - p.upper_shift),
                                   "derived shift 1.25, quoted 2.5 at q = 1/2"));
        r.checks.push_back(erratum("erratum.second_convergent_below",
                                   "second convergent lies below the occupation, not above",
                                   {{"q", 0.5}, {"eta", std::log(4.0)}}, p.exact - p.upper,
                                   "all convergents increase toward the limit; n^(1) < n^(2) < n"));
    }
    for (double qv : {0.5, 0.8}) {
        const QParam q(qv);
        const auto s = fugacity_series(Family::B, q, 3);
        const PowerSeries inv = revert(s.density);
        const double b2 = basic_number(q, 2.0);
        const double b3 = basic_number(q, 3.0);
        const double quoted = b2 * b2 / 4.0 - b3 / std::pow(3.0, 2.5);
        r.checks.push_back(erratum("erratum.reversion_cubic_coefficient",
                                   "reverted cubic coefficient vs [2]^2/2^2 - [3]/3^(5/2)", {{"q", qv}},
                                   std::abs(inv[3] - quoted),
                                   "reversion gives [2]^2/2^4 - [3]/3^(5/2)"));
    }
    {
        const double g = 0.25;
        const double quoted = 1.0 / std::sqrt(g) + 7.0 * std::sqrt(g) / 6.0 + 149.0 * std::pow(g, 1.5) / 120.0
                               + 2161.0 * std::pow(g, 2.5) / 1680.0;
        const double exact = 2.0 / std::numbers::pi * std::asin(std::sqrt(g));
        const auto ref = taylor_reference(ReferenceFunction::arcsin_sqrt, 2);
        r.checks.push_back(erratum("erratum.arcsin_series_coefficients",
                                   "quoted g-series vs Taylor expansion of (2/pi) arcsin(sqrt g)",
                                   {{"g", g}, {"taylor_c0", ref[0]}, {"taylor_c1", ref[1]}, {"taylor_c2", ref[2]}},
                                   std::abs(quoted - exact),
                                   "expansion starts (2/pi) sqrt(g), not 1/sqrt(g)"));
    }
    {
        const QParam q(0.5);
        const double eta = 0.0;
        const double trace = trace_average(TraceSpec{Family::F, q, eta, 2, Observable::adag_a});
        r.checks.push_back(erratum("erratum.f_trace_occupancy", "two-state <a+a> vs q^-1/(e^eta + q^-1)",
                                   {{"q", 0.5}, {"eta", eta}}, std::abs(trace - f_occupation(q, Eta(eta))),
                                   "trace average is q-independent 1/(e^eta + 1)"));
    }
    {
        r.checks.push_back(erratum("erratum.zero_momentum_prefactor",
                                   "isolated zero-momentum term carries 1/lambda^3", {}, 1.0,
                                   "a single state contributes -kT ln(1 + z/q) with no volume factor"));
    }
    {
        const QParam q(0.5);
        const double eta = std::log(4.0);
        const double n = b_occupation(q, Eta(eta));
        const double mean = trace_average(TraceSpec{Family::B, q, eta, 4096, Observable::q_pow_minus_number});
        r.checks.push_back(erratum("info.q_pow_minus_n_vs_trace", "q^-n at the occupation vs <q^-N>",
                                   {{"q", 0.5}, {"eta", eta}}, std::abs(q.pow(-n) - mean),
                                   "the occupation identifies q^-n with <q^-N> only inside the ratio"));
    }
    return r;
}

} // namespace detail

/// Runs every oracle check group concurrently and concatenates the
/// groups in a fixed order.
inline VerificationReport run_verification_suite()
{
    using Group = std::function<VerificationReport()>;
    const std::vector<Group> groups{detail::verify_fock_reps,       detail::verify_trace_identities,
                                    detail::verify_matrix_traces,    detail::verify_domain_coincidence,
                                    detail::verify_continued_fraction, detail::verify_errata};
    std::vector<std::future<VerificationReport>> pending;
    pending.reserve(groups.size());
    for (const auto& g : groups) {
        pending.push_back(std::async(std::launch::async, g));
    }
    VerificationReport out;
    for (auto& f : pending) {
        out.append(f.get());
    }
    return out;
}

} // namespace qstat
