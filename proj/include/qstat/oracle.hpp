#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "qstat/algebra.hpp"
#include "qstat/distributions.hpp"
#include "qstat/errors.hpp"
#include "qstat/family.hpp"
#include "qstat/qcore.hpp"

namespace qstat {

/// Operators whose single-mode grand-canonical mean the oracle can form.
enum class Observable { number, q_pow_number, q_pow_minus_number, basic_number, adag_a, a_adag };

inline std::string to_string(Observable o)
{
    switch (o) {
    case Observable::number: return "N";
    case Observable::q_pow_number: return "q^N";
    case Observable::q_pow_minus_number: return "q^-N";
    case Observable::basic_number: return "[N]";
    case Observable::adag_a: return "a+a";
    case Observable::a_adag: return "aa+";
    }
    return "?";
}

/// Single mode with H = N (E - mu), weights e^{-eta n}. `n_max` is the
/// largest truncation the adaptive evaluation may use (F family: always
/// the two states n = 0, 1).
struct TraceSpec {
    Family family = Family::B;
    QParam q{1.0};
    double eta = 1.0;
    std::size_t n_max = 4096;
    Observable observable = Observable::number;
};

struct TraceResult {
    double value;
    std::size_t n_used; // highest Fock state included
};

namespace detail {

/// True when O(n) grows like q^-n, so the weighted sum needs q^-1 e^-eta < 1.
inline bool grows_like_q_inverse(Observable o)
{
    return o == Observable::q_pow_minus_number || o == Observable::basic_number || o == Observable::adag_a
           || o == Observable::a_adag;
}

inline void validate_trace(const TraceSpec& s)
{
    if (s.family == Family::F) {
        return;
    }
    if (!(s.eta > 0.0)) {
        throw DomainError("B-family trace requires eta > 0 (geometric weights e^{-eta n} must decay)");
    }
    if (grows_like_q_inverse(s.observable) && !s.q.is_classical_limit() && !(s.eta > s.q.log_inverse())) {
        throw DomainError("B-family trace of " + to_string(s.observable)
                          + " requires exp(eta) > 1/q so that sum q^-n e^{-eta n} converges");
    }
}

/// O(n) e^{-eta n} for the B family, assembled in log space so that
/// q^-n and e^{-eta n} never over/underflow separately.
inline double b_weighted_term(const TraceSpec& s, std::size_t n_int)
{
    const double n = static_cast<double>(n_int);
    const double l = s.q.is_classical_limit() ? 0.0 : s.q.log_inverse();
    const double w = std::exp(-s.eta * n);
    switch (s.observable) {
    case Observable::number: return n * w;
    case Observable::q_pow_number: return std::exp(-n * (s.eta + l));
    case Observable::q_pow_minus_number: return std::exp(n * (l - s.eta));
    case Observable::basic_number:
    case Observable::adag_a:
        if (s.q.is_classical_limit()) {
            return n * w;
        }
        // [n] = q^{1-n} (1 - q^{2n})/(1 - q^2)
        return std::exp(n * (l - s.eta) - l) * std::expm1(-2.0 * l * n) / std::expm1(-2.0 * l);
    case Observable::a_adag:
        if (s.q.is_classical_limit()) {
            return (n + 1.0) * w;
        }
        return std::exp(n * (l - s.eta)) * std::expm1(-2.0 * l * (n + 1.0)) / std::expm1(-2.0 * l);
    }
    return 0.0;
}

inline double f_observable(const TraceSpec& s, int n)
{
    const double beta_n = n == 1 ? 1.0 : 0.0;
    switch (s.observable) {
    case Observable::number: return n;
    case Observable::q_pow_number: return s.q.pow(n);
    case Observable::q_pow_minus_number: return s.q.pow(-n);
    case Observable::basic_number: return basic_number(s.q, n);
    case Observable::adag_a: return beta_n;
    case Observable::a_adag: return s.q.pow(-n) - s.q.inverse() * beta_n;
    }
    return 0.0;
}

} // namespace detail

/// Truncated sum over n = 0..n_fixed (scalar spectral route).
inline double trace_average_fixed(const TraceSpec& spec, std::size_t n_fixed)
{
    detail::validate_trace(spec);
    if (spec.family == Family::F) {
        const double w = std::exp(-spec.eta);
        return (detail::f_observable(spec, 0) + w * detail::f_observable(spec, 1)) / (1.0 + w);
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t n = 0; n <= n_fixed; ++n) {
        num += detail::b_weighted_term(spec, n);
        den += std::exp(-spec.eta * static_cast<double>(n));
    }
    return num / den;
}

/// Tr(e^{-beta H} O)/Tr(e^{-beta H}) with the truncation grown
/// geometrically (32, 64, ...) until the first dropped term of numerator
/// and denominator is below 1e-15 of the partial sums.
inline TraceResult trace_average_detailed(const TraceSpec& spec)
{
    detail::validate_trace(spec);
    if (spec.family == Family::F) {
        return {trace_average_fixed(spec, 1), 1};
    }
    constexpr double tail = 1e-15;
    double num = 0.0;
    double den = 0.0;
    std::size_t next = 0;
    for (std::size_t cap = 32;; cap *= 2) {
        const std::size_t limit = std::min(cap, spec.n_max);
        for (; next <= limit; ++next) {
            num += detail::b_weighted_term(spec, next);
            den += std::exp(-spec.eta * static_cast<double>(next));
        }
        const double dropped_num = std::abs(detail::b_weighted_term(spec, limit + 1));
        const double dropped_den = std::exp(-spec.eta * static_cast<double>(limit + 1));
        if (dropped_num <= tail * std::abs(num) && dropped_den <= tail * den) {
            return {num / den, limit};
        }
        if (limit == spec.n_max) {
            throw ConvergenceError("trace average of " + to_string(spec.observable)
                                   + ": tail bound not met at n_max = " + std::to_string(spec.n_max));
        }
    }
}

inline double trace_average(const TraceSpec& spec) { return trace_average_detailed(spec).value; }

/// Same truncated average formed from the matrix representation:
/// Tr(P W O)/Tr(P W) with W = e^{-eta N} and P projecting on n <= n_fixed.
/// The B representation carries one extra state so that a a+ is exact on
/// every state that is kept.
inline double trace_average_matrix(const TraceSpec& spec, std::size_t n_fixed)
{
    detail::validate_trace(spec);
    const FockRep rep = spec.family == Family::B ? build_b_rep(spec.q, n_fixed + 2) : build_f_rep(spec.q);
    const std::size_t kept = spec.family == Family::B ? n_fixed + 1 : 2;

    Eigen::MatrixXd op;
    switch (spec.observable) {
    case Observable::number: op = rep.number(); break;
    case Observable::q_pow_number: op = rep.function_of_number([&](double n) { return spec.q.pow(n); }); break;
    case Observable::q_pow_minus_number: op = rep.q_pow_minus_number(); break;
    case Observable::basic_number:
        op = rep.function_of_number([&](double n) { return basic_number(spec.q, n); });
        break;
    case Observable::adag_a: op = rep.creation() * rep.annihilation(); break;
    case Observable::a_adag: op = rep.annihilation() * rep.creation(); break;
    }
    const auto k = static_cast<Eigen::Index>(kept);
    Eigen::VectorXd weights(k);
    for (Eigen::Index n = 0; n < k; ++n) {
        weights(n) = std::exp(-spec.eta * static_cast<double>(n));
    }
    const Eigen::MatrixXd weighted = weights.asDiagonal() * op.topLeftCorner(k, k);
    return weighted.trace() / weights.sum();
}

/// |(e^eta - q) <[N]> - <q^-N>| for the B family; zero in exact arithmetic.
inline double check_detailed_trace_identity_b(const QParam& q, double eta, std::size_t n_max = 4096)
{
    TraceSpec s{Family::B, q, eta, n_max, Observable::basic_number};
    const double basic = trace_average(s);
    s.observable = Observable::q_pow_minus_number;
    const double qmn = trace_average(s);
    return std::abs((std::exp(eta) - q.value()) * basic - qmn);
}

/// |(e^eta + q^-1) <a+a> - <q^-N>| over the two F-family states.
inline double check_detailed_trace_identity_f(const QParam& q, double eta)
{
    TraceSpec s{Family::F, q, eta, 2, Observable::adag_a};
    const double occ = trace_average(s);
    s.observable = Observable::q_pow_minus_number;
    const double qmn = trace_average(s);
    return std::abs((std::exp(eta) + q.inverse()) * occ - qmn);
}

/// Relative residual of e^eta = (q^-n + q [n]) / [n] at the occupation n
/// returned by b_occupation.
inline double occupation_equation_residual(const QParam& q, double eta)
{
    const double n = b_occupation(q, Eta(eta));
    const double bn = basic_number(q, n);
    const double rhs = (q.pow(-n) + q.value() * bn) / bn;
    return std::abs(rhs - std::exp(eta)) / std::exp(eta);
}

} // namespace qstat
