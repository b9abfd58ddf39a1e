#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "qstat/errors.hpp"
#include "qstat/qparam.hpp"

namespace qstat {

/// eta = beta (E - mu).
struct Eta {
    double value;

    explicit Eta(double v) : value{v}
    {
        if (!std::isfinite(v)) {
            throw DomainError("eta = beta(E - mu) must be finite");
        }
    }
};

/// Which logarithm prefactor to use for the B-anyon occupation.
///
/// `half_log` is 1/(2 ln q^-1), the solution of e^eta = [n+1]/[n] and the
/// form whose q -> 1 limit is 1/(e^eta - 1). `full_log` is 1/ln q^-1,
/// which tends to 2/(e^eta - 1) and is kept only for comparison.
enum class OccupationPrefactor { half_log, full_log };

namespace detail {

inline void require_b_domain(const QParam& q, double eta)
{
    if (!(eta > q.log_inverse())) {
        throw DomainError("B-anyon occupation requires exp(eta) > 1/q (eta > ln(1/q) = "
                          + std::to_string(q.log_inverse()) + "), got eta = " + std::to_string(eta));
    }
}

/// y = (q^-1 - q) / (e^eta - q), in (0, 1) on the B domain.
inline double cf_argument(const QParam& q, double eta)
{
    return q.inverse_minus_q() / (std::exp(eta) - q.value());
}

} // namespace detail

/// Mean occupation of a B-anyon mode,
/// n = -ln(1 - y) / (2 ln q^-1),  y = (q^-1 - q)/(e^eta - q).
///
/// Bose-Einstein 1/(e^eta - 1) in the classical limit.
inline double b_occupation(const QParam& q, Eta eta,
                           OccupationPrefactor prefactor = OccupationPrefactor::half_log)
{
    detail::require_b_domain(q, eta.value);
    const double scale = prefactor == OccupationPrefactor::half_log ? 1.0 : 2.0;
    if (q.is_classical_limit()) {
        return scale / std::expm1(eta.value);
    }
    const double y = detail::cf_argument(q, eta.value);
    return -scale * std::log1p(-y) / (2.0 * q.log_inverse());
}

/// Occupation generated by the Jackson derivative of ln Z,
/// n = ln((1 - w/q)/(1 - q w)) / (q - 1/q) = sum_r [r] w^r / r, with
/// w = z e^{-beta E}. Reduces to w/(1 - w) in the classical limit.
inline double b_occupation_jd(const QParam& q, double w)
{
    if (!(w >= 0.0) || !(w < q.value())) {
        throw DomainError("Jackson-derivative occupation requires 0 <= w < q (series in w/q diverges), got w = "
                          + std::to_string(w));
    }
    if (q.is_classical_limit()) {
        return w / (1.0 - w);
    }
    // (1 - w/q)/(1 - q w) = 1 - (q^-1 - q) w / (1 - q w)
    const double d = q.inverse_minus_q();
    return std::log1p(-d * w / (1.0 - q.value() * w)) / (-d);
}

/// k-th convergent of the continued fraction
///   n = (1/(2 ln q^-1)) * y/(1 - 1^2 y/(2 - 1^2 y/(3 - 2^2 y/(4 - ...)))).
///
/// Level 1 has numerator y; level j >= 2 has numerator -floor(j/2)^2 y and
/// denominator j. k = 1 gives y/(2 ln q^-1); k = 2 gives
/// ((q^-1 - q)/(2 ln q^-1)) / (e^eta - (q + q^-1)/2).
inline std::vector<double> cf_convergents(const QParam& q, Eta eta, std::size_t k_max)
{
    if (k_max == 0) {
        throw std::invalid_argument("cf_convergents: need at least one level");
    }
    detail::require_b_domain(q, eta.value);

    std::vector<double> out;
    out.reserve(k_max);
    if (q.is_classical_limit()) {
        // y -> 0 and prefactor * y -> 1/(e^eta - 1): every convergent collapses.
        out.assign(k_max, 1.0 / std::expm1(eta.value));
        return out;
    }

    const double y = detail::cf_argument(q, eta.value);
    const double prefactor = 1.0 / (2.0 * q.log_inverse());

    // Forward recurrence A_j = b_j A_{j-1} + a_j A_{j-2} (same for B), with
    // A_{-1} = 1, A_0 = 0, B_{-1} = 0, B_0 = 1. Rescaled every 16 levels.
    double a_prev = 1.0, a_cur = 0.0;
    double b_prev = 0.0, b_cur = 1.0;
    for (std::size_t j = 1; j <= k_max; ++j) {
        const double num = j == 1 ? y : -std::pow(static_cast<double>(j / 2), 2) * y;
        const double den = static_cast<double>(j);
        const double a_next = den * a_cur + num * a_prev;
        const double b_next = den * b_cur + num * b_prev;
        a_prev = a_cur;
        a_cur = a_next;
        b_prev = b_cur;
        b_cur = b_next;
        out.push_back(prefactor * a_cur / b_cur);
        if (j % 16 == 0) {
            const double s = 1.0 / std::abs(b_cur);
            a_prev *= s;
            a_cur *= s;
            b_prev *= s;
            b_cur *= s;
        }
    }
    return out;
}

inline double cf_convergent(const QParam& q, Eta eta, std::size_t k)
{
    return cf_convergents(q, eta, k).back();
}

/// First two convergents together with the exact occupation.
///
/// `lower` and `upper` are n^(1) and n^(2). Note that n^(2) is not an
/// upper bound: every convergent of this fraction lies below the limit
/// (all partial numerators after the first are negative), which
/// `brackets()` exposes. `quoted_upper_shift` carries the alternative
/// shift q + 1/q quoted for q = 1/2 next to the derived (q + 1/q)/2.
struct ConvergentPair {
    double lower;
    double upper;
    double exact;
    double prefactor;
    double lower_shift;
    double upper_shift;
    double quoted_upper_shift;

    bool brackets() const noexcept { return lower < exact && exact < upper; }
};

inline ConvergentPair cf_bounds(const QParam& q, Eta eta)
{
    const auto conv = cf_convergents(q, eta, 2);
    ConvergentPair p{};
    p.lower = conv[0];
    p.upper = conv[1];
    p.exact = b_occupation(q, eta);
    p.prefactor = q.is_classical_limit() ? 1.0 : q.inverse_minus_q() / (2.0 * q.log_inverse());
    p.lower_shift = q.value();
    p.upper_shift = 0.5 * (q.value() + q.inverse());
    p.quoted_upper_shift = q.value() + q.inverse();
    return p;
}

/// A bracket that does hold: n^(2) from below and, from ln(1 + u) <= u with
/// u = y/(1 - y), the shifted form ((q^-1 - q)/(2 ln q^-1))/(e^eta - 1/q)
/// from above.
struct OccupationBracket {
    double lower;
    double exact;
    double upper;
};

inline OccupationBracket occupation_bracket(const QParam& q, Eta eta)
{
    const auto conv = cf_convergents(q, eta, 2);
    OccupationBracket b{};
    b.lower = conv[1];
    b.exact = b_occupation(q, eta);
    if (q.is_classical_limit()) {
        b.upper = b.exact;
    } else {
        b.upper = q.inverse_minus_q() / (2.0 * q.log_inverse()) / (std::exp(eta.value) - q.inverse());
    }
    return b;
}

/// g = q^-1 / (e^eta + q^-1).
inline double f_occupancy_argument(const QParam& q, Eta eta) noexcept
{
    if (q.is_classical_limit()) {
        return 1.0 / (std::exp(eta.value) + 1.0);
    }
    return 1.0 / (q.value() * std::exp(eta.value) + 1.0);
}

/// F-anyon occupation q^-1 / (e^eta + q^-1); Fermi-Dirac when q = 1.
inline double f_occupation(const QParam& q, Eta eta) noexcept { return f_occupancy_argument(q, eta); }

/// (2/pi) arcsin(sqrt(g)); satisfies sin^2(n pi / 2) = g.
inline double f_occupation_arcsin(const QParam& q, Eta eta) noexcept
{
    return 2.0 / std::numbers::pi * std::asin(std::sqrt(f_occupancy_argument(q, eta)));
}

/// Coefficient of g^{k + 1/2} in (2/pi) arcsin(sqrt(g)):
/// (2/pi) (2k)! / (4^k (k!)^2 (2k + 1)).
inline std::vector<double> arcsin_sqrt_series_coefficients(std::size_t terms)
{
    std::vector<double> c;
    c.reserve(terms);
    double central = 1.0; // (2k)! / (4^k (k!)^2)
    for (std::size_t k = 0; k < terms; ++k) {
        if (k > 0) {
            central *= (2.0 * static_cast<double>(k) - 1.0) / (2.0 * static_cast<double>(k));
        }
        c.push_back(2.0 / std::numbers::pi * central / (2.0 * static_cast<double>(k) + 1.0));
    }
    return c;
}

/// Partial sum of the half-integer power series of (2/pi) arcsin(sqrt(g)).
inline double f_occupation_series(double g, std::size_t terms)
{
    if (!(g >= 0.0) || !(g < 1.0)) {
        throw DomainError("arcsin occupation series requires 0 <= g < 1 (radius of convergence), got g = "
                          + std::to_string(g));
    }
    const auto c = arcsin_sqrt_series_coefficients(terms);
    double sum = 0.0;
    double power = std::sqrt(g);
    for (double ck : c) {
        sum += ck * power;
        power *= g;
    }
    return sum;
}

} // namespace qstat
