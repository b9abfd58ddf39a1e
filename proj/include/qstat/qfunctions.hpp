#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "qstat/errors.hpp"
#include "qstat/qcore.hpp"
#include "qstat/qparam.hpp"

namespace qstat {

/// Termination rule shared by the direct series: stop once a term drops
/// below `relative` times the partial sum (and, where a geometric tail
/// bound is available, once that bound is below `absolute_tail`).
struct SeriesControl {
    double relative = 1e-15;
    double absolute_tail = 1e-14;
    std::size_t max_terms = 1'000'000;
};

/// Physical constants used to form the thermal wavelength. Natural units
/// (h = k = 1) unless configured otherwise.
struct UnitSystem {
    double h = 1.0;
    double k = 1.0;

    static constexpr UnitSystem natural() { return {}; }
    static constexpr UnitSystem si() { return {6.62607015e-34, 1.380649e-23}; }
};

/// lambda = h / sqrt(2 pi m k T).
inline double thermal_wavelength(double mass, double temperature, const UnitSystem& units = {})
{
    if (!(mass > 0.0) || !(temperature > 0.0)) {
        throw DomainError("thermal wavelength requires mass > 0 and temperature > 0");
    }
    return units.h / std::sqrt(2.0 * std::numbers::pi * mass * units.k * temperature);
}

/// Ordinary polylogarithm Li_s(x) for 0 <= x < 1 by direct summation.
inline double polylog_series(double s, double x, const SeriesControl& ctl = {})
{
    if (!(x >= 0.0) || !(x < 1.0)) {
        throw DomainError("polylog_series requires 0 <= x < 1");
    }
    double sum = 0.0;
    double power = 1.0;
    for (std::size_t r = 1; r <= ctl.max_terms; ++r) {
        power *= x;
        const double term = power / std::pow(static_cast<double>(r), s);
        sum += term;
        if (term * x / (1.0 - x) < ctl.absolute_tail * 1e-2 || term == 0.0) {
            return sum;
        }
    }
    throw ConvergenceError("polylog_series: tail bound not met");
}

namespace detail {

inline bool is_integer(double s) { return s == std::floor(s); }

/// Li_s(e^mu1) - Li_s(e^mu2) with mu1 = mu2 + delta, for mu2 <= mu1 <= 0,
/// |mu2| < 2 pi and non-integer s, from the expansion about the branch point
/// Li_s(e^mu) = Gamma(1 - s)(-mu)^{s-1} + sum_k zeta(s - k) mu^k / k!.
/// Each term is differenced in closed form with the exact gap delta, so
/// arguments that nearly coincide do not cancel. mu2 = -inf gives
/// Li_s(e^mu1) alone.
inline double polylog_log_difference(double s, double mu1, double mu2, double delta)
{
    const double a = s - 1.0;
    const bool single = std::isinf(mu2);
    // (-mu1)^a - (-mu2)^a = (-mu2)^a expm1(a ln(1 + delta/mu2))
    double sum = single ? std::tgamma(1.0 - s) * std::pow(-mu1, a)
                        : std::tgamma(1.0 - s) * std::pow(-mu2, a) * std::expm1(a * std::log1p(delta / mu2));
    if (single) {
        sum += std::riemann_zeta(s);
    }
    // mu1^k - mu2^k = delta h_{k-1}, h_k = mu2 h_{k-1} + mu1^k
    double h = 1.0;
    double mu1_power = 1.0;
    double factorial = 1.0;
    for (int k = 1; k <= 120; ++k) {
        if (k > 1) {
            mu1_power *= mu1;
            h = h * mu2 + mu1_power;
        }
        factorial *= k;
        const double power_gap = single ? mu1_power * mu1 : delta * h;
        const double term = std::riemann_zeta(s - k) * power_gap / factorial;
        sum += term;
        if (k > 2 && std::abs(term) <= 1e-17 * std::abs(sum)) {
            return sum;
        }
    }
    throw ConvergenceError("polylogarithm expansion about z = 1 did not converge");
}

} // namespace detail

/// Generalized Bose function g_n(q, z) = sum_{r>=1} [r] z^r / r^{n+1}.
///
/// Requires 0 < z < q so that the q^-1 z half of the basic number
/// converges. In the classical limit this is the ordinary
/// sum z^r / r^n. The r-th term is formed as
/// q (z/q)^r (1 - q^{2r}) / (1 - q^2) / r^{n+1}, which never overflows.
///
/// For z/q >= 0.9 the sum is rewritten as
/// (Li_{n+1}(z/q) - Li_{n+1}(z q)) / (q^-1 - q) and evaluated from the
/// expansion about z/q = 1, which stays accurate up to the edge where
/// the direct sum would need millions of terms.
inline double g_n(const QParam& q, double z, double order, const SeriesControl& ctl = {})
{
    if (!(z > 0.0) || !(z < q.value())) {
        throw DomainError("g_n(q, z) requires 0 < z < q (the z/q series diverges at z = q), got z = "
                          + std::to_string(z) + ", q = " + std::to_string(q.value()));
    }
    if (!(order > 0.0)) {
        throw DomainError("g_n requires order > 0");
    }
    const bool classical = q.is_classical_limit();
    const double qv = q.value();
    const double ratio = z / qv;
    const double two_log_q = 2.0 * std::log(qv);
    const double denom = classical ? 1.0 : -std::expm1(two_log_q);

    const double s = classical ? order : order + 1.0;
    if (ratio >= 0.9 && !detail::is_integer(s)) {
        const double ln_z = std::log(z);
        if (classical) {
            return detail::polylog_log_difference(s, ln_z, -std::numeric_limits<double>::infinity(), 0.0);
        }
        const double l = q.log_inverse();
        const double mu1 = ln_z + l;
        const double mu2 = ln_z - l;
        const double gap = 2.0 * std::sinh(l);
        if (mu2 >= -3.0) {
            return detail::polylog_log_difference(s, mu1, mu2, 2.0 * l) / gap;
        }
        return (detail::polylog_log_difference(s, mu1, -std::numeric_limits<double>::infinity(), 0.0)
                - polylog_series(s, std::exp(mu2), ctl))
               / gap;
    }

    auto basic_weight = [&](double r) {
        return classical ? r : -std::expm1(r * two_log_q) / denom;
    };

    double sum = 0.0;
    double power = 1.0; // (z/q)^r, or z^r when classical
    const double step = classical ? z : ratio;
    const double lead = classical ? 1.0 : qv;
    for (std::size_t r = 1; r <= ctl.max_terms; ++r) {
        const double rr = static_cast<double>(r);
        power *= step;
        const double term = lead * power * basic_weight(rr) / std::pow(rr, order + 1.0);
        sum += term;
        if (term < ctl.relative * sum) {
            // Later term ratios are bounded by z [r+1]/[r] (which decreases
            // toward z/q), so the remaining tail is geometric.
            // [r+1]/[r] = q^-1 (1 - q^{2r+2}) / (1 - q^{2r})
            const double bound = classical
                ? z * (rr + 1.0) / rr
                : ratio * std::expm1((rr + 1.0) * two_log_q) / std::expm1(rr * two_log_q);
            if (bound < 1.0 && term * bound / (1.0 - bound) < ctl.absolute_tail) {
                return sum;
            }
        }
    }
    throw ConvergenceError("g_n(q, z): tail bound not met within " + std::to_string(ctl.max_terms)
                           + " terms (z/q = " + std::to_string(ratio) + " too close to 1)");
}

/// sup_{z < q} g_n(q, z) = q (zeta(n+1) - Li_{n+1}(q^2)) / (1 - q^2);
/// zeta(n) in the classical limit. Finite only for order > 1.
inline double g_n_supremum(const QParam& q, double order)
{
    if (!(order > 1.0)) {
        throw DomainError("g_n(q, z -> q) is finite only for order > 1");
    }
    if (q.is_classical_limit()) {
        return std::riemann_zeta(order);
    }
    const double l = q.log_inverse();
    if (2.0 * l <= 3.0 && !detail::is_integer(order + 1.0)) {
        // zeta - Li(q^2) without cancellation as q -> 1
        return detail::polylog_log_difference(order + 1.0, 0.0, -2.0 * l, 2.0 * l) / (2.0 * std::sinh(l));
    }
    const double qv = q.value();
    const double q2 = qv * qv;
    return qv * (std::riemann_zeta(order + 1.0) - polylog_series(order + 1.0, q2)) / (1.0 - q2);
}

namespace detail {

/// Cohen, Rodriguez Villegas and Zagier acceleration of sum_k (-1)^k a_k
/// for a totally monotone sequence a_k (error ~ 5.83^-n).
template <typename Term>
double alternating_sum_cvz(Term&& a, int n = 40)
{
    double d = std::pow(3.0 + std::sqrt(8.0), n);
    d = 0.5 * (d + 1.0 / d);
    double b = -1.0;
    double c = -d;
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
        c = b - c;
        s += c * a(k);
        b = (static_cast<double>(k) + n) * (static_cast<double>(k) - n) * b
            / ((static_cast<double>(k) + 0.5) * (static_cast<double>(k) + 1.0));
    }
    return s / d;
}

} // namespace detail

/// Alternating series f_n(x) = sum (-1)^{r+1} x^r / r^n, 0 < x <= 1.
///
/// Summed directly for x <= 1/2. For x in (1/2, 1] the direct sum would
/// need up to ~10^15 terms at x = 1, so the terms (a totally monotone
/// sequence there) are summed with CVZ acceleration.
inline double f_n_series(double x, double order, const SeriesControl& ctl = {})
{
    if (!(x > 0.0) || !(x <= 1.0)) {
        throw DomainError("f_n series representation requires 0 < x <= 1, got x = " + std::to_string(x));
    }
    if (x > 0.5) {
        return detail::alternating_sum_cvz([&](int k) {
            const double r = static_cast<double>(k + 1);
            return std::pow(x, r) / std::pow(r, order);
        });
    }
    double sum = 0.0;
    double power = 1.0;
    double sign = 1.0;
    for (std::size_t r = 1; r <= ctl.max_terms; ++r) {
        power *= x;
        const double term = power / std::pow(static_cast<double>(r), order);
        sum += sign * term;
        sign = -sign;
        if (term < ctl.relative * std::abs(sum) * 1e-1) {
            return sum;
        }
    }
    throw ConvergenceError("f_n series: tail bound not met");
}

/// Fermi-Dirac integral form
/// f_n(x) = (1/Gamma(n)) int_0^inf t^{n-1} / (e^t / x + 1) dt.
///
/// The integrand has its Fermi edge at t = ln x. For ln x > 1 the range
/// is split there: tanh-sinh on [0, ln x], exp-sinh on [ln x, inf).
inline double f_n_integral(double x, double order, double tolerance = 1e-15)
{
    if (!(x > 0.0)) {
        throw DomainError("f_n integral representation requires x > 0");
    }
    if (!(order > 0.0)) {
        throw DomainError("f_n requires order > 0");
    }
    const double edge = std::log(x);
    const double gamma = std::tgamma(order);
    double error = 0.0;
    double l1 = 0.0;
    double total = 0.0;

    if (edge > 1.0) {
        // Below the edge: t^{n-1} (1 - 1/(e^{edge - t} + 1)).
        boost::math::quadrature::tanh_sinh<double> inner;
        auto below = [&](double t) { return std::pow(t, order - 1.0) / (1.0 + std::exp(t - edge)); };
        total += inner.integrate(below, 0.0, edge, tolerance, &error, &l1);
        if (!(error <= 1e3 * tolerance * std::max(1.0, std::abs(total)))) {
            throw ConvergenceError("f_n quadrature below the Fermi edge did not converge");
        }
        boost::math::quadrature::exp_sinh<double> outer;
        auto above = [&](double s) {
            const double e = std::exp(-s);
            return std::pow(s + edge, order - 1.0) * e / (1.0 + e);
        };
        const double part = outer.integrate(above, 0.0, std::numeric_limits<double>::infinity(), tolerance,
                                            &error, &l1);
        if (!(error <= 1e3 * tolerance * std::max(1.0, std::abs(part)))) {
            throw ConvergenceError("f_n quadrature above the Fermi edge did not converge");
        }
        total += part;
    } else {
        boost::math::quadrature::exp_sinh<double> outer;
        auto integrand = [&](double t) {
            const double e = x * std::exp(-t);
            return std::pow(t, order - 1.0) * e / (1.0 + e);
        };
        total = outer.integrate(integrand, 0.0, std::numeric_limits<double>::infinity(), tolerance, &error,
                                &l1);
        if (!(error <= 1e3 * tolerance * std::max(1e-300, std::abs(total)))) {
            throw ConvergenceError("f_n quadrature did not converge");
        }
    }
    return total / gamma;
}

/// Generalized Fermi function f_n(x), x = z/q: series for x <= 1, Fermi
/// integral above. Continuous across x = 1.
inline double f_n(double x, double order)
{
    if (!(x > 0.0)) {
        throw DomainError("f_n(x) requires x = z/q > 0, got x = " + std::to_string(x));
    }
    return x <= 1.0 ? f_n_series(x, order) : f_n_integral(x, order);
}

/// Coefficient of (ln x)^{-2k} in the degenerate expansion
/// f_nu(x) ~ (ln x)^nu / Gamma(nu + 1) * sum_k c_k (ln x)^{-2k},
/// c_k = 2 (1 - 2^{1-2k}) zeta(2k) Gamma(nu + 1)/Gamma(nu + 1 - 2k).
inline double sommerfeld_coefficient(std::size_t k, double nu = 1.5)
{
    if (k == 0) {
        return 1.0;
    }
    const double kk = static_cast<double>(k);
    // Gamma(nu+1)/Gamma(nu+1-2k) as a falling factorial avoids the poles.
    double falling = 1.0;
    for (std::size_t j = 0; j < 2 * k; ++j) {
        falling *= nu - static_cast<double>(j);
    }
    return 2.0 * (1.0 - std::pow(2.0, 1.0 - 2.0 * kk)) * std::riemann_zeta(2.0 * kk) * falling;
}

/// Density factor (ln x)^{3/2} (1 + (pi^2/8)(ln x)^{-2} + ...), summed
/// through `terms` terms. N/V = (4 pi g/3)(2 m k T/h^2)^{3/2} times this.
inline double sommerfeld_density(double ln_x, std::size_t terms)
{
    if (!(ln_x > 0.0)) {
        throw DomainError("degenerate expansion requires ln(z/q) > 0, got " + std::to_string(ln_x));
    }
    double sum = 0.0;
    const double inv2 = 1.0 / (ln_x * ln_x);
    double power = 1.0;
    for (std::size_t k = 0; k < terms; ++k) {
        sum += sommerfeld_coefficient(k) * power;
        power *= inv2;
    }
    return std::pow(ln_x, 1.5) * sum;
}

/// 4 / (3 sqrt(pi)): converts the density factor into f_{3/2}.
inline constexpr double sommerfeld_prefactor = 4.0 / (3.0 * 1.7724538509055160273);

} // namespace qstat
