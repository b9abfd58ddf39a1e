#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qstat/distributions.hpp"
#include "qstat/errors.hpp"
#include "qstat/family.hpp"
#include "qstat/power_series.hpp"
#include "qstat/qcore.hpp"
#include "qstat/qfunctions.hpp"
#include "qstat/root_finding.hpp"

namespace qstat {

/// z = e^{beta mu}.
struct Fugacity {
    double value;
};

/// lambda^3 / v = lambda^3 N / V, per internal state.
struct ReducedDensity {
    double value;
};

struct GasParams {
    Family family = Family::B;
    QParam q{1.0};
    double temperature = 1.0;
    std::variant<Fugacity, ReducedDensity> state = Fugacity{0.5};
    double mass = 1.0;
    double volume = 1.0;
    int multiplicity = 1; // F family only
    UnitSystem units{};
    /// Add the isolated zero-momentum contribution -kT ln(1 + z/q) to the
    /// grand potential (F family). Never enters P, U, S or N/V.
    bool isolate_zero_momentum = false;
};

/// Equation-of-state output. `entropy` is the total S of the volume.
struct StateFunctions {
    double pressure = 0.0;
    double internal_energy = 0.0;
    double entropy = 0.0;
    double number_density = 0.0;
    double grand_potential = 0.0;
    double fugacity = 0.0;
    double wavelength = 0.0;
};

// ---------------------------------------------------------------- fugacity

/// Solve g_{3/2}(q, z) = target (B) or f_{3/2}(z/q) = target (F) for z.
///
/// Both left-hand sides are strictly increasing in z; the search runs in
/// u = ln z with a bracketed bisection/secant hybrid. For the B family
/// the target must stay below sup_z g_{3/2}(q, z).
inline double solve_fugacity(Family family, const QParam& q, double target_density)
{
    if (!(target_density > 0.0)) {
        throw DomainError("fugacity inversion requires lambda^3/v > 0");
    }
    const double ln_q = std::log(q.value());
    const RootOptions opts{1e-15, 0.0, 200};

    if (family == Family::F) {
        // f_{3/2}(x) < x for all x > 0, so ln(target) lies below the root.
        auto residual = [&](double u) { return f_n(std::exp(u), 1.5) - target_density; };
        double lo = std::log(target_density);
        double hi = lo + 1.0;
        while (residual(hi) < 0.0) {
            hi = lo + 2.0 * (hi - lo);
            if (hi > 1e6) {
                throw ConvergenceError("fugacity inversion: no upper bracket found");
            }
        }
        const double u = find_root_bracketed(residual, lo, hi, opts);
        return std::exp(u + ln_q);
    }

    const double supremum = g_n_supremum(q, 1.5);
    if (!(target_density < supremum)) {
        throw DomainError("B-family density lambda^3/v = " + std::to_string(target_density)
                          + " is not below sup_z g_3/2(q, z) = " + std::to_string(supremum)
                          + " (condensation-like boundary z -> q)");
    }
    auto residual = [&](double u) { return g_n(q, std::exp(u), 1.5) - target_density; };
    // g_{3/2}(q, z) >= z, so z = target is an upper bracket when it is admissible.
    double hi = std::min(std::log(target_density), ln_q + std::log1p(-1e-2));
    for (double gap = 1e-2; residual(hi) < 0.0;) {
        gap *= 0.1;
        if (gap < 1e-15) {
            throw ConvergenceError("fugacity inversion: root lies too close to z = q");
        }
        hi = ln_q + std::log1p(-gap);
    }
    double lo = hi - 1.0;
    while (residual(lo) > 0.0) {
        lo -= 2.0 * (hi - lo);
    }
    return std::exp(find_root_bracketed(residual, lo, hi, opts));
}

// --------------------------------------------------------- state functions

namespace detail {

inline double resolve_fugacity(const GasParams& p)
{
    if (const auto* z = std::get_if<Fugacity>(&p.state)) {
        return z->value;
    }
    return solve_fugacity(p.family, p.q, std::get<ReducedDensity>(p.state).value);
}

inline void validate_gas(const GasParams& p)
{
    if (!(p.temperature > 0.0) || !(p.mass > 0.0) || !(p.volume > 0.0)) {
        throw DomainError("gas parameters require temperature, mass and volume > 0");
    }
    if (p.multiplicity < 1) {
        throw DomainError("multiplicity must be a positive integer");
    }
}

} // namespace detail

/// B-anyon gas: P = (kT/lambda^3) g_{5/2}, U = (3/2) P V,
/// S = (V k/lambda^3)((5/2) g_{5/2} - g_{3/2} ln z), N/V = g_{3/2}/lambda^3.
inline StateFunctions b_state(const GasParams& p)
{
    detail::validate_gas(p);
    const double z = detail::resolve_fugacity(p);
    if (!(z > 0.0) || !(z < p.q.value())) {
        throw DomainError("B-family state requires 0 < z < q, got z = " + std::to_string(z));
    }
    const double lambda = thermal_wavelength(p.mass, p.temperature, p.units);
    const double lambda3 = lambda * lambda * lambda;
    const double kt = p.units.k * p.temperature;
    const double g52 = g_n(p.q, z, 2.5);
    const double g32 = g_n(p.q, z, 1.5);

    StateFunctions s;
    s.fugacity = z;
    s.wavelength = lambda;
    s.pressure = kt / lambda3 * g52;
    s.internal_energy = 1.5 * s.pressure * p.volume;
    s.entropy = p.volume * p.units.k / lambda3 * (2.5 * g52 - g32 * std::log(z));
    s.number_density = g32 / lambda3;
    s.grand_potential = -s.pressure * p.volume;
    return s;
}

/// F-anyon gas with x = z/q: P = g_s (kT/lambda^3) f_{5/2}(x),
/// N/V = g_s f_{3/2}(x)/lambda^3, U = (3/2) P V,
/// S = (g_s V k/lambda^3)((5/2) f_{5/2} - f_{3/2} ln z).
inline StateFunctions f_state(const GasParams& p)
{
    detail::validate_gas(p);
    const double gs = static_cast<double>(p.multiplicity);
    double z = 0.0;
    if (const auto* f = std::get_if<Fugacity>(&p.state)) {
        z = f->value;
    } else {
        z = solve_fugacity(Family::F, p.q, std::get<ReducedDensity>(p.state).value / gs);
    }
    if (!(z > 0.0)) {
        throw DomainError("F-family state requires z > 0");
    }
    const double x = p.q.is_classical_limit() ? z : z / p.q.value();
    const double lambda = thermal_wavelength(p.mass, p.temperature, p.units);
    const double lambda3 = lambda * lambda * lambda;
    const double kt = p.units.k * p.temperature;
    const double f52 = f_n(x, 2.5);
    const double f32 = f_n(x, 1.5);

    StateFunctions s;
    s.fugacity = z;
    s.wavelength = lambda;
    s.pressure = gs * kt / lambda3 * f52;
    s.internal_energy = 1.5 * s.pressure * p.volume;
    s.entropy = gs * p.volume * p.units.k / lambda3 * (2.5 * f52 - f32 * std::log(z));
    s.number_density = gs * f32 / lambda3;
    s.grand_potential = -s.pressure * p.volume;
    if (p.isolate_zero_momentum) {
        s.grand_potential -= kt * std::log1p(x);
    }
    return s;
}

inline StateFunctions state(const GasParams& p) { return p.family == Family::B ? b_state(p) : f_state(p); }

// ------------------------------------------------------------------ virial

/// lambda^3/v and P lambda^3/kT as power series in z through order K.
struct FugacitySeries {
    PowerSeries density;
    PowerSeries pressure;
};

inline FugacitySeries fugacity_series(Family family, const QParam& q, std::size_t order)
{
    std::vector<double> dens(order), pres(order);
    for (std::size_t r = 1; r <= order; ++r) {
        const double rr = static_cast<double>(r);
        double weight = 0.0;
        if (family == Family::B) {
            weight = basic_number(q, rr);
        } else {
            weight = (r % 2 == 1 ? 1.0 : -1.0) * q.pow(-rr);
        }
        // B: [r] z^r / r^{n+1};  F: (-1)^{r+1} (z/q)^r / r^n
        const double shift = family == Family::B ? 1.0 : 0.0;
        dens[r - 1] = weight / std::pow(rr, 1.5 + shift);
        pres[r - 1] = weight / std::pow(rr, 2.5 + shift);
    }
    return {PowerSeries(0.0, dens), PowerSeries(0.0, pres)};
}

/// b_1..b_K in P v/kT = sum_k b_k (lambda^3/v)^{k-1}.
///
/// The density series is reverted to z(lambda^3/v) and substituted into
/// the pressure series; b_k is the coefficient of (lambda^3/v)^k.
inline std::vector<double> virial_coefficients(Family family, const QParam& q, std::size_t order)
{
    if (order < 2) {
        throw DomainError("virial expansion needs order K >= 2");
    }
    const auto series = fugacity_series(family, q, order);
    const PowerSeries z_of_density = revert(series.density);
    const PowerSeries pressure = compose(series.pressure, z_of_density);
    const auto c = pressure.coefficients();
    return {c.begin(), c.end()};
}

// ------------------------------------------------- degenerate F-anyon gas

/// E_F = (3 n / (4 pi g_s))^{2/3} h^2 / (2 m).
inline double fermi_energy(double number_density, int multiplicity, double mass, const UnitSystem& units = {})
{
    if (!(number_density > 0.0) || multiplicity < 1 || !(mass > 0.0)) {
        throw DomainError("Fermi energy requires density > 0, multiplicity >= 1, mass > 0");
    }
    const double gs = static_cast<double>(multiplicity);
    return std::pow(3.0 * number_density / (4.0 * std::numbers::pi * gs), 2.0 / 3.0) * units.h * units.h
           / (2.0 * mass);
}

/// Chemical potential of the degenerate F-anyon gas.
/// order 0: mu = E_F - kT ln q^-1.
/// order 1: mu = -kT ln q^-1 + E_F (1 - (pi^2/12)(kT/E_F)^2).
inline double chemical_potential_f(double temperature, double fermi_energy_value, const QParam& q, int order = 1,
                                   const UnitSystem& units = {})
{
    if (!(temperature >= 0.0)) {
        throw DomainError("chemical potential requires temperature >= 0");
    }
    if (!(fermi_energy_value > 0.0)) {
        throw DomainError("chemical potential requires E_F > 0");
    }
    const double kt = units.k * temperature;
    const double shift = -kt * q.log_inverse();
    if (order <= 0) {
        return fermi_energy_value + shift;
    }
    const double t = kt / fermi_energy_value;
    return shift + fermi_energy_value * (1.0 - std::numbers::pi * std::numbers::pi / 12.0 * t * t);
}

/// mu = kT ln z with z obtained by inverting the F-family density
/// relation exactly (no degenerate expansion).
inline double chemical_potential_from_density(double temperature, double number_density, const QParam& q,
                                              int multiplicity, double mass, const UnitSystem& units = {})
{
    const double lambda = thermal_wavelength(mass, temperature, units);
    const double reduced = number_density * lambda * lambda * lambda / static_cast<double>(multiplicity);
    const double z = solve_fugacity(Family::F, q, reduced);
    return units.k * temperature * std::log(z);
}

// -------------------------------------------------- discrete spectra

/// ln Z = -sum_i ln(1 - z e^{-beta E_i}) for B-anyon modes.
inline double b_partition_log(std::span<const double> spectrum, double z, double beta)
{
    double sum = 0.0;
    for (double e : spectrum) {
        const double w = z * std::exp(-beta * e);
        if (!(w < 1.0) || !(w >= 0.0)) {
            throw DomainError("B-family ln Z requires z exp(-beta E) < 1 for every mode");
        }
        sum -= std::log1p(-w);
    }
    return sum;
}

/// ln Z = sum_i ln(1 + q^-1 z e^{-beta E_i}) for F-anyon modes.
inline double f_partition_log(std::span<const double> spectrum, double z, double beta, const QParam& q)
{
    if (!(z > 0.0)) {
        throw DomainError("F-family ln Z requires z > 0");
    }
    double sum = 0.0;
    for (double e : spectrum) {
        sum += std::log1p(q.inverse() * z * std::exp(-beta * e));
    }
    return sum;
}

/// N = z D_q(z) ln Z with the Jackson derivative in z.
inline double b_mean_number_jd(std::span<const double> spectrum, double z, double beta, const QParam& q)
{
    auto log_z = [&](double zz) { return b_partition_log(spectrum, zz, beta); };
    return z * jackson_derivative(log_z, q, z);
}

/// sum_i n_jd(q, z e^{-beta E_i}).
inline double b_sum_occupation_jd(std::span<const double> spectrum, double z, double beta, const QParam& q)
{
    double sum = 0.0;
    for (double e : spectrum) {
        sum += b_occupation_jd(q, z * std::exp(-beta * e));
    }
    return sum;
}

/// sum_i q^-1/(e^{beta E_i}/z + q^-1).
inline double f_sum_occupation(std::span<const double> spectrum, double z, double beta, const QParam& q)
{
    double sum = 0.0;
    for (double e : spectrum) {
        sum += f_occupation(q, Eta(beta * e - std::log(z)));
    }
    return sum;
}

} // namespace qstat
