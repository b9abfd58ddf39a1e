#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "qstat/errors.hpp"
#include "qstat/power_series.hpp"
#include "qstat/qfunctions.hpp"

namespace qstat {

/// Functions with registered numerical Taylor references.
///
/// - identity: s -> s.
/// - arcsin_sqrt: (2/pi) arcsin(sqrt(g)) / sqrt(g) in the variable g, so
///   coefficient k is the coefficient of g^{k + 1/2} of (2/pi) arcsin(sqrt(g)).
/// - fermi_degenerate_bracket: f_{3/2}(x) / ((4/(3 sqrt(pi))) (ln x)^{3/2})
///   in the variable s = (ln x)^{-2}; the degenerate-limit bracket
///   1 + (pi^2/8) s + ...
enum class ReferenceFunction { identity, arcsin_sqrt, fermi_degenerate_bracket };

struct TaylorOptions {
    double step = 0.1;          // largest finite-difference step
    double ratio = 0.7;         // step reduction per Richardson level
    std::size_t levels = 8;
    bool one_sided = false;     // forward differences (function only defined for s >= 0)
    double tolerance = 1e-8;    // accepted |difference| between the last two extrapolants
};

namespace detail {

inline double binomial(std::size_t n, std::size_t k)
{
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) {
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return r;
}

/// f^{(k)}(0)/k! from a k-th finite difference with step h.
inline double scaled_difference(const std::function<double(double)>& f, std::size_t k, double h, bool one_sided)
{
    double sum = 0.0;
    for (std::size_t j = 0; j <= k; ++j) {
        const double sign = ((k - j) % 2 == 0) ? 1.0 : -1.0;
        const double x = one_sided ? static_cast<double>(j) * h
                                   : (static_cast<double>(j) - 0.5 * static_cast<double>(k)) * h;
        sum += sign * binomial(k, j) * f(x);
    }
    double factorial = 1.0;
    for (std::size_t i = 2; i <= k; ++i) {
        factorial *= static_cast<double>(i);
    }
    return sum / (std::pow(h, static_cast<double>(k)) * factorial);
}

/// Neville extrapolation of (x_j, y_j) to x = 0. Returns the final
/// extrapolant and the previous-row estimate for an error bound.
inline std::pair<double, double> neville_to_zero(std::vector<double> x, std::vector<double> y)
{
    const std::size_t m = y.size();
    double previous = y.front();
    for (std::size_t level = 1; level < m; ++level) {
        previous = y[m - level];
        for (std::size_t i = 0; i + level < m; ++i) {
            y[i] = (x[i + level] * y[i] - x[i] * y[i + 1]) / (x[i + level] - x[i]);
        }
    }
    return {y.front(), previous};
}

} // namespace detail

/// Taylor coefficients c_0..c_K of f about 0, from k-th order finite
/// differences at a geometric sequence of steps extrapolated to zero step
/// (Richardson, in h^2 for central and h for one-sided differences).
inline PowerSeries taylor_reference(const std::function<double(double)>& f, std::size_t order,
                                    const TaylorOptions& opts = {})
{
    if (order == 0) {
        throw std::invalid_argument("taylor_reference: order must be positive");
    }
    std::vector<double> c(order + 1, 0.0);
    for (std::size_t k = 0; k <= order; ++k) {
        if (k == 0) {
            c[0] = f(0.0);
            continue;
        }
        std::vector<double> xs, ys;
        double h = opts.step;
        for (std::size_t l = 0; l < opts.levels; ++l) {
            ys.push_back(detail::scaled_difference(f, k, h, opts.one_sided));
            xs.push_back(opts.one_sided ? h : h * h);
            h *= opts.ratio;
        }
        const auto [value, previous] = detail::neville_to_zero(xs, ys);
        const double err = std::abs(value - previous);
        if (!std::isfinite(value) || err > opts.tolerance * std::max(1.0, std::abs(value))) {
            throw ConvergenceError("taylor_reference: Richardson extrapolation of coefficient "
                                   + std::to_string(k) + " did not settle (spread "
                                   + std::to_string(err) + ")");
        }
        c[k] = value;
    }
    return PowerSeries(c[0], std::span<const double>(c.data() + 1, order));
}

/// The registered function and the step schedule that resolves its first
/// few coefficients to ~1e-8.
inline std::pair<std::function<double(double)>, TaylorOptions> reference_function(ReferenceFunction id)
{
    switch (id) {
    case ReferenceFunction::identity:
        return {[](double s) { return s; }, TaylorOptions{0.1, 0.7, 6, false, 1e-8}};
    case ReferenceFunction::arcsin_sqrt:
        return {[](double g) {
                    if (g == 0.0) {
                        return 2.0 / std::numbers::pi;
                    }
                    const double r = std::sqrt(g);
                    return 2.0 / std::numbers::pi * std::asin(r) / r;
                },
                TaylorOptions{0.12, 0.7, 10, true, 1e-8}};
    case ReferenceFunction::fermi_degenerate_bracket:
        return {[](double s) {
                    if (s == 0.0) {
                        return 1.0;
                    }
                    const double ln_x = 1.0 / std::sqrt(s);
                    return f_n_integral(std::exp(ln_x), 1.5) / (sommerfeld_prefactor * std::pow(ln_x, 1.5));
                },
                TaylorOptions{4e-4, 0.7, 7, true, 1e-6}};
    }
    throw std::invalid_argument("unknown reference function");
}

inline PowerSeries taylor_reference(ReferenceFunction id, std::size_t order)
{
    const auto [f, opts] = reference_function(id);
    return taylor_reference(f, order, opts);
}

} // namespace qstat
