#pragma once

#include <cmath>
#include <algorithm>
#include <cstddef>
#include <limits>
#include <string>

#include "qstat/errors.hpp"

namespace qstat {

struct RootOptions {
    double bracket_width = 1e-14;   // absolute, in the search variable (floored at a few ulps)
    double residual = 0.0;          // stop early once |f| <= residual
    std::size_t max_iterations = 200;
};

/// Root of a continuous f on [lo, hi] with f(lo), f(hi) of opposite sign.
///
/// Secant (false-position with the Illinois down-weighting) steps are
/// taken while they shrink the bracket fast enough; otherwise the step
/// falls back to bisection, so convergence is never slower than
/// bisection.
template <typename F>
double find_root_bracketed(F&& f, double lo, double hi, const RootOptions& opts = {})
{
    double f_lo = f(lo);
    double f_hi = f(hi);
    if (f_lo == 0.0) {
        return lo;
    }
    if (f_hi == 0.0) {
        return hi;
    }
    if ((f_lo < 0.0) == (f_hi < 0.0)) {
        throw DomainError("root search: f(lo) and f(hi) have the same sign, no bracketed root");
    }
    int side = 0;
    double previous_width = hi - lo;
    for (std::size_t it = 0; it < opts.max_iterations; ++it) {
        const double width = hi - lo;
        // Also stop once the bracket is a few ulps wide: it cannot shrink further.
        const double floor = 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi));
        if (std::abs(width) <= std::max(opts.bracket_width, floor)) {
            return 0.5 * (lo + hi);
        }
        double x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        // Bisect when the secant point is unusable or the bracket stalls.
        if (!std::isfinite(x) || x <= std::min(lo, hi) || x >= std::max(lo, hi)
            || std::abs(width) > 0.5 * std::abs(previous_width)) {
            x = 0.5 * (lo + hi);
        }
        previous_width = width;
        const double fx = f(x);
        if (fx == 0.0 || std::abs(fx) <= opts.residual) {
            return x;
        }
        if ((fx < 0.0) == (f_lo < 0.0)) {
            lo = x;
            f_lo = fx;
            if (side == -1) {
                f_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            f_hi = fx;
            if (side == 1) {
                f_lo *= 0.5;
            }
            side = 1;
        }
    }
    throw ConvergenceError("root search did not converge in " + std::to_string(opts.max_iterations)
                           + " iterations");
}

} // namespace qstat
