#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>

#include "qstat/errors.hpp"
#include "qstat/qparam.hpp"

namespace qstat {

/// Basic number [x] = (q^x - q^-x) / (q - q^-1).
///
/// Evaluated as sinh(x ln q) / sinh(ln q), which is the same quantity
/// without the cancellation of the difference form as q -> 1. Returns x
/// exactly in the classical limit. Odd and strictly increasing in x.
inline double basic_number(const QParam& q, double x) noexcept
{
    if (q.is_classical_limit()) {
        return x;
    }
    const double l = q.log_inverse();
    return std::sinh(x * l) / std::sinh(l);
}

/// [n]! = [n][n-1]...[1], with [0]! = 1.
inline double q_factorial(const QParam& q, std::size_t n) noexcept
{
    double result = 1.0;
    for (std::size_t k = 2; k <= n; ++k) {
        result *= basic_number(q, static_cast<double>(k));
    }
    return result;
}

/// Jackson derivative (f(qx) - f(x/q)) / (x (q - 1/q)).
///
/// In the classical limit the q-difference degenerates to 0/0; a central
/// difference with relative step `classical_step` is used instead.
template <typename F>
    requires std::invocable<F&, double>
double jackson_derivative(F&& f, const QParam& q, double x, double classical_step = 1e-6)
{
    if (x == 0.0) {
        throw DomainError("Jackson derivative is undefined at x = 0 (division by x)");
    }
    if (q.is_classical_limit()) {
        const double h = classical_step * std::max(1.0, std::abs(x));
        return (f(x + h) - f(x - h)) / (2.0 * h);
    }
    const double qv = q.value();
    return (f(qv * x) - f(x / qv)) / (x * (qv - 1.0 / qv));
}

} // namespace qstat
