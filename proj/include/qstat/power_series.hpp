#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "qstat/errors.hpp"

namespace qstat {

/// Truncated formal power series c0 + c1 t + ... + cK t^K.
///
/// The truncation order K is part of the value: arithmetic between two
/// series is exact through min(K_a, K_b) and never produces terms beyond
/// it. Values are immutable once built.
class PowerSeries {
public:
    static constexpr std::size_t default_order = 8;

    /// Zero series of order K.
    explicit PowerSeries(std::size_t order = default_order) : c_(order + 1, 0.0)
    {
        if (order == 0) {
            throw std::invalid_argument("power series truncation order must be positive");
        }
    }

    /// Series with constant term `constant` and coefficients c1..cK taken
    /// from `linear_and_up`; K = linear_and_up.size().
    PowerSeries(double constant, std::span<const double> linear_and_up)
        : PowerSeries(linear_and_up.size())
    {
        c_[0] = constant;
        std::copy(linear_and_up.begin(), linear_and_up.end(), c_.begin() + 1);
    }

    PowerSeries(double constant, std::initializer_list<double> linear_and_up)
        : PowerSeries(constant, std::span<const double>(linear_and_up.begin(), linear_and_up.size()))
    {}

    /// The series t truncated at order K.
    static PowerSeries identity(std::size_t order = default_order)
    {
        PowerSeries s(order);
        s.c_[1] = 1.0;
        return s;
    }

    /// t^power truncated at order K (zero if power > K).
    static PowerSeries monomial(std::size_t power, std::size_t order = default_order)
    {
        PowerSeries s(order);
        if (power <= order) {
            s.c_[power] = 1.0;
        }
        return s;
    }

    std::size_t order() const noexcept { return c_.size() - 1; }
    double constant() const noexcept { return c_[0]; }

    /// Coefficient of t^k; zero above the truncation order.
    double operator[](std::size_t k) const noexcept { return k < c_.size() ? c_[k] : 0.0; }

    /// c1..cK.
    std::span<const double> coefficients() const noexcept { return {c_.data() + 1, c_.size() - 1}; }

    /// Same series truncated (or zero-extended) to a new order.
    PowerSeries truncated(std::size_t order) const
    {
        PowerSeries s(order);
        const std::size_t n = std::min(order, this->order());
        std::copy(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(n + 1), s.c_.begin());
        return s;
    }

    double operator()(double t) const noexcept
    {
        double acc = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            acc = acc * t + *it;
        }
        return acc;
    }

    friend PowerSeries operator+(const PowerSeries& a, const PowerSeries& b)
    {
        PowerSeries s(std::min(a.order(), b.order()));
        for (std::size_t k = 0; k < s.c_.size(); ++k) {
            s.c_[k] = a.c_[k] + b.c_[k];
        }
        return s;
    }

    friend PowerSeries operator-(const PowerSeries& a, const PowerSeries& b)
    {
        PowerSeries s(std::min(a.order(), b.order()));
        for (std::size_t k = 0; k < s.c_.size(); ++k) {
            s.c_[k] = a.c_[k] - b.c_[k];
        }
        return s;
    }

    friend PowerSeries operator*(double scale, const PowerSeries& a)
    {
        PowerSeries s = a;
        for (double& c : s.c_) {
            c *= scale;
        }
        return s;
    }

    /// Cauchy product truncated at min(K_a, K_b).
    friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b)
    {
        PowerSeries s(std::min(a.order(), b.order()));
        const std::size_t k_max = s.order();
        for (std::size_t i = 0; i <= k_max; ++i) {
            if (a.c_[i] == 0.0) {
                continue;
            }
            for (std::size_t j = 0; i + j <= k_max; ++j) {
                s.c_[i + j] += a.c_[i] * b.c_[j];
            }
        }
        return s;
    }

private:
    std::vector<double> c_;
};

/// outer(inner(t)), exact through min(K_outer, K_inner).
///
/// `inner` must have a zero constant term, otherwise every output
/// coefficient would depend on infinitely many outer terms.
inline PowerSeries compose(const PowerSeries& outer, const PowerSeries& inner)
{
    if (inner.constant() != 0.0) {
        throw std::invalid_argument("compose: inner series must have zero constant term, got "
                                    + std::to_string(inner.constant()));
    }
    const std::size_t order = std::min(outer.order(), inner.order());
    const PowerSeries in = inner.truncated(order);

    // Horner in the series ring.
    PowerSeries acc = outer[order] * PowerSeries::monomial(0, order);
    for (std::size_t k = order; k-- > 0;) {
        acc = acc * in;
        acc = acc + outer[k] * PowerSeries::monomial(0, order);
    }
    return acc;
}

/// Compositional inverse r with s(r(t)) = t through order K.
///
/// Built order by order: start from t / c1, and at each order n cancel
/// the t^n coefficient of s(r(t)) by adjusting r_n. This is equivalent to
/// Lagrange inversion.
inline PowerSeries revert(const PowerSeries& s)
{
    if (s.constant() != 0.0) {
        throw ReversionError("revert: series must have zero constant term");
    }
    const double c1 = s[1];
    if (c1 == 0.0) {
        throw ReversionError("revert: linear coefficient is zero, series is not invertible");
    }
    const std::size_t order = s.order();
    std::vector<double> r(order, 0.0);
    r[0] = 1.0 / c1;
    for (std::size_t n = 2; n <= order; ++n) {
        const PowerSeries trial(0.0, std::span<const double>(r.data(), n));
        const double excess = compose(s.truncated(n), trial)[n];
        r[n - 1] = -excess / c1;
    }
    return PowerSeries(0.0, r);
}

} // namespace qstat
