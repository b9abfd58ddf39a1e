#pragma once

#include <cmath>
#include <string>

#include "qstat/errors.hpp"

namespace qstat {

/// Statistics parameter q in (0, 1]. q = 1 is the Bose (B family) or
/// Fermi (F family) limit. Values within `tolerance` of 1 are treated as
/// exactly classical and every q-dependent routine branches to the
/// analytic limit there instead of evaluating a 0/0 form.
class QParam {
public:
    static constexpr double default_tolerance = 1e-12;

    explicit QParam(double q, double tolerance = default_tolerance)
        : q_{q}, tolerance_{tolerance}
    {
        if (!(q > 0.0) || !(q <= 1.0)) {
            throw DomainError("q must lie in (0, 1], got " + std::to_string(q));
        }
        if (!(tolerance >= 0.0)) {
            throw DomainError("classical-limit tolerance must be nonnegative");
        }
    }

    static QParam classical() { return QParam{1.0}; }

    double value() const noexcept { return q_; }
    double inverse() const noexcept { return 1.0 / q_; }
    double tolerance() const noexcept { return tolerance_; }

    bool is_classical_limit() const noexcept { return std::abs(q_ - 1.0) < tolerance_; }

    /// ln(1/q) >= 0. Accurate near q = 1 because q - 1 is exact there.
    double log_inverse() const noexcept { return -std::log(q_); }

    /// q^-1 - q = 2 sinh(ln q^-1), free of cancellation near q = 1.
    double inverse_minus_q() const noexcept { return 2.0 * std::sinh(log_inverse()); }

    double pow(double x) const noexcept { return std::exp(-x * log_inverse()); }

    friend bool operator==(const QParam& a, const QParam& b) noexcept { return a.q_ == b.q_; }

private:
    double q_;
    double tolerance_;
};

} // namespace qstat
