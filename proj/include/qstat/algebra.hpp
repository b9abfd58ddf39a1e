#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qstat/family.hpp"
#include "qstat/qcore.hpp"
#include "qstat/report.hpp"

namespace qstat {

/// Dense matrix representation of a deformed oscillator on a truncated
/// Fock space |0>, ..., |dim-1>.
///
/// Invariants: `number()` is diag(0, ..., dim-1); `creation()` is the
/// transpose of `annihilation()`; all ladder entries are real and
/// nonnegative. F-family representations always have dim = 2.
class FockRep {
public:
    FockRep(Family family, QParam q, Eigen::MatrixXd a)
        : family_{family}, q_{q}, a_{std::move(a)}, a_dag_{a_.transpose()},
          n_op_(Eigen::MatrixXd::Zero(a_.rows(), a_.cols()))
    {
        for (Eigen::Index n = 0; n < n_op_.rows(); ++n) {
            n_op_(n, n) = static_cast<double>(n);
        }
    }

    Family family() const noexcept { return family_; }
    const QParam& q() const noexcept { return q_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(a_.rows()); }

    const Eigen::MatrixXd& annihilation() const noexcept { return a_; }
    const Eigen::MatrixXd& creation() const noexcept { return a_dag_; }
    const Eigen::MatrixXd& number() const noexcept { return n_op_; }

    /// f(N) by diagonal functional calculus.
    template <typename F>
    Eigen::MatrixXd function_of_number(F&& f) const
    {
        Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a_.rows(), a_.cols());
        for (Eigen::Index n = 0; n < out.rows(); ++n) {
            out(n, n) = f(static_cast<double>(n));
        }
        return out;
    }

    /// q^{-N}
    Eigen::MatrixXd q_pow_minus_number() const
    {
        return function_of_number([this](double n) { return q_.pow(-n); });
    }

private:
    Family family_;
    QParam q_;
    Eigen::MatrixXd a_;
    Eigen::MatrixXd a_dag_;
    Eigen::MatrixXd n_op_;
};

/// B-anyon representation with a|n> = sqrt([n]) |n-1>.
inline FockRep build_b_rep(const QParam& q, std::size_t dim = 32)
{
    if (dim < 2) {
        throw DomainError("B-family Fock representation needs dim >= 2");
    }
    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index n = 1; n < d; ++n) {
        a(n - 1, n) = std::sqrt(basic_number(q, static_cast<double>(n)));
    }
    return FockRep(Family::B, q, std::move(a));
}

/// F-anyon representation. The ladder closes after one quantum because
/// beta_2 = 0, so the space is two-dimensional for every q.
inline FockRep build_f_rep(const QParam& q)
{
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
    a(0, 1) = 1.0; // sqrt(beta_1)
    return FockRep(Family::F, q, std::move(a));
}

/// alpha_0..alpha_{n_max} from alpha_{n+1} = q^-n + q alpha_n, alpha_0 = 0.
inline std::vector<double> eigenvalue_seq_b(const QParam& q, std::size_t n_max)
{
    std::vector<double> alpha(n_max + 1, 0.0);
    for (std::size_t n = 0; n < n_max; ++n) {
        alpha[n + 1] = q.pow(-static_cast<double>(n)) + q.value() * alpha[n];
    }
    return alpha;
}

/// beta_0..beta_{n_max} from beta_{n+1} = q^-n - q^-1 beta_n, beta_0 = 0.
inline std::vector<double> eigenvalue_seq_f(const QParam& q, std::size_t n_max)
{
    // q^-n by repeated multiplication, so that the even levels cancel to 0 exactly.
    std::vector<double> beta(n_max + 1, 0.0);
    double q_pow_minus_n = 1.0;
    for (std::size_t n = 0; n < n_max; ++n) {
        beta[n + 1] = q_pow_minus_n - q.inverse() * beta[n];
        q_pow_minus_n *= q.inverse();
    }
    return beta;
}

/// Closed form beta_n = (1 - (-1)^n)/2 * q^{-n+1}.
inline std::vector<double> eigenvalue_closed_form_f(const QParam& q, std::size_t n_max)
{
    std::vector<double> beta(n_max + 1, 0.0);
    double q_pow_minus_n = 1.0; // q^{-(n-1)}
    for (std::size_t n = 1; n <= n_max; ++n) {
        if (n % 2 == 1) {
            beta[n] = q_pow_minus_n;
        }
        q_pow_minus_n *= q.inverse();
    }
    return beta;
}

/// True iff beta_n differs from [n] for some n <= n_max, i.e. the
/// F-family eigenvalues are not a basic-number sequence.
inline bool verify_no_basic_number_f(const QParam& q, std::size_t n_max, double tolerance = 1e-12)
{
    const auto beta = eigenvalue_seq_f(q, n_max);
    for (std::size_t n = 0; n <= n_max; ++n) {
        const double bn = basic_number(q, static_cast<double>(n));
        if (std::abs(beta[n] - bn) > tolerance * std::max(1.0, std::abs(bn))) {
            return true;
        }
    }
    return false;
}

namespace detail {

inline double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline std::vector<std::pair<std::string, double>> rep_inputs(const FockRep& rep)
{
    return {{"q", rep.q().value()}, {"dim", static_cast<double>(rep.dim())}};
}

} // namespace detail

/// Entrywise algebra checks for a representation.
///
/// Residuals of matrix identities are reported relative to the largest
/// entry of the operators involved, since [n] grows like q^{-n}.
/// For the B family the defining relation is checked on states
/// 0..dim-2 only: the top state of any finite truncation loses its
/// a a+ contribution.
inline VerificationReport verify_rep(const FockRep& rep)
{
    VerificationReport report;
    const auto& a = rep.annihilation();
    const auto& ad = rep.creation();
    const auto& n = rep.number();
    const auto inputs = detail::rep_inputs(rep);
    const std::string prefix = rep.family() == Family::B ? "fock.b." : "fock.f.";

    const double scale_a = std::max(1.0, detail::max_abs(a));
    report.checks.push_back(make_check(prefix + "commutator_n_a", "[N, a] = -a entrywise", inputs,
                                       detail::max_abs(n * a - a * n + a) / scale_a, 1e-14));
    report.checks.push_back(make_check(prefix + "commutator_n_adag", "[N, a+] = a+ entrywise", inputs,
                                       detail::max_abs(n * ad - ad * n - ad) / scale_a, 1e-14));
    report.checks.push_back(make_check(prefix + "adag_is_transpose", "a+ equals the transpose of a", inputs,
                                       detail::max_abs(ad - a.transpose()), 0.0));

    const Eigen::MatrixXd qmn = rep.q_pow_minus_number();
    const double qv = rep.q().value();
    if (rep.family() == Family::B) {
        const auto interior = static_cast<Eigen::Index>(rep.dim() - 1);
        const Eigen::MatrixXd rel = a * ad - qv * (ad * a) - qmn;
        const double scale = std::max(1.0, detail::max_abs(qmn.topLeftCorner(interior, interior)));
        report.checks.push_back(make_check(prefix + "algebra_relation",
                                           "a a+ - q a+ a = q^-N on states 0..dim-2", inputs,
                                           detail::max_abs(rel.topLeftCorner(interior, interior)) / scale,
                                           1e-12));
        const Eigen::MatrixXd basic = rep.function_of_number([&](double k) { return basic_number(rep.q(), k); });
        report.checks.push_back(make_check(prefix + "number_like_is_basic", "a+ a = [N]", inputs,
                                           detail::max_abs(ad * a - basic) / std::max(1.0, detail::max_abs(basic)),
                                           1e-12));
    } else {
        const Eigen::MatrixXd rel = a * ad + (1.0 / qv) * (ad * a) - qmn;
        const double scale = std::max(1.0, detail::max_abs(qmn));
        report.checks.push_back(make_check(prefix + "algebra_relation", "a a+ + q^-1 a+ a = q^-N on both states",
                                           inputs, detail::max_abs(rel) / scale, 1e-15));
        report.checks.push_back(make_check(prefix + "adag_squared_zero", "(a+)^2 = 0 exactly", inputs,
                                           detail::max_abs(ad * ad), 0.0));

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ad * a);
        const auto& ev = eig.eigenvalues();
        report.checks.push_back(make_check(prefix + "pauli_spectrum", "spectrum of a+ a is {0, 1}", inputs,
                                           std::max(std::abs(ev(0)), std::abs(ev(1) - 1.0)), 1e-15));

        const Eigen::MatrixXd number_like = rep.function_of_number([&](double k) {
            return 0.5 * (1.0 - std::pow(-1.0, k)) * rep.q().pow(1.0 - k);
        });
        const Eigen::MatrixXd aad_expected = qmn - (1.0 / qv) * number_like;
        report.checks.push_back(make_check(prefix + "operator_identity",
                                           "a+ a = (1-(-1)^N)/2 q^{-N+1} and a a+ = q^-N - q^-1 a+ a", inputs,
                                           std::max(detail::max_abs(ad * a - number_like),
                                                    detail::max_abs(a * ad - aad_expected))
                                               / scale,
                                           1e-15));
        if (!rep.q().is_classical_limit()) {
            CheckResult c = make_check(prefix + "no_basic_number", "beta_n differs from [n] for some n <= 4",
                                       inputs, verify_no_basic_number_f(rep.q(), 4) ? 0.0 : 1.0, 0.0);
            report.checks.push_back(std::move(c));
        }
    }

    // (a+)^n |0> / sqrt([n]!) must be normalized; built incrementally so
    // that [n]! never overflows.
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rep.dim()));
    v(0) = 1.0;
    double worst = 0.0;
    for (std::size_t k = 1; k < rep.dim(); ++k) {
        v = ad * v;
        const double norm_factor = rep.family() == Family::B ? basic_number(rep.q(), static_cast<double>(k)) : 1.0;
        v /= std::sqrt(norm_factor);
        worst = std::max(worst, std::abs(v.norm() - 1.0));
    }
    report.checks.push_back(make_check(prefix + "fock_normalization", "(a+)^n|0>/sqrt([n]!) has unit norm",
                                       inputs, worst, 1e-12));
    return report;
}

} // namespace qstat
