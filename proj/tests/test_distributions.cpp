#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "qstat/distributions.hpp"
#include "qstat/qcore.hpp"

using namespace qstat;

namespace {

std::vector<double> eta_grid(const QParam& q, int n, double span = 8.0, double start = 0.02)
{
    const double edge = q.is_classical_limit() ? 0.0 : q.log_inverse();
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
        out.push_back(edge + start + span * i / (n - 1));
    }
    return out;
}

} // namespace

TEST(BOccupation, Examples)
{
    for (double eta : {0.1, 1.0, 5.0}) {
        EXPECT_NEAR(b_occupation(QParam(1.0), Eta(eta)), 1.0 / (std::exp(eta) - 1.0), 1e-15 / std::expm1(eta) * 4);
    }
    const double direct = std::log(2.0 / 3.5) / (2.0 * std::log(0.5));
    EXPECT_NEAR(direct, 0.40368, 1e-5);
    EXPECT_NEAR(b_occupation(QParam(0.5), Eta(std::log(4.0))), direct, 1e-14);
    EXPECT_THROW(b_occupation(QParam(0.5), Eta(std::log(2.0))), DomainError);
    EXPECT_THROW(b_occupation(QParam(0.5), Eta(0.1)), DomainError);
    EXPECT_THROW(Eta(std::nan("")), DomainError);
}

TEST(BOccupation, NonnegativeAndDecreasing)
{
    for (double qv : {0.2, 0.5, 0.9}) {
        const QParam q(qv);
        double prev = 1e300;
        for (double eta : eta_grid(q, 50)) {
            const double n = b_occupation(q, Eta(eta));
            EXPECT_GE(n, 0.0);
            EXPECT_LT(n, prev);
            prev = n;
        }
    }
}

TEST(BOccupation, SolvesBasicNumberRatio)
{
    // e^eta = [n + 1]/[n]
    for (double qv : {0.3, 0.6, 0.95}) {
        const QParam q(qv);
        for (double eta : eta_grid(q, 12)) {
            const double n = b_occupation(q, Eta(eta));
            EXPECT_NEAR(basic_number(q, n + 1.0) / basic_number(q, n), std::exp(eta), 1e-11 * std::exp(eta));
        }
    }
}

TEST(BOccupation, FullLogPrefactorDoublesBoseLimit)
{
    const double eta = 1.3;
    EXPECT_NEAR(b_occupation(QParam(1.0), Eta(eta), OccupationPrefactor::full_log), 2.0 / std::expm1(eta), 1e-14);
    const QParam q(0.6);
    EXPECT_NEAR(b_occupation(q, Eta(eta), OccupationPrefactor::full_log), 2.0 * b_occupation(q, Eta(eta)), 1e-14);
}

TEST(BOccupationJd, Examples)
{
    EXPECT_NEAR(b_occupation_jd(QParam(1.0), 0.5), 1.0, 1e-15);
    EXPECT_EQ(b_occupation_jd(QParam(0.5), 0.0), 0.0);
    const QParam q(0.5);
    double series = 0.0;
    double p = 1.0;
    for (int r = 1; r <= 50; ++r) {
        p *= 0.25;
        series += basic_number(q, r) * p / r;
    }
    EXPECT_NEAR(b_occupation_jd(q, 0.25), 0.373077, 1e-6);
    EXPECT_NEAR(b_occupation_jd(q, 0.25), series, 1e-12);
    EXPECT_THROW(b_occupation_jd(q, 0.5), DomainError);
    EXPECT_THROW(b_occupation_jd(q, -0.1), DomainError);
}

TEST(BOccupationJd, PrefactorRatio)
{
    // At small occupation n ~ prefactor * w for the closed form and n_jd ~ w,
    // so the closed form over the JD form tends to (q - 1/q)/(2 ln q).
    for (double qv : {0.3, 0.6, 0.9}) {
        const QParam q(qv);
        const double eta = 30.0;
        const double ratio = b_occupation(q, Eta(eta)) / b_occupation_jd(q, std::exp(-eta));
        EXPECT_NEAR(ratio, (qv - 1.0 / qv) / (2.0 * std::log(qv)), 1e-10);
    }
    double prev = 1e300;
    for (double qv : {0.5, 0.9, 0.99, 0.999}) {
        const QParam q(qv);
        const double ratio = b_occupation(q, Eta(20.0)) / b_occupation_jd(q, std::exp(-20.0));
        EXPECT_LT(std::abs(ratio - 1.0), prev);
        prev = std::abs(ratio - 1.0);
    }
    EXPECT_LT(prev, 1e-6);
}

TEST(ContinuedFraction, FirstTwoConvergentsClosedForms)
{
    for (double qv : {0.3, 0.5, 0.8}) {
        const QParam q(qv);
        const double pref = (1.0 / qv - qv) / (2.0 * std::log(1.0 / qv));
        for (double eta : eta_grid(q, 7)) {
            const auto c = cf_convergents(q, Eta(eta), 2);
            EXPECT_NEAR(c[0], pref / (std::exp(eta) - qv), 1e-13 * c[0]);
            EXPECT_NEAR(c[1], pref / (std::exp(eta) - 0.5 * (qv + 1.0 / qv)), 1e-13 * c[1]);
        }
    }
}

TEST(ContinuedFraction, ConvergesToClosedForm)
{
    const QParam q(0.5);
    EXPECT_NEAR(cf_convergent(q, Eta(std::log(4.0)), 40), 0.40368, 1e-5);
    EXPECT_NEAR(cf_convergent(q, Eta(std::log(4.0)), 40), b_occupation(q, Eta(std::log(4.0))), 1e-12);
    for (int i = 0; i < 10; ++i) {
        const QParam qq(0.1 + 0.09 * i);
        // y <= 0.95: the fraction for -ln(1 - y) slows down as y -> 1
        for (double eta : eta_grid(qq, 10, 8.0, 0.1)) {
            EXPECT_NEAR(cf_convergent(qq, Eta(eta), 60), b_occupation(qq, Eta(eta)), 1e-12);
        }
    }
}

TEST(ContinuedFraction, ConvergentsIncreaseMonotonicallyFromBelow)
{
    // All partial numerators after the first are negative, so convergents
    // approach the limit from one side.
    for (double qv : {0.2, 0.5, 0.9}) {
        const QParam q(qv);
        for (double eta : eta_grid(q, 10)) {
            const auto c = cf_convergents(q, Eta(eta), 12);
            const double exact = b_occupation(q, Eta(eta));
            for (std::size_t k = 1; k < c.size(); ++k) {
                EXPECT_GE(c[k], c[k - 1] * (1.0 - 1e-15));
            }
            EXPECT_LE(c.back(), exact * (1.0 + 1e-14));
        }
    }
}

TEST(ContinuedFraction, ErrorShrinksWithLevel)
{
    const QParam q(0.4);
    const double eta = q.log_inverse() + 0.3;
    const double exact = b_occupation(q, Eta(eta));
    const auto c = cf_convergents(q, Eta(eta), 60);
    double prev = 1e300;
    for (std::size_t k = 0; k < c.size(); k += 5) {
        const double err = std::abs(c[k] - exact);
        EXPECT_LE(err, std::max(prev, 2e-15));
        prev = err;
    }
}

TEST(ContinuedFraction, DeepLevelsStayFinite)
{
    const QParam q(0.5);
    const double eta = q.log_inverse() + 1e-4;
    const auto c = cf_convergents(q, Eta(eta), 2000);
    for (double v : c) {
        ASSERT_TRUE(std::isfinite(v));
    }
}

TEST(ContinuedFraction, DomainErrors)
{
    EXPECT_THROW(cf_convergent(QParam(0.5), Eta(std::log(2.0)), 3), DomainError);
    EXPECT_THROW(cf_convergents(QParam(0.5), Eta(2.0), 0), std::invalid_argument);
}

TEST(Bounds, HalfQValues)
{
    const QParam q(0.5);
    const auto p = cf_bounds(q, Eta(2.0));
    EXPECT_NEAR(p.prefactor, 3.0 / (4.0 * std::log(2.0)), 1e-15);
    EXPECT_NEAR(p.prefactor, 1.082021, 1e-6);
    EXPECT_EQ(p.lower_shift, 0.5);
    EXPECT_EQ(p.upper_shift, 1.25);
    EXPECT_EQ(p.quoted_upper_shift, 2.5);
    EXPECT_NEAR(p.lower, p.prefactor / (std::exp(2.0) - 0.5), 1e-14);
}

TEST(Bounds, SecondConvergentIsBelowTheLimit)
{
    const auto p = cf_bounds(QParam(0.5), Eta(std::log(4.0)));
    EXPECT_LT(p.lower, p.upper);
    EXPECT_LT(p.upper, p.exact);
    EXPECT_FALSE(p.brackets());
}

TEST(Bounds, ClassicalCollapse)
{
    const auto p = cf_bounds(QParam(1.0), Eta(1.0));
    const double bose = 1.0 / (std::exp(1.0) - 1.0);
    EXPECT_NEAR(p.lower, bose, 1e-15);
    EXPECT_NEAR(p.upper, bose, 1e-15);
    EXPECT_NEAR(p.exact, bose, 1e-15);
    EXPECT_EQ(p.prefactor, 1.0);
    const auto near = cf_bounds(QParam(1.0 - 1e-7), Eta(1.0));
    EXPECT_NEAR(near.lower, bose, 1e-6);
    EXPECT_NEAR(near.upper, bose, 1e-6);
}

TEST(Bounds, RigorousBracketHolds)
{
    for (double qv : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
        const QParam q(qv);
        for (double eta : eta_grid(q, 40)) {
            const auto b = occupation_bracket(q, Eta(eta));
            EXPECT_LE(b.lower, b.exact);
            EXPECT_LE(b.exact, b.upper);
        }
    }
}

TEST(FOccupation, Examples)
{
    for (double eta : {-3.0, 0.0, 2.0}) {
        EXPECT_NEAR(f_occupation(QParam(1.0), Eta(eta)), 1.0 / (std::exp(eta) + 1.0), 1e-16);
    }
    EXPECT_NEAR(f_occupation(QParam(0.5), Eta(0.0)), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(f_occupation(QParam(0.5), Eta(10.0)), 2.0 * std::exp(-10.0), 1e-8);
    EXPECT_NEAR(f_occupation(QParam(0.5), Eta(10.0)), 9.08e-5, 1e-7);
}

TEST(FOccupation, RangeAndHalfFilling)
{
    for (double qv : {0.05, 0.3, 0.7, 1.0}) {
        const QParam q(qv);
        EXPECT_GE(f_occupation(q, Eta(0.0)), 0.5);
        double prev = 2.0;
        for (double eta = -20.0; eta <= 20.0; eta += 0.5) {
            const double n = f_occupation(q, Eta(eta));
            EXPECT_GT(n, 0.0);
            EXPECT_LT(n, 1.0);
            EXPECT_LT(n, prev);
            prev = n;
        }
    }
    EXPECT_EQ(f_occupation(QParam(1.0), Eta(0.0)), 0.5);
}

TEST(FOccupation, StepFunctionLimit)
{
    for (double qv : {0.2, 0.5, 1.0}) {
        EXPECT_GT(f_occupation(QParam(qv), Eta(-50.0)), 1.0 - 1e-15);
        EXPECT_LT(f_occupation(QParam(qv), Eta(50.0)), 1e-20);
    }
}

TEST(FOccupation, ArcsinForm)
{
    const QParam q(0.5);
    EXPECT_NEAR(f_occupation_arcsin(q, Eta(0.0)), 2.0 / std::numbers::pi * std::asin(std::sqrt(2.0 / 3.0)), 1e-15);
    EXPECT_NEAR(f_occupation_arcsin(q, Eta(0.0)), 0.6082, 1e-4);
    EXPECT_NEAR(f_occupation_arcsin(q, Eta(-800.0)), 1.0, 1e-15);
    EXPECT_EQ(f_occupation_arcsin(q, Eta(800.0)), 0.0);
    for (double eta = -6.0; eta <= 6.0; eta += 0.25) {
        const double n = f_occupation_arcsin(q, Eta(eta));
        const double s = std::sin(n * std::numbers::pi / 2.0);
        EXPECT_NEAR(s * s, f_occupancy_argument(q, Eta(eta)), 1e-15);
    }
}

TEST(FOccupation, ArcsinSeries)
{
    const auto c = arcsin_sqrt_series_coefficients(3);
    EXPECT_NEAR(c[0], 0.63662, 1e-5);
    EXPECT_NEAR(c[1], 0.106103, 1e-6);
    EXPECT_NEAR(c[2], 0.047746, 1e-6);
    // Maclaurin law arcsin x = x + x^3/6 + 3x^5/40 + ...
    EXPECT_NEAR(c[1] / c[0], 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(c[2] / c[0], 3.0 / 40.0, 1e-15);
    EXPECT_EQ(f_occupation_series(0.0, 10), 0.0);
    for (double g : {0.05, 0.3, 0.6}) {
        const double exact = 2.0 / std::numbers::pi * std::asin(std::sqrt(g));
        double prev = 1e300;
        for (std::size_t terms : {2u, 8u, 32u, 128u}) {
            const double err = std::abs(f_occupation_series(g, terms) - exact);
            EXPECT_LT(err, std::max(prev, 1e-15));
            prev = err;
        }
        EXPECT_LT(prev, 1e-10);
    }
    EXPECT_THROW(f_occupation_series(1.0, 5), DomainError);
    EXPECT_THROW(f_occupation_series(-0.1, 5), DomainError);
}

TEST(ClassicalLimit, NearOneMatchesBoseAndFermi)
{
    const QParam q(1.0 - 1e-9);
    for (double eta = 0.05; eta < 12.0; eta += 0.37) {
        const double bose = 1.0 / std::expm1(eta);
        EXPECT_NEAR(b_occupation(q, Eta(eta)) / bose, 1.0, 1e-6);
    }
    for (double eta = -10.0; eta < 12.0; eta += 0.37) {
        EXPECT_NEAR(f_occupation(q, Eta(eta)), 1.0 / (std::exp(eta) + 1.0), 1e-9);
    }
}
