#include "fujita/exact_solutions.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "fujita/numerics.hpp"
#include "oracles.hpp"

using namespace fujita;

TEST(CriticalExponent, KnownValues) {
    EXPECT_DOUBLE_EQ(critical_exponent(1, 2.0), 3.0);
    EXPECT_DOUBLE_EQ(critical_exponent(2, 2.0), 2.0);
    EXPECT_DOUBLE_EQ(critical_exponent(3, 0.0), 1.0);
    EXPECT_THROW(critical_exponent(0, 2.0), std::invalid_argument);
}

TEST(AdmissibleParams, Example2Box) {
    const ParameterBox box = admissible_params(1, 2.0, 4.0);
    ASSERT_FALSE(box.empty);
    EXPECT_DOUBLE_EQ(box.beta, 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(box.gamma_min, 1.0 / 6.0);
    EXPECT_DOUBLE_EQ(box.gamma_max, 1.0 / 4.0);
    EXPECT_NEAR(box.kappa_max(0.25), std::cbrt(1.0 / 6.0), 1e-15);
}

TEST(AdmissibleParams, CriticalCaseIsEmpty) {
    EXPECT_TRUE(admissible_params(1, 2.0, 3.0).empty);
}

TEST(AdmissibleParams, N2Alpha1Q2) {
    const ParameterBox box = admissible_params(2, 1.0, 2.0);
    ASSERT_FALSE(box.empty);
    EXPECT_DOUBLE_EQ(box.beta, 1.0);
    EXPECT_DOUBLE_EQ(box.gamma_min, 0.5);
    EXPECT_DOUBLE_EQ(box.gamma_max, 1.0);
    EXPECT_DOUBLE_EQ(box.kappa_max(1.0), 2.0 * (1.0 - 0.5));
}

TEST(AdmissibleParams, Preconditions) {
    EXPECT_THROW(admissible_params(1, 0.0, 4.0), std::domain_error);
    EXPECT_THROW(admissible_params(1, -1.0, 4.0), std::domain_error);
    EXPECT_THROW(admissible_params(1, 2.0, 1.0), std::invalid_argument);
}

// Box nonemptiness <=> supercriticality, with the exact-equality boundary
// included; zero tolerance.
TEST(AdmissibleParams, NonemptinessMatchesSupercriticality) {
    int points = 0;
    for (int n : {1, 2, 3, 5}) {
        for (double ah : {0.5, 1.0, 4.0 / 3.0, 2.0, 3.0}) {
            const double qstar = 1.0 + ah / n;
            for (double q : {qstar - 0.25, qstar, qstar + 1e-12, qstar + 0.25}) {
                if (!(q > 1)) continue;
                ++points;
                const bool empty = admissible_params(n, ah, q).empty;
                EXPECT_EQ(empty, q <= qstar) << "n=" << n << " ah=" << ah << " q=" << q;
            }
        }
    }
    EXPECT_GE(points, 50);
}

TEST(MakeParams, EnforcesBox) {
    EXPECT_NO_THROW(make_params(1, 2.0, 4.0, 0.25, 0.5));
    EXPECT_THROW(make_params(1, 2.0, 4.0, 0.26, 0.5), std::domain_error);   // gamma high
    EXPECT_THROW(make_params(1, 2.0, 4.0, 1.0 / 6, 0.5), std::domain_error);  // gamma at open end
    EXPECT_THROW(make_params(1, 2.0, 4.0, 0.25, 0.0), std::domain_error);   // kappa = 0 excluded
    EXPECT_THROW(make_params(1, 2.0, 4.0, 0.25, 0.56), std::domain_error);  // kappa above max
    EXPECT_THROW(make_params(1, 2.0, 3.0, 0.25, 0.1), std::domain_error);   // empty box
}

TEST(SurrogateAlpha, AlwaysAdmissible) {
    for (int n : {1, 2, 3}) {
        for (double q : {1.2, 2.0, 4.0}) {
            const double ah = surrogate_alpha_hat(n, q);
            EXPECT_GT(ah, 0.0);
            EXPECT_FALSE(admissible_params(n, ah, q).empty);
        }
    }
}

TEST(EvalU, ClosedFormValues) {
    const ExactSolutionParams p = default_params(1, 2.0, 4.0);
    // t = 0, x = 0: kappa e^{-gamma}
    const std::vector<double> origin{0.0};
    EXPECT_NEAR(eval_u(p, 0.0, origin), p.kappa * std::exp(-p.gamma), 1e-15);

    // pinned arithmetic value at (t=1, x=1) for gamma = 1/4, kappa = 0.55
    const ExactSolutionParams p2 = make_params(1, 2.0, 4.0, 0.25, 0.55);
    const std::vector<double> x1{1.0};
    EXPECT_NEAR(eval_u(p2, 1.0, x1), 0.55 * std::pow(2.0, -1.0 / 3.0) * std::exp(-0.25), 1e-15);
}

TEST(EvalU, DecaysLikePowerLaw) {
    const ExactSolutionParams p = default_params(1, 2.0, 4.0);
    // (t+1)^beta u(t, x0) -> kappa exp(0) as t grows, at fixed x
    const double t = 1e8;
    const double scaled = std::pow(t + 1.0, p.beta) * eval_u_radial(p, t, 1.0);
    EXPECT_NEAR(scaled, p.kappa, 1e-6 * p.kappa);
    // bounded by kappa everywhere
    Rng rng(5);
    for (int i = 0; i < 200; ++i)
        EXPECT_LE(eval_u_radial(p, rng.uniform(0, 50), rng.uniform(0, 50)), p.kappa);
}

TEST(Residual, NonnegativeOnAdmissibleSweep) {
    const auto field = CoefficientField::power_isotropic(1, 2.0);
    const ExactSolutionParams p = default_params(1, 2.0, 4.0);
    const ResidualReport rep = residual_sweep(p, field, SampleBox{10.0, 20.0}, 10000, 42);
    EXPECT_TRUE(rep.verdict);
    EXPECT_GE(rep.min_residual, -1e-10);
}

TEST(Residual, RandomizedAdmissibleFamilies) {
    Rng rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform(0, 3));
        const double ah = rng.uniform(0.3, 3.0);
        const double q = 1.0 + ah / n + rng.uniform(0.05, 2.0);
        const ParameterBox box = admissible_params(n, ah, q);
        ASSERT_FALSE(box.empty);
        const double gamma = box.gamma_min + (box.gamma_max - box.gamma_min) * rng.uniform(0.1, 1.0);
        const double kappa = box.kappa_max(gamma) * rng.uniform(0.1, 1.0);
        const ExactSolutionParams p = make_params(n, ah, q, gamma, kappa);
        const auto field = CoefficientField::power_isotropic(n, ah);
        const ResidualReport rep = residual_sweep(p, field, SampleBox{10.0, 20.0}, 2000, 1000 + trial);
        EXPECT_GE(rep.min_residual, -1e-10)
            << "n=" << n << " ah=" << ah << " q=" << q << " gamma=" << gamma << " kappa=" << kappa;
    }
}

// gamma just past its admissible bound produces a negative residual somewhere;
// documents sharpness of the box without asserting sharpness of kappa.
TEST(Residual, GammaAboveBoxFailsSomewhere) {
    const double q = 4.0, ah = 2.0;
    ExactSolutionParams p;
    p.n = 1;
    p.alpha_hat = ah;
    p.q = q;
    p.beta = 1.0 / (q - 1.0);
    p.gamma = 0.26;  // above 1/alpha_hat^2 = 0.25
    p.kappa = std::pow(ah * 1 * (p.gamma - 1.0 / (ah * 1 * (q - 1.0))), 1.0 / (q - 1.0));
    double min_res = std::numeric_limits<double>::infinity();
    for (int it = 0; it <= 200; ++it)
        for (int ir = 0; ir <= 200; ++ir)
            min_res = std::min(min_res, residual_ineq4_radial(p, 10.0 * it / 200, 20.0 * ir / 200));
    EXPECT_LT(min_res, 0.0);
}

TEST(Residual, PairedFieldIsRequired) {
    const ExactSolutionParams p = default_params(1, 2.0, 4.0);
    const auto wrong_alpha = CoefficientField::power_isotropic(1, 1.0);
    const auto wrong_kind = CoefficientField::constant(1, 1.0);
    const std::vector<double> x{1.0};
    EXPECT_THROW(residual_ineq4(p, wrong_alpha, 0.5, x), std::invalid_argument);
    EXPECT_THROW(residual_ineq4(p, wrong_kind, 0.5, x), std::invalid_argument);
    const auto ok = CoefficientField::power_isotropic(1, 2.0);
    EXPECT_NO_THROW(residual_ineq4(p, ok, 0.5, x));
}

TEST(Example1, ResidualValues) {
    EXPECT_DOUBLE_EQ(residual_example1(1.0, 0.7), 0.0);
    EXPECT_DOUBLE_EQ(residual_example1(1.0, 3.0), 0.0);
    EXPECT_DOUBLE_EQ(residual_example1(0.5, 2.0), std::exp(2.0) - std::exp(1.0));
    EXPECT_DOUBLE_EQ(residual_example1(0.9, 0.0), 0.0);
    for (double t : {0.0, 0.3, 2.0, 10.0}) EXPECT_GE(residual_example1(0.25, t), 0.0);
    EXPECT_THROW(residual_example1(1.5, 1.0), std::domain_error);
    EXPECT_THROW(residual_example1(0.5, -1.0), std::invalid_argument);
}

// The v = -u residual of the reversed inequality is the exact negation of the
// u residual, pointwise to machine precision.
TEST(SignFlip, OddnessSymmetry) {
    const ExactSolutionParams p = default_params(2, 1.0, 3.0);
    Rng rng(7);
    for (int i = 0; i < 500; ++i) {
        const double t = rng.uniform(0, 10), r = rng.uniform(0, 20);
        const ExactDerivs d = exact_derivs(p, t, r);
        const double res5 = -d.u_t + d.lu + std::pow(d.u, p.q);
        EXPECT_DOUBLE_EQ(res5, -d.residual);
    }
}

TEST(SignFlip, CheckPassesAndFails) {
    const auto field = CoefficientField::power_isotropic(1, 2.0);
    const ExactSolutionParams good = default_params(1, 2.0, 4.0);
    Rng rng(11);
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i < 2000; ++i) samples.emplace_back(rng.uniform(0, 10), rng.uniform(0, 20));
    EXPECT_TRUE(sign_flip_check(good, field, samples));

    ExactSolutionParams bad = good;
    bad.gamma = 0.26;  // outside the box; residual goes negative at large r
    bad.kappa = std::pow(2.0 * (bad.gamma - 1.0 / 6.0), 1.0 / 3.0);
    std::vector<std::pair<double, double>> far;
    for (int i = 0; i <= 100; ++i) far.emplace_back(0.0, 10.0 + 0.1 * i);
    EXPECT_FALSE(sign_flip_check(bad, field, far));
}

// Closed-form u_t, u_r, Lu against Richardson finite differences, 1e-6
// relative agreement.
TEST(Oracle, RichardsonAgreement) {
    const ExactSolutionParams p = default_params(1, 2.0, 4.0);
    Rng rng(123);
    for (int i = 0; i < 1000; ++i) {
        const double t = rng.uniform(0.05, 5.0);
        const double r = rng.uniform(0.05, 5.0);
        const ExactDerivs d = exact_derivs(p, t, r);

        const double ut_fd = oracles::diff1([&](double tt) { return eval_u_radial(p, tt, r); }, t);
        const double ur_fd = oracles::diff1([&](double rr) { return eval_u_radial(p, t, rr); }, r);
        const double urr_fd = oracles::diff2([&](double rr) { return eval_u_radial(p, t, rr); }, r);
        // Lu = a u_rr + (a' + (n-1) a / r) u_r with the analytic paired coefficient
        const double a = std::pow(1.0 + r * r, (2.0 - p.alpha_hat) / 2.0);
        const double ap = (2.0 - p.alpha_hat) * r * std::pow(1.0 + r * r, (2.0 - p.alpha_hat) / 2.0 - 1.0);
        const double lu_fd = a * urr_fd + (ap + (p.n - 1) * a / r) * ur_fd;

        const auto rel = [](double got, double want) {
            return std::abs(got - want) / std::max({std::abs(got), std::abs(want), 1e-12});
        };
        EXPECT_LT(rel(d.u_t, ut_fd), 1e-6);
        EXPECT_LT(rel(d.u_r, ur_fd), 1e-6);
        EXPECT_LT(rel(d.lu, lu_fd), 1e-6);
    }
}
