#include <gtest/gtest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "painleve/classical.hpp"
#include "painleve/integrator.hpp"
#include "test_util.hpp"

using namespace painleve;
using painleve::testing::cdiff;
namespace bm = boost::math;

namespace {
double rel(Complex a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
} // namespace

TEST(Classify, Examples) {
    EXPECT_EQ(classify({0.0, 0.0}).cls, SolutionClass::OneParameter);
    EXPECT_EQ(classify({0.0, 1.0}).cls, SolutionClass::Rational);
    EXPECT_EQ(classify({0.5, 1.0 / 3.0}).cls, SolutionClass::Generic);
    auto mixed = classify({0.5, 0.5 + 1.0});
    // v2 + v1 = 2, v2 - v1 = 1
    EXPECT_EQ(mixed.cls, SolutionClass::Generic);
    EXPECT_TRUE(mixed.mixed_parity);
    EXPECT_EQ(classify({0.3, 1.7}).cls, SolutionClass::OneParameter);
    EXPECT_EQ(classify({0.3, 0.7}).cls, SolutionClass::Generic);
    try {
        (void)classify(Complex(0.0, 1.0), 0.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonRealInput);
    }
}

TEST(Classify, InvariantUnderTableActions) {
    for (int a = -8; a <= 8; ++a)
        for (int b = -8; b <= 8; ++b) {
            const ParameterPoint v{a / 2.0, b / 3.0};
            const auto c = classify(v);
            for (auto g : {Generator::s0, Generator::s1, Generator::s2}) {
                const auto d = classify(act_on_params(g, v));
                EXPECT_EQ(c.cls, d.cls);
                EXPECT_EQ(c.mixed_parity, d.mixed_parity);
            }
        }
}

TEST(Bessel, RealAgainstBoost) {
    for (double nu : {0.0, 0.3, 1.0, 2.5, 4.0, 7.25, 10.0}) {
        for (double x : {0.01, 0.4, 1.0, 1.99, 2.0, 3.7, 8.0, 15.0, 20.0, 35.0}) {
            EXPECT_LT(rel(bessel_i(nu, x), bm::cyl_bessel_i(nu, x)), 1e-13) << nu << " " << x;
            EXPECT_LT(rel(bessel_k(nu, x), bm::cyl_bessel_k(nu, x)), 1e-13) << nu << " " << x;
            const double j = bm::cyl_bessel_j(nu, x), y = bm::cyl_neumann(nu, x);
            const double scale = std::max(std::abs(j), std::abs(y));
            EXPECT_LT(std::abs(bessel_j(nu, x) - j), 1e-13 * scale) << nu << " " << x;
            EXPECT_LT(std::abs(bessel_y(nu, x) - y), 1e-13 * scale) << nu << " " << x;
        }
    }
}

TEST(Bessel, NegativeOrders) {
    for (double nu : {0.3, 1.0, 2.5, 3.0}) {
        for (double x : {0.5, 3.0, 12.0}) {
            EXPECT_LT(rel(bessel_i(-nu, x), bm::cyl_bessel_i(-nu, x)), 1e-12) << nu << " " << x;
            EXPECT_LT(rel(bessel_k(-nu, x), bm::cyl_bessel_k(nu, x)), 1e-13);
            const double j = bm::cyl_bessel_j(-nu, x), y = bm::cyl_neumann(-nu, x);
            const double scale = std::max(std::abs(j), std::abs(y));
            EXPECT_LT(std::abs(bessel_j(-nu, x) - j), 1e-12 * scale) << nu << " " << x;
            EXPECT_LT(std::abs(bessel_y(-nu, x) - y), 1e-12 * scale) << nu << " " << x;
        }
    }
    EXPECT_LT(cdiff(bessel_i(-1.0, 1.0), bessel_i(1.0, 1.0)), 1e-16);
}

TEST(Bessel, ComplexPathAgreesOnRealAxis) {
    // nudge the argument off the axis by nothing: force the series path with a complex order of zero imaginary part
    for (double nu : {0.0, 0.4, 1.0, 2.0, 3.6}) {
        for (double x : {0.3, 1.0, 4.0, 9.0}) {
            const Complex z(x, 0.0);
            using namespace detail::bessel;
            EXPECT_LT(cdiff(complex_path(Kind::I, nu, z), bessel_i(nu, x)), 1e-12 * std::abs(bessel_i(nu, x)));
            EXPECT_LT(cdiff(complex_path(Kind::J, nu, z), bessel_j(nu, x)), 1e-12);
            EXPECT_LT(cdiff(complex_path(Kind::Y, nu, z), bessel_y(nu, x)), 1e-11 * (1.0 + std::abs(bessel_y(nu, x))));
            EXPECT_LT(cdiff(complex_path(Kind::K, nu, z), bessel_k(nu, x)),
                      1e-10 * std::abs(bessel_k(nu, x)) + 1e-11);
        }
    }
}

TEST(Bessel, ComplexRelations) {
    painleve::testing::ComplexSampler rnd(8);
    for (int k = 0; k < 50; ++k) {
        const Complex z = rnd(0.3, 4.0), nu = k % 2 ? rnd(-2.0, 2.0) : Complex(double(k % 5 - 2), 0.0);
        // recurrences
        const Complex lhs_j = bessel_j(nu - 1.0, z) + bessel_j(nu + 1.0, z);
        EXPECT_LT(cdiff(lhs_j, 2.0 * nu / z * bessel_j(nu, z)), 1e-11 * (1.0 + std::abs(lhs_j)));
        const Complex lhs_k = bessel_k(nu - 1.0, z) - bessel_k(nu + 1.0, z);
        EXPECT_LT(cdiff(lhs_k, -2.0 * nu / z * bessel_k(nu, z)), 1e-10 * (1.0 + std::abs(lhs_k)));
        // Wronskians
        const Complex wik = bessel_i(nu, z) * bessel_k(nu + 1.0, z) + bessel_i(nu + 1.0, z) * bessel_k(nu, z);
        EXPECT_LT(cdiff(wik, 1.0 / z), 1e-10);
        const Complex wjy = bessel_j(nu + 1.0, z) * bessel_y(nu, z) - bessel_j(nu, z) * bessel_y(nu + 1.0, z);
        EXPECT_LT(cdiff(wjy, 2.0 / (M_PI * z)), 1e-10);
    }
}

TEST(Bessel, Limits) {
    EXPECT_THROW(bessel_i(0.0, 41.0), Error);
    EXPECT_THROW(bessel_i(0.0, Complex(8.0, 8.0)), Error);
    EXPECT_THROW(bessel_i(0.0, 0.0), Error);
    try {
        (void)bessel_j(0.0, 100.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::EvaluationOverflow);
    }
}

TEST(BesselTau, SmallDeterminants) {
    EXPECT_LT(cdiff(bessel_tau({0, 0.7, 0.0, BesselKind::IK}, 2.0), bm::cyl_bessel_i(0.7, std::sqrt(2.0))), 1e-14);
    const double i0 = bm::cyl_bessel_i(0, 1.0), i1 = bm::cyl_bessel_i(1, 1.0);
    EXPECT_LT(rel(bessel_tau({1, 0.0, 0.0, BesselKind::IK}, 1.0), i0 * i0 - i1 * i1), 1e-10);

    const BesselTauSpec g{1, 0.3, {0.2, -0.1}, BesselKind::JY};
    const Complex t(1.7, 0.4);
    auto m = bessel_tau_matrix(g, t);
    EXPECT_LT(cdiff(bessel_tau(g, t), m[0][0] * m[1][1] - m[0][1] * m[1][0]), 1e-14);
}

TEST(BesselTau, ToeplitzStructure) {
    const BesselTauSpec g{3, 0.4, 0.5, BesselKind::IK};
    auto m = bessel_tau_matrix(g, 2.3);
    const Complex z = std::sqrt(2.3);
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
            if (j > 0 && k > 0) {
                EXPECT_EQ(m[j][k], m[j - 1][k - 1]);
            }
            const Complex order = 0.4 + double(j - k);
            EXPECT_EQ(m[j][k], bessel_i(order, z) + 0.5 * bessel_k(order, z));
        }
    EXPECT_THROW(bessel_tau_matrix({-1, 0.0, 0.0, BesselKind::IK}, 1.0), Error);
}

TEST(BesselTau, LogDerivativeConverges) {
    const BesselTauSpec g{2, 0.25, 0.3, BesselKind::IK};
    const double t = 1.4;
    auto fd = [&](double h) {
        return (std::log(bessel_tau(g, t + h)) - std::log(bessel_tau(g, t - h))) / (2.0 * h);
    };
    const Complex a = fd(1e-2), b = fd(1e-3), c = fd(1e-4);
    EXPECT_LT(std::abs(b - c), std::abs(a - b));
    EXPECT_LT(std::abs(b - c), 1e-6);
    EXPECT_TRUE(std::isfinite(std::abs(c)));
}

TEST(Exact, PolynomialArithmetic) {
    const auto s = Polynomial::monomial(1);
    const Polynomial one(GaussianRational(1));
    const auto a = (s - one) * (s + one);
    auto [q, r] = divmod(a, s - one);
    EXPECT_EQ(q, s + one);
    EXPECT_TRUE(r.is_zero());
    EXPECT_EQ(gcd(a, (s + one) * (s + one)), s + one);
    const RationalFunction f(a, (s + one) * s);
    EXPECT_EQ(f.numerator(), s - one);
    EXPECT_EQ(f.denominator(), s);
    EXPECT_EQ(GaussianRational(Rational(1, 2), Rational(-3, 4)).str(), "1/2-3/4i");
    EXPECT_EQ(GaussianRational::i() * GaussianRational::i(), GaussianRational(-1));
}

TEST(Rational, SeedIsExact) {
    const auto seed = rational_seed();
    EXPECT_EQ(seed.params, (ParameterPoint{0.0, 1.0}));
    auto [a, b] = exact_eom_residual(seed);
    EXPECT_TRUE(a.is_zero());
    EXPECT_TRUE(b.is_zero());
    EXPECT_EQ(classify(seed.params).cls, SolutionClass::Rational);

    // the q = sqrt(t) jet is a PIII' solution for the seed's scalar parameters
    using J = Jet<Complex, 2>;
    const Complex t = 1.7;
    const J tj = J::variable(t);
    const J q = sqrt_on_branch(tj, std::sqrt(t));
    EXPECT_LT(std::abs(piii_prime_residual(t, q[0], q.derivative(1), q.derivative(2), scalar_params(seed.params))),
              1e-14);
}

TEST(Rational, TamperedSeedIsNotExact) {
    auto seed = rational_seed();
    seed.p = seed.p + RationalFunction(GaussianRational(Rational(1, 1000000)));
    EXPECT_FALSE(is_exact_solution(seed));
}

TEST(Rational, ShiftsStayExact) {
    auto r = rational_seed();
    for (int k = 1; k <= 3; ++k) {
        r = rational_step(r, Shift::T1);
        EXPECT_EQ(r.params, (ParameterPoint{double(k), double(k + 1)}));
        EXPECT_TRUE(is_exact_solution(r)) << k;
        EXPECT_EQ(classify(r.params).cls, SolutionClass::Rational);
    }
    const auto t1 = rational_step(rational_seed(), Shift::T1);
    const auto s = RationalFunction::variable();
    EXPECT_EQ(t1.q, -s);
    EXPECT_EQ(t1.p, RationalFunction(GaussianRational(Rational(-3, 4))) / s);

    const auto t2 = rational_step(rational_seed(), Shift::T2);
    EXPECT_EQ(t2.params, (ParameterPoint{1.0, 0.0}));
    EXPECT_TRUE(is_exact_solution(t2));
    const auto back = rational_step(t2, Shift::T2_inverse);
    EXPECT_EQ(back.params, rational_seed().params);
    EXPECT_TRUE(is_exact_solution(back));
}

TEST(Rational, IdenticallySingular) {
    RationalSolution zero{{0.0, 1.0}, RationalFunction(), RationalFunction(GaussianRational(1))};
    try {
        (void)apply_exact(GeneratorWord{{Generator::s2, Generator::s0}}, zero);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IdenticallySingular);
        EXPECT_EQ(e.index(), 1);
    }
    EXPECT_THROW(apply_exact(Generator::s1, zero), Error);
}

TEST(Rational, MatchesIntegration) {
    for (const auto& r : {rational_seed(), rational_step(rational_seed(), Shift::T1)}) {
        const auto s0 = evaluate(r, 1.0);
        auto tr = integrate(r.params, s0, 2.0);
        for (const auto& n : tr.nodes()) {
            const auto e = evaluate(r, n.t);
            EXPECT_LT(cdiff(e.q, n.q), 1e-9);
            EXPECT_LT(cdiff(e.p, n.p), 1e-9);
        }
    }
}
