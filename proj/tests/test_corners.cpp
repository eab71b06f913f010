#include <gtest/gtest.h>

#include <cmath>

#include "painleve/corners.hpp"
#include "painleve/integrator.hpp"
#include "test_util.hpp"

using namespace painleve;
using painleve::testing::cdiff;

namespace {

const CanonicalState kStart{1.0, {0.5, 0.2}, {0.3, 0.4}};

const Trajectory<PiiiPrimeSystem>& origin_trajectory() {
    static const auto tr = integrate({0.0, 0.0}, kStart, 2.0);
    return tr;
}

BranchedState p_one_point() { return {{4.0, 0.37, 1.0}, 2.0, 1.0, 0.0}; }

} // namespace

TEST(Branches, PrincipalRoots) {
    auto b = branch_init({1.0, 0.0, 4.0});
    EXPECT_EQ(b.sqrt_p, Complex(2.0));
    EXPECT_LT(cdiff(b.sqrt_pm1, std::sqrt(3.0)), 1e-15);
    EXPECT_EQ(branch_init({1.0, 0.0, 1.0}).sqrt_pm1, Complex(0.0));
    auto g = branch_init({1.0, 0.0, {0.3, 0.4}});
    EXPECT_GE(g.sqrt_p.real(), 0.0);
    EXPECT_GE(g.sqrt_pm1.real(), 0.0);
    EXPECT_LT(cdiff(g.sqrt_p * g.sqrt_p, {0.3, 0.4}), 1e-15);
    // on the cut: positive imaginary part
    EXPECT_EQ(branch_init({1.0, 0.0, 0.0}).sqrt_pm1, Complex(0.0, 1.0));
}

TEST(Branches, ConstantSequenceKeepsBranches) {
    std::vector<CanonicalState> s(5, CanonicalState{1.0, 0.2, {-2.0, 0.1}});
    auto b = branch_continue(s);
    for (const auto& x : b) {
        EXPECT_EQ(x.sqrt_p, b[0].sqrt_p);
        EXPECT_EQ(x.sqrt_pm1, b[0].sqrt_pm1);
    }
}

TEST(Branches, LoopsAndCrossings) {
    // loop around p = 2 encloses neither 0 nor 1
    std::vector<CanonicalState> loop;
    for (int k = 0; k <= 400; ++k)
        loop.push_back({1.0, 0.0, 2.0 + 0.5 * std::polar(1.0, 2.0 * M_PI * k / 400.0)});
    auto b = branch_continue(loop);
    EXPECT_LT(cdiff(b.back().sqrt_p, b.front().sqrt_p), 1e-12);
    EXPECT_LT(cdiff(b.back().sqrt_pm1, b.front().sqrt_pm1), 1e-12);

    // a loop around p = 1 flips sqrt(p-1) only
    std::vector<CanonicalState> around_one;
    for (int k = 0; k <= 400; ++k)
        around_one.push_back({1.0, 0.0, 1.0 + 0.5 * std::polar(1.0, 2.0 * M_PI * k / 400.0)});
    auto c = branch_continue(around_one);
    EXPECT_LT(cdiff(c.back().sqrt_p, c.front().sqrt_p), 1e-12);
    EXPECT_LT(cdiff(c.back().sqrt_pm1, -c.front().sqrt_pm1), 1e-12);

    // passing close to 1: the root stays continuous rather than bouncing
    std::vector<CanonicalState> near;
    for (int k = 0; k <= 200; ++k) near.push_back({1.0, 0.0, Complex(0.5 + k / 200.0, 1e-3)});
    auto d = branch_continue(near);
    for (std::size_t k = 1; k < d.size(); ++k) EXPECT_LT(cdiff(d[k].sqrt_pm1, d[k - 1].sqrt_pm1), 0.1);
    for (const auto& x : d) EXPECT_LT(cdiff(x.sqrt_pm1 * x.sqrt_pm1, x.base.p - 1.0), 1e-14);
}

TEST(Branches, AmbiguousStepThrows) {
    std::vector<CanonicalState> s{{1.0, 0.0, 2.0}, {1.0, 0.0, 2.0}, {1.0, 0.0, 1.0}};
    // p - 1 = 0 at the last node: both roots are zero, distances equal
    try {
        (void)branch_continue(s);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::AmbiguousBranch);
        EXPECT_EQ(e.index(), 2);
    }
}

TEST(ToCorner, WAtPOne) {
    auto w = to_corner(CornerLabel::W, p_one_point());
    EXPECT_EQ(w.t, Complex(1.0));
    EXPECT_LT(cdiff(w.q, {0.0, 1.0}), 1e-15);
    EXPECT_LT(cdiff(w.p, {1.0, 0.25}), 1e-15);
}

TEST(ToCorner, NAtPOne) {
    auto n = to_corner(CornerLabel::N, p_one_point());
    const Complex i = I_unit;
    EXPECT_LT(cdiff(n.q, -i * (0.5 + 2.0 * i) / (0.5 - 2.0 * i)), 1e-14);
    EXPECT_LT(cdiff(n.p, {1.0, 0.25}), 1e-14);
}

TEST(ToCorner, WAtPZero) {
    auto w = to_corner(CornerLabel::W, {{4.0, 0.0, 0.0}, 2.0, 0.0, I_unit});
    EXPECT_LT(cdiff(w.q, -1.0), 1e-15);
    EXPECT_LT(cdiff(w.p, 0.25), 1e-15);
}

TEST(ToCorner, RejectsOtherParameters) {
    auto bs = branch_init(kStart);
    try {
        (void)to_corner(CornerLabel::E, bs, {0.5, 0.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidParams);
    }
}

TEST(ToCorner, ZeroDenominator) {
    // p = 1/2 on branches sqrt(p-1) = -sqrt(p) gives sqrt(p) + sqrt(p-1) = 0 only if p = p-1; use
    // a forged branch pair to reach it
    BranchedState bs{{1.0, 0.3, 0.5}, 1.0, {0.5, 0.0}, {-0.5, 0.0}};
    try {
        (void)to_corner(CornerLabel::S, bs);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ZeroDenominator);
    }
}

TEST(ToCorner, BranchFlipNegatesWQ) {
    painleve::testing::ComplexSampler rnd(7);
    for (int k = 0; k < 50; ++k) {
        auto bs = branch_init({rnd(0.3, 2.0), rnd(), rnd()});
        EXPECT_EQ(to_corner(CornerLabel::W, bs.flipped()).q, -to_corner(CornerLabel::W, bs).q);
    }
}

TEST(ToCorner, DegeneracyAtPOne) {
    auto a = p_one_point();
    auto b = a;
    b.base.q = Complex(-3.0, 1.5);
    auto wa = to_corner(CornerLabel::W, a), wb = to_corner(CornerLabel::W, b);
    EXPECT_EQ(wa.q, wb.q);
    EXPECT_EQ(wa.p, wb.p);
    EXPECT_LT(cdiff(wa.q * wa.q, -wa.t), 1e-15);
}

TEST(ToCorner, TamperSlotsAreCounted) {
    for (auto c : all_corners) EXPECT_GT(corner_term_count(c), 5) << to_string(c);
    auto bs = branch_init(kStart);
    auto clean = to_corner(CornerLabel::W, bs);
    auto bad = to_corner(CornerLabel::W, bs, {}, {CornerLabel::W, 0});
    EXPECT_EQ(bad.q, -clean.q);
    // tampering another corner does nothing here
    EXPECT_EQ(to_corner(CornerLabel::W, bs, {}, {CornerLabel::N, 0}).q, clean.q);
}

TEST(FromW, Examples) {
    // p = 0 when Q^2 = T; q information lost so from_w refuses
    try {
        (void)from_w({1.0, 1.0, 0.3});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateLocus);
    }
    EXPECT_THROW(from_w({1.0, I_unit, 0.3}), Error);
    EXPECT_THROW(from_w({1.0, 0.0, 0.3}), Error);
    // nearby non-degenerate point gives p close to 0
    auto s = from_w({1.0, 1.0 + 1e-6, 0.3});
    EXPECT_LT(std::abs(s.p), 1e-11);
}

TEST(FromW, RoundtripGeneric) {
    auto bs = branch_init({2.0, 0.7, {0.3, 0.4}});
    auto back = from_w(to_corner(CornerLabel::W, bs));
    EXPECT_LT(cdiff(back.t, 2.0), 1e-12);
    EXPECT_LT(cdiff(back.q, 0.7), 1e-12);
    EXPECT_LT(cdiff(back.p, {0.3, 0.4}), 1e-12);
}

TEST(FromW, RoundtripRandomStatesAndBranches) {
    painleve::testing::ComplexSampler rnd(31);
    for (int k = 0; k < 200; ++k) {
        auto bs = branch_init({rnd(0.3, 2.0), rnd(), rnd()});
        if (k % 2) bs = bs.flipped();
        auto back = from_w(to_corner(CornerLabel::W, bs));
        const double scale = 1.0 + std::abs(bs.base.q) + std::abs(bs.base.p);
        EXPECT_LT(cdiff(back.q, bs.base.q), 1e-11 * scale);
        EXPECT_LT(cdiff(back.p, bs.base.p), 1e-11 * scale);
    }
}

TEST(Transport, AllCornersAlongTrajectory) {
    const auto branches = branch_continue(origin_trajectory());
    for (auto c : all_corners) {
        double worst = 0.0;
        for (const auto& bs : branches) worst = std::max(worst, corner_transport_residual(c, bs));
        EXPECT_LT(worst, 1e-8) << to_string(c);
    }
}

TEST(Transport, AllCornersAtRandomStatesEitherBranch) {
    painleve::testing::ComplexSampler rnd(12);
    for (int k = 0; k < 100; ++k) {
        auto bs = branch_init({rnd(0.3, 2.0), rnd(), rnd()});
        if (k % 3 == 0) bs = bs.flipped();
        for (auto c : all_corners) {
            auto img = to_corner(c, bs);
            const double scale = 1.0 + std::norm(img.q) + std::norm(img.p);
            EXPECT_LT(corner_transport_residual(c, bs), 1e-9 * scale * scale) << to_string(c);
        }
    }
}

TEST(Transport, TamperedTermBreaksTransport) {
    auto bs = branch_init(kStart);
    for (auto c : all_corners) {
        const int n = corner_term_count(c);
        for (int k = 0; k < n; ++k) {
            const double r = corner_transport_residual(c, bs, {c, k});
            EXPECT_GT(r, 1e-6) << to_string(c) << " slot " << k;
        }
    }
}

TEST(QOnlyW, Example) {
    auto r = q_only_w(4.0, 1.0, 1.25);
    EXPECT_EQ(r.T, Complex(1.0));
    EXPECT_LT(cdiff(r.Q, I_unit), 1e-15);
    EXPECT_THROW(q_only_w(4.0, 0.0, 1.0), Error);
    EXPECT_THROW(q_only_w(0.0, 1.0, 1.0), Error);
}

TEST(QOnlyW, MatchesWUnderMatchedBranches) {
    const auto branches = branch_continue(origin_trajectory());
    for (const auto& bs : branches) {
        auto [dq, dp] = eom(ParameterPoint{}, bs.base.t, bs.base.q, bs.base.p);
        (void)dp;
        const auto r = q_only_w(bs.base.t, bs.base.q, dq, matched_signs(bs));
        EXPECT_LT(cdiff(r.Q, to_corner(CornerLabel::W, bs).q), 1e-12);
        // radicands never vanish together
        const Complex ra = (bs.base.t * dq - bs.base.q * bs.base.q - bs.base.t) / 2.0;
        const Complex rb = (bs.base.t * dq + bs.base.q * bs.base.q - bs.base.t) / 2.0;
        EXPECT_GT(std::abs(ra) + std::abs(rb), 0.0);
    }
}

TEST(PiiiForm, InverseExamples) {
    EXPECT_LT(cdiff(piii_form_inverse(1.0, 2.0, 1.0), 2.0 / 15.0), 1e-15);
    EXPECT_EQ(piii_form_inverse(1.0, 0.7, 0.0), Complex(0.0));
    EXPECT_THROW(piii_form_inverse(1.0, 1.0, 1.0), Error);
    EXPECT_THROW(piii_form_inverse(1.0, I_unit, 1.0), Error);
}

TEST(PiiiForm, TransportAndRoundtrip) {
    // mu(s) = q(s^2)/s turns a v = (0,0) solution into PIII(0, 4, 4, -4)
    const auto& tr = origin_trajectory();
    using J = Jet<Complex, 3>;
    const auto src = piii_form_source_params();
    for (double s = 1.0; s <= std::sqrt(2.0); s += 0.05) {
        const auto st = tr.sample(s * s);
        auto [dq, dp] = eom(ParameterPoint{}, st.t, st.q, st.p);
        (void)dp;
        const Complex mu = st.q / s;
        const Complex dmu = 2.0 * dq - st.q / (s * s);
        auto mj = piii_solution_jet<4>(s, mu, dmu, src);
        // the second derivative is the source equation itself
        EXPECT_LT(std::abs(piii_residual(s, mu, dmu, mj.derivative(2), src)), 1e-12);
        const J sj = J::variable(s);
        const J mu3 = J::from_coefficients({mj[0], mj[1], mj[2], mj[3]});
        const J dmu3 = J::from_coefficients({mj[1], 2.0 * mj[2], 3.0 * mj[3], 4.0 * mj[4]});
        auto [S, M] = piii_form_map<J>(sj, mu3, dmu3);
        const Complex Sv = S.value(), Mv = M.value();
        const Complex dM = 2.0 * M.derivative(1), d2M = 4.0 * M.derivative(2);
        const double scale = 1.0 + std::norm(Mv);
        EXPECT_LT(std::abs(piii_residual(Sv, Mv, dM, d2M, piii_form_target_params())), 1e-8 * scale * scale);
        EXPECT_LT(cdiff(piii_form_inverse(Sv, Mv, dM), mu), 1e-8);
        EXPECT_LT(cdiff(piii_form_transform(s, mu, dmu).second, Mv), 1e-15);
    }
}

TEST(ProofChain, StagesOnTrajectory) {
    auto rep = verify_proof_chain(origin_trajectory());
    EXPECT_EQ(rep.nodes, origin_trajectory().size());
    EXPECT_LT(rep.pv_dual, 1e-6);
    EXPECT_LT(rep.pv, 1e-6);
    EXPECT_LT(rep.piii_u, 1e-6);
    EXPECT_LT(rep.piii_v, 1e-6);
    EXPECT_LT(rep.piii_prime_w, 1e-6);
    EXPECT_LT(rep.piii_prime_final, 1e-6);
    EXPECT_LT(rep.w_map_agreement, 1e-12);
    EXPECT_EQ(rep.final_params, (ParameterPoint{-1.0, 0.0}));
}

TEST(ProofChain, ConstantPIsNotAPvSolution) {
    // y constant: only the gamma term survives
    const Complex t = 1.5, y = Complex(0.4, 0.2);
    EXPECT_LT(cdiff(pv_residual(t, y, 0.0, 0.0, {0.0, 0.0, 2.0, 0.0}), -2.0 * y / t), 1e-15);
}

TEST(ProofChain, RequiresOrigin) {
    auto tr = integrate({0.5, 0.0}, kStart, 1.2);
    EXPECT_THROW(verify_proof_chain(tr), Error);
}

TEST(Riccati, AgainstIndependentTarget) {
    const auto& src = origin_trajectory();
    auto img = to_corner(CornerLabel::W, branch_init(src.front()));
    auto target = integrate(corner_params(CornerLabel::W), img, 0.5);
    EXPECT_LT(riccati_form_check(src, target), 1e-8);
    EXPECT_THROW(riccati_form_check(target, target), Error);
}

TEST(Riccati, ZeroNumerator) {
    const Complex T = 0.7, Q = Complex(0.4, 0.3);
    EXPECT_EQ(riccati_q(T, Q, Q / (2.0 * T)), Complex(0.0));
}

TEST(Riccati, MatchesFromWAfterEliminatingP) {
    painleve::testing::ComplexSampler rnd(5);
    const auto vw = corner_params(CornerLabel::W);
    for (int k = 0; k < 100; ++k) {
        const CanonicalState s{rnd(0.2, 1.0), rnd(), rnd()};
        auto [dQ, dP] = eom(vw, s.t, s.q, s.p);
        (void)dP;
        const double scale = 1.0 + std::abs(from_w(s).q);
        EXPECT_LT(cdiff(riccati_q(s.t, s.q, dQ), from_w(s).q), 1e-10 * scale);
    }
}
