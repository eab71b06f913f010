#pragma once

// Adaptive Dormand-Prince 5(4) integration of a complex Hamiltonian system
// along a straight segment of the t-plane, with Hairer's 4th-order dense
// output and a magnitude guard against movable poles.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "painleve/core.hpp"
#include "painleve/error.hpp"
#include "painleve/jet.hpp"

namespace painleve {

struct IntegrationConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity(); ///< bound on |dt| per step
    double pole_guard = 1e6;                                   ///< bound on |q|, |p|
    std::size_t max_steps = 2'000'000;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw Error(ErrorKind::ConfigError, "integration tolerances must be positive");
        if (!(max_step > 0.0)) throw Error(ErrorKind::ConfigError, "max_step must be positive");
        if (!(pole_guard > 1.0)) throw Error(ErrorKind::ConfigError, "pole_guard must exceed 1");
    }
};

/// Value and derivatives of a solution at one point; q'' and p'' come from
/// differentiating the equations of motion, never from finite differences.
struct StateJet {
    Complex t;
    Complex q, dq, d2q;
    Complex p, dp, d2p;
};

/// Taylor jets of (q, p) at `s` to order N, obtained by iterating the vector
/// field on truncated series (coefficient k of the right-hand side only
/// depends on coefficients <= k of its arguments).
template <class System, std::size_t N>
std::array<Jet<Complex, N>, 2> solution_jets(const typename System::params_type& v, const CanonicalState& s) {
    using J = Jet<Complex, N>;
    J t = J::variable(s.t);
    J q(s.q), p(s.p);
    for (std::size_t k = 0; k < N; ++k) {
        auto [dq, dp] = System::rhs(v, t, q, p);
        q[k + 1] = dq[k] / static_cast<double>(k + 1);
        p[k + 1] = dp[k] / static_cast<double>(k + 1);
    }
    return {q, p};
}

template <class System>
StateJet state_jet(const typename System::params_type& v, const CanonicalState& s) {
    require_nonzero_t(s.t);
    auto [q, p] = solution_jets<System, 2>(v, s);
    return {s.t, q[0], q.derivative(1), q.derivative(2), p[0], p.derivative(1), p.derivative(2)};
}

namespace detail {

using Vec2 = std::array<Complex, 2>;

inline Vec2 axpy(const Vec2& y, Complex a, const Vec2& x) { return {y[0] + a * x[0], y[1] + a * x[1]}; }

struct DenseStep {
    double lambda; // segment parameter at step start
    double h;      // step length in the segment parameter
    std::array<Vec2, 5> rcont;
};

namespace dp5 {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                        a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
} // namespace dp5

inline Vec2 dense_eval(const DenseStep& st, double theta) {
    const double th1 = 1.0 - theta;
    Vec2 y;
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& r = st.rcont;
        y[i] = r[0][i] + theta * (r[1][i] + th1 * (r[2][i] + theta * (r[3][i] + th1 * r[4][i])));
    }
    return y;
}

} // namespace detail

template <class System>
class Trajectory {
public:
    using system_type = System;
    using params_type = typename System::params_type;

    Trajectory(params_type params, CanonicalState start)
        : params_(params), t_start_(start.t), t_end_(start.t), lambda_{0.0}, nodes_{start} {}

    const params_type& params() const noexcept { return params_; }
    Complex t_start() const noexcept { return t_start_; }
    Complex t_end() const noexcept { return t_end_; }
    std::span<const CanonicalState> nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    const CanonicalState& front() const { return nodes_.front(); }
    const CanonicalState& back() const { return nodes_.back(); }

    /// Segment parameter of `t`, validated to lie on [t_start, t_end].
    double lambda_of(Complex t) const {
        const Complex span = t_end_ - t_start_;
        if (span == Complex{}) {
            if (t != t_start_) throw Error(ErrorKind::OutsideSegment, "t is not on the (empty) trajectory segment");
            return 0.0;
        }
        const Complex lam = (t - t_start_) / span;
        constexpr double slack = 1e-12;
        if (std::abs(lam.imag()) > slack || lam.real() < -slack || lam.real() > 1.0 + slack)
            throw Error(ErrorKind::OutsideSegment, "t is not on the trajectory segment");
        return std::clamp(lam.real(), 0.0, 1.0);
    }

    CanonicalState sample(Complex t) const {
        const double lam = lambda_of(t);
        auto it = std::upper_bound(lambda_.begin(), lambda_.end(), lam);
        std::size_t k = it == lambda_.begin() ? 0 : static_cast<std::size_t>(it - lambda_.begin()) - 1;
        for (std::size_t j : {k, k + 1}) {
            if (j < nodes_.size() && nodes_[j].t == t) return nodes_[j];
        }
        if (lam == lambda_[k]) return {t, nodes_[k].q, nodes_[k].p};
        if (k >= dense_.size()) k = dense_.size() - 1;
        const auto& st = dense_[k];
        const double theta = std::clamp((lam - st.lambda) / st.h, 0.0, 1.0);
        auto y = detail::dense_eval(st, theta);
        return {t, y[0], y[1]};
    }

    StateJet jet(Complex t) const { return state_jet<System>(params_, sample(t)); }

private:
    template <class S>
    friend Trajectory<S> integrate_system(const typename S::params_type&, const CanonicalState&, Complex,
                                          const IntegrationConfig&);

    params_type params_;
    Complex t_start_;
    Complex t_end_;
    std::vector<double> lambda_;
    std::vector<CanonicalState> nodes_;
    std::vector<detail::DenseStep> dense_;
};

inline void check_segment_avoids_origin(Complex t0, Complex t1) {
    if (t0 == Complex{} || t1 == Complex{})
        throw Error(ErrorKind::SegmentThroughOrigin, "segment endpoint at t = 0");
    const Complex d = t1 - t0;
    if (d == Complex{}) return;
    const double lam = std::clamp(-(t0 * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
    const double closest = std::abs(t0 + lam * d);
    if (closest <= 1e-14 * std::max(std::abs(t0), std::abs(t1)))
        throw Error(ErrorKind::SegmentThroughOrigin, "segment passes through t = 0");
}

/// Integrates System from s0 to t_end along the straight segment.
template <class System>
Trajectory<System> integrate_system(const typename System::params_type& v, const CanonicalState& s0, Complex t_end,
                                    const IntegrationConfig& cfg) {
    using detail::axpy;
    using detail::Vec2;
    namespace c = detail::dp5;

    cfg.validate();
    if constexpr (System::singular_at_origin) check_segment_avoids_origin(s0.t, t_end);

    Trajectory<System> tr(v, s0);
    tr.t_end_ = t_end;
    const Complex span = t_end - s0.t;
    if (span == Complex{}) return tr;

    auto f = [&](double lam, const Vec2& y) -> Vec2 {
        const Complex t = s0.t + lam * span;
        auto [dq, dp] = System::rhs(v, t, y[0], y[1]);
        return {span * dq, span * dp};
    };
    auto norm = [&](const Vec2& err, const Vec2& y0, const Vec2& y1) {
        double acc = 0.0;
        for (std::size_t i = 0; i < 2; ++i) {
            const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
            const double r = std::abs(err[i]) / sc;
            acc += r * r;
        }
        return std::sqrt(acc / 2.0);
    };
    auto guard_exceeded = [&](const Vec2& y) {
        return !(std::abs(y[0]) <= cfg.pole_guard && std::abs(y[1]) <= cfg.pole_guard);
    };

    if (guard_exceeded({s0.q, s0.p}))
        throw Error(ErrorKind::PoleEncountered, "initial state already exceeds the pole guard");

    const double h_max = std::min(1.0, cfg.max_step / std::abs(span));
    Vec2 y{s0.q, s0.p};
    double lam = 0.0;
    Vec2 k1 = f(lam, y);

    // Initial step heuristic (Hairer, Norsett, Wanner).
    double h;
    {
        const double d0 = norm(y, Vec2{}, Vec2{});
        const double d1 = norm(k1, Vec2{}, Vec2{});
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, h_max);
        Vec2 y1 = axpy(y, h0, k1);
        Vec2 k2 = f(h0, y1);
        const double d2 = norm({k2[0] - k1[0], k2[1] - k1[1]}, Vec2{}, Vec2{}) / h0;
        const double dm = std::max(d1, d2);
        const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 1.0 / 5.0);
        h = std::min({100.0 * h0, h1, h_max});
    }

    std::size_t steps = 0;
    bool last = false;
    while (!last) {
        if (++steps > cfg.max_steps) throw Error(ErrorKind::StepSizeUnderflow, "maximum number of steps exceeded");
        if (lam + h >= 1.0) {
            h = 1.0 - lam;
            last = true;
        }
        if (h < 1e-14 * std::max(1.0, lam))
            throw Error(ErrorKind::StepSizeUnderflow,
                        "step size underflow near t = " + std::to_string((s0.t + lam * span).real()));

        Vec2 y2{}, y3{}, y4{}, y5{}, y6{}, y7{};
        Vec2 k2{}, k3{}, k4{}, k5{}, k6{}, k7{};
        for (std::size_t i = 0; i < 2; ++i) y2[i] = y[i] + h * (c::a21 * k1[i]);
        k2 = f(lam + c::c2 * h, y2);
        for (std::size_t i = 0; i < 2; ++i) y3[i] = y[i] + h * (c::a31 * k1[i] + c::a32 * k2[i]);
        k3 = f(lam + c::c3 * h, y3);
        for (std::size_t i = 0; i < 2; ++i) y4[i] = y[i] + h * (c::a41 * k1[i] + c::a42 * k2[i] + c::a43 * k3[i]);
        k4 = f(lam + c::c4 * h, y4);
        for (std::size_t i = 0; i < 2; ++i)
            y5[i] = y[i] + h * (c::a51 * k1[i] + c::a52 * k2[i] + c::a53 * k3[i] + c::a54 * k4[i]);
        k5 = f(lam + c::c5 * h, y5);
        for (std::size_t i = 0; i < 2; ++i)
            y6[i] = y[i] + h * (c::a61 * k1[i] + c::a62 * k2[i] + c::a63 * k3[i] + c::a64 * k4[i] + c::a65 * k5[i]);
        k6 = f(lam + h, y6);
        for (std::size_t i = 0; i < 2; ++i)
            y7[i] = y[i] + h * (c::a71 * k1[i] + c::a73 * k3[i] + c::a74 * k4[i] + c::a75 * k5[i] + c::a76 * k6[i]);
        k7 = f(lam + h, y7);

        Vec2 e;
        for (std::size_t i = 0; i < 2; ++i)
            e[i] = h * (c::e1 * k1[i] + c::e3 * k3[i] + c::e4 * k4[i] + c::e5 * k5[i] + c::e6 * k6[i] + c::e7 * k7[i]);
        const double err = norm(e, y, y7);

        if (!std::isfinite(err) || err > 1.0) {
            const double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
            h *= fac;
            last = false;
            continue;
        }

        detail::DenseStep st;
        st.lambda = lam;
        st.h = h;
        for (std::size_t i = 0; i < 2; ++i) {
            const Complex ydiff = y7[i] - y[i];
            const Complex bspl = h * k1[i] - ydiff;
            st.rcont[0][i] = y[i];
            st.rcont[1][i] = ydiff;
            st.rcont[2][i] = bspl;
            st.rcont[3][i] = ydiff - h * k7[i] - bspl;
            st.rcont[4][i] = h * (c::d1 * k1[i] + c::d3 * k3[i] + c::d4 * k4[i] + c::d5 * k5[i] + c::d6 * k6[i] +
                                  c::d7 * k7[i]);
        }

        lam = last ? 1.0 : lam + h;
        y = y7;
        k1 = k7;
        const Complex t_node = last ? t_end : s0.t + lam * span;
        if (guard_exceeded(y))
            throw Error(ErrorKind::PoleEncountered, "|q| or |p| exceeded the pole guard near t = " +
                                                        std::to_string(t_node.real()) + (t_node.imag() < 0 ? "" : "+") +
                                                        std::to_string(t_node.imag()) + "i");
        tr.dense_.push_back(st);
        tr.lambda_.push_back(lam);
        tr.nodes_.push_back({t_node, y[0], y[1]});

        const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h = std::min(h * fac, h_max);
    }
    return tr;
}

inline Trajectory<PiiiPrimeSystem> integrate(const ParameterPoint& v, const CanonicalState& s0, Complex t_end,
                                             const IntegrationConfig& cfg = {}) {
    return integrate_system<PiiiPrimeSystem>(v, s0, t_end, cfg);
}

template <class System>
CanonicalState sample(const Trajectory<System>& tr, Complex t) {
    return tr.sample(t);
}

template <class System>
StateJet jet(const Trajectory<System>& tr, Complex t) {
    return tr.jet(t);
}

} // namespace painleve
