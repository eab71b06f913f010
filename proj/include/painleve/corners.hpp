#pragma once

// Canonical transformations from the PIII' system at v = (0,0) to the four
// corners of the Weyl chamber, W = (-1,0), S = (0,-1), E = (1,0), N = (0,1),
// all with T = t/4, together with the W inverse and its q-only forms, the
// equivalent map for standard PIII, and the point-transformation chain
// through PV and PIII that produces the W map.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "painleve/core.hpp"
#include "painleve/error.hpp"
#include "painleve/integrator.hpp"
#include "painleve/jet.hpp"

namespace painleve {

enum class CornerLabel { W, S, E, N };

inline constexpr std::array<CornerLabel, 4> all_corners{CornerLabel::W, CornerLabel::S, CornerLabel::E,
                                                        CornerLabel::N};

inline std::string_view to_string(CornerLabel c) {
    switch (c) {
    case CornerLabel::W: return "W";
    case CornerLabel::S: return "S";
    case CornerLabel::E: return "E";
    case CornerLabel::N: return "N";
    }
    return "?";
}

inline CornerLabel parse_corner(std::string_view s) {
    if (s == "W") return CornerLabel::W;
    if (s == "S") return CornerLabel::S;
    if (s == "E") return CornerLabel::E;
    if (s == "N") return CornerLabel::N;
    throw Error(ErrorKind::ConfigError, "unknown corner '" + std::string(s) + "'");
}

inline ParameterPoint corner_params(CornerLabel c) {
    switch (c) {
    case CornerLabel::W: return {-1.0, 0.0};
    case CornerLabel::S: return {0.0, -1.0};
    case CornerLabel::E: return {1.0, 0.0};
    case CornerLabel::N: return {0.0, 1.0};
    }
    return {};
}

/// A state with chosen branches of sqrt(t), sqrt(p), sqrt(p - 1).
struct BranchedState {
    CanonicalState base;
    Complex sqrt_t;
    Complex sqrt_p;
    Complex sqrt_pm1;

    /// Same point, both p-radicals negated.
    BranchedState flipped() const { return {base, sqrt_t, -sqrt_p, -sqrt_pm1}; }
};

inline BranchedState branch_init(const CanonicalState& s) {
    return {s, principal_sqrt(s.t), principal_sqrt(s.p), principal_sqrt(s.p - 1.0)};
}

namespace detail {

/// Root of x closest to `previous`.
inline Complex nearest_root(Complex x, Complex previous, std::size_t node) {
    const Complex r = principal_sqrt(x);
    const double d_plus = std::abs(r - previous);
    const double d_minus = std::abs(r + previous);
    if (std::abs(d_plus - d_minus) <= 1e-12)
        throw Error(ErrorKind::AmbiguousBranch, "both square roots equidistant from the previous branch",
                    static_cast<int>(node));
    return d_plus < d_minus ? r : -r;
}

} // namespace detail

/// Continues each radical independently along consecutive states by
/// nearest-root selection, starting from principal roots at the first one.
inline std::vector<BranchedState> branch_continue(std::span<const CanonicalState> states) {
    std::vector<BranchedState> out;
    out.reserve(states.size());
    for (std::size_t k = 0; k < states.size(); ++k) {
        if (k == 0) {
            out.push_back(branch_init(states[0]));
            continue;
        }
        const auto& prev = out.back();
        const auto& s = states[k];
        out.push_back({s, detail::nearest_root(s.t, prev.sqrt_t, k), detail::nearest_root(s.p, prev.sqrt_p, k),
                       detail::nearest_root(s.p - 1.0, prev.sqrt_pm1, k)});
    }
    return out;
}

inline std::vector<BranchedState> branch_continue(const Trajectory<PiiiPrimeSystem>& tr) {
    return branch_continue(tr.nodes());
}

/// Fault injection for negative controls: flips the sign of one additive or
/// multiplicative term (slot `term`, in evaluation order) in one corner formula.
struct FormulaTamper {
    std::optional<CornerLabel> corner;
    int term = -1;
};

namespace detail {

class SignSlots {
public:
    SignSlots(CornerLabel c, const FormulaTamper& t) : flip_(t.corner == c ? t.term : -1) {}
    double operator()() { return next_++ == flip_ ? -1.0 : 1.0; }
    int used() const { return next_; }

private:
    int flip_;
    int next_ = 0;
};

template <class S>
void require_nonzero(const S& d, const char* what) {
    const Complex v = value_of(d);
    if (v == Complex{} || !std::isfinite(std::abs(v))) throw Error(ErrorKind::ZeroDenominator, what);
}

} // namespace detail

template <class S>
struct CornerImage {
    S T, Q, P;
};

/// The four corner maps, generic over scalars and jets. The radicals are
/// passed in so the caller controls branches (and their derivatives).
template <class S>
CornerImage<S> corner_map(CornerLabel c, const S& t, const S& q, const S& rt, const S& rp, const S& rpm1,
                          const FormulaTamper& tamper = {}, int* slot_count = nullptr) {
    detail::SignSlots sg(c, tamper);
    const Complex i = I_unit;
    const S X = q * rp * rpm1;
    CornerImage<S> out{t / 4.0, S{}, S{}};
    switch (c) {
    case CornerLabel::W: {
        const double s0 = sg(), s1 = sg(), s2 = sg(), s3 = sg(), s4 = sg(), s5 = sg(), s6 = sg();
        const S sum = rp + s1 * rpm1;
        detail::require_nonzero(sum, "sqrt(p) + sqrt(p-1)");
        out.Q = s0 * i * (rt / 2.0) * sum;
        const S den = rp + s6 * rpm1;
        detail::require_nonzero(den, "sqrt(p) + sqrt(p-1)");
        out.P = s2 * (i / rt) * (s3 * 0.5 + s4 * X - s5 * i * rt * rp) / den;
        break;
    }
    case CornerLabel::S: {
        const double s0 = sg(), s1 = sg(), s2 = sg(), s3 = sg(), s4 = sg(), s5 = sg(), s6 = sg(), s7 = sg(),
                     s8 = sg(), s9 = sg(), s10 = sg(), s11 = sg(), s12 = sg();
        const S sum = rp + s1 * rpm1;
        const S lower = s5 * 0.5 - s6 * X + s7 * i * rt * rpm1;
        detail::require_nonzero(sum, "sqrt(p) + sqrt(p-1)");
        detail::require_nonzero(lower, "1/2 - q sqrt(p) sqrt(p-1) + i sqrt(t) sqrt(p-1)");
        out.Q = s0 * i * (rt / 2.0) / sum * (s2 * 0.5 + s3 * X - s4 * i * rt * rpm1) / lower;
        out.P = -s8 * (i / rt) * (rp + s9 * rpm1) * (s10 * 0.5 - s11 * X + s12 * i * rt * rp);
        break;
    }
    case CornerLabel::E: {
        const double s0 = sg(), s1 = sg(), s2 = sg(), s3 = sg(), s4 = sg(), s5 = sg(), s6 = sg(), s7 = sg(),
                     s8 = sg(), s9 = sg(), s10 = sg(), s11 = sg(), s12 = sg(), s13 = sg(), s14 = sg(), s15 = sg();
        const S d1 = s4 * 0.5 + s5 * X - s6 * i * rt * rpm1;
        const S d2 = s8 * 0.5 + s9 * X + s10 * i * rt * rp;
        detail::require_nonzero(d1, "1/2 + q sqrt(p) sqrt(p-1) - i sqrt(t) sqrt(p-1)");
        detail::require_nonzero(d2, "1/2 + q sqrt(p) sqrt(p-1) + i sqrt(t) sqrt(p)");
        out.Q = -s0 * i * (rt / 2.0) * (rp + s1 * rpm1) * (s2 * 1.0 - s3 / d1 - s7 / d2);
        const S den = rp + s15 * rpm1;
        detail::require_nonzero(den, "sqrt(p) + sqrt(p-1)");
        out.P = -s11 * (i / rt) * (s12 * 0.5 + s13 * X + s14 * i * rt * rp) / den;
        break;
    }
    case CornerLabel::N: {
        const double s0 = sg(), s1 = sg(), s2 = sg(), s3 = sg(), s4 = sg(), s5 = sg(), s6 = sg(), s7 = sg(),
                     s8 = sg(), s9 = sg(), s10 = sg(), s11 = sg(), s12 = sg();
        const S sum = rp + s1 * rpm1;
        const S lower = s5 * 0.5 - s6 * X - s7 * i * rt * rp;
        const S diff = rp - s12 * rpm1;
        detail::require_nonzero(sum, "sqrt(p) + sqrt(p-1)");
        detail::require_nonzero(lower, "1/2 - q sqrt(p) sqrt(p-1) - i sqrt(t) sqrt(p)");
        detail::require_nonzero(diff, "sqrt(p) - sqrt(p-1)");
        out.Q = -s0 * i * (rt / 2.0) / sum * (s2 * 0.5 + s3 * X + s4 * i * rt * rp) / lower;
        out.P = s8 * (i / rt) * (s9 * 0.5 - s10 * X - s11 * i * rt * rp) / diff;
        break;
    }
    }
    if (slot_count) *slot_count = sg.used();
    return out;
}

/// Number of sign slots a FormulaTamper can address in corner `c`.
inline int corner_term_count(CornerLabel c) {
    int n = 0;
    (void)corner_map<Complex>(c, 4.0, 0.3, 2.0, Complex(0.6, 0.2), Complex(0.1, 0.9), {}, &n);
    return n;
}

inline void require_origin(const ParameterPoint& v) {
    if (!(v == ParameterPoint{0.0, 0.0}))
        throw Error(ErrorKind::InvalidParams, "corner transformations start from v = (0, 0)");
}

inline CanonicalState to_corner(CornerLabel c, const BranchedState& bs, const ParameterPoint& v = {},
                                const FormulaTamper& tamper = {}) {
    require_origin(v);
    require_nonzero_t(bs.base.t);
    auto img = corner_map<Complex>(c, bs.base.t, bs.base.q, bs.sqrt_t, bs.sqrt_p, bs.sqrt_pm1, tamper);
    return {img.T, img.Q, img.P};
}

/// Chain-rule image of the solution jet at `bs`: (T, Q, P) with dQ/dT, dP/dT.
struct CornerJet {
    CanonicalState state;
    Complex dQ, dP;
};

inline CornerJet corner_jet(CornerLabel c, const BranchedState& bs, const FormulaTamper& tamper = {}) {
    using J = Jet<Complex, 1>;
    const auto& s = bs.base;
    require_nonzero_t(s.t);
    auto [dq, dp] = eom(ParameterPoint{}, s.t, s.q, s.p);
    const J t = J::variable(s.t);
    const J q = J::from_coefficients({s.q, dq});
    const J p = J::from_coefficients({s.p, dp});
    const J rt = sqrt_on_branch(t, bs.sqrt_t);
    const J rp = sqrt_on_branch(p, bs.sqrt_p);
    const J rpm1 = sqrt_on_branch(p - 1.0, bs.sqrt_pm1);
    auto img = corner_map<J>(c, t, q, rt, rp, rpm1, tamper);
    const Complex dT = img.T[1];
    return {{img.T.value(), img.Q.value(), img.P.value()}, img.Q[1] / dT, img.P[1] / dT};
}

/// Largest residual of the corner's equations of motion along the image of
/// the solution through `bs`; zero when the map transports solutions.
inline double corner_transport_residual(CornerLabel c, const BranchedState& bs, const FormulaTamper& tamper = {}) {
    auto j = corner_jet(c, bs, tamper);
    auto [fq, fp] = eom(corner_params(c), j.state.t, j.state.q, j.state.p);
    return std::max(std::abs(j.dQ - fq), std::abs(j.dP - fp));
}

/// Whether x is zero to rounding relative to `scale`.
inline bool vanishes(Complex x, double scale) { return std::abs(x) <= 64.0 * 2.220446049250313e-16 * scale; }

/// Inverse of the W map: (T, Q, P) at v = (-1, 0) to (t, q, p) at v = (0, 0).
inline CanonicalState from_w(const CanonicalState& s) {
    const Complex T = s.t, Q = s.q, P = s.p;
    require_nonzero_t(T);
    if (Q == Complex{}) throw Error(ErrorKind::ZeroDenominator, "from_w needs Q != 0");
    const Complex Q2 = Q * Q;
    const double scale = std::abs(Q2) + std::abs(T);
    if (vanishes(Q2 + T, scale) || vanishes(Q2 - T, scale))
        throw Error(ErrorKind::DegenerateLocus, "Q^2 = +-T: image of p in {0, 1}, q is not recoverable");
    const Complex q = -2.0 * T * Q * (2.0 * Q2 - 4.0 * Q2 * P - Q - 2.0 * T) / ((Q2 + T) * (Q2 - T));
    const Complex p = -(Q2 - T) * (Q2 - T) / (4.0 * T * Q2);
    return {4.0 * T, q, p};
}

/// q-only inverse: q(4T) from Q and dQ/dT at v = (-1, 0).
inline Complex riccati_q(Complex T, Complex Q, Complex dQ) {
    const Complex Q2 = Q * Q;
    const double scale = std::abs(Q2) + std::abs(T);
    if (vanishes(Q2 + T, scale) || vanishes(Q2 - T, scale))
        throw Error(ErrorKind::DegenerateLocus, "Q^2 = +-T in the q-only inverse");
    return -2.0 * T * Q * (Q - 2.0 * T * dQ) / ((Q2 + T) * (Q2 - T));
}

/// Signs applied to the principal roots of the two radicands of a q-only map.
struct RadicalSigns {
    int first = 1;
    int second = 1;
};

struct CornerPoint {
    Complex T, Q;
};

/// W map with p eliminated: radicands (t q' - q^2 - t)/2 = q^2 (p-1) and
/// (t q' + q^2 - t)/2 = q^2 p on solutions.
inline CornerPoint q_only_w(Complex t, Complex q, Complex dq, RadicalSigns signs = {}) {
    require_nonzero_t(t);
    if (q == Complex{}) throw Error(ErrorKind::SingularPoint, "q-only W map needs q != 0");
    const Complex ra = (t * dq - q * q - t) / 2.0;
    const Complex rb = (t * dq + q * q - t) / 2.0;
    const Complex a = double(signs.first) * principal_sqrt(ra);
    const Complex b = double(signs.second) * principal_sqrt(rb);
    return {t / 4.0, I_unit * principal_sqrt(t) / (2.0 * q) * (a + b)};
}

/// Signs that make q_only_w use q sqrt(p-1) and q sqrt(p) on the branches of `bs`.
inline RadicalSigns matched_signs(const BranchedState& bs) {
    const auto& s = bs.base;
    auto [dq, dp] = eom(ParameterPoint{}, s.t, s.q, s.p);
    (void)dp;
    const Complex ra = (s.t * dq - s.q * s.q - s.t) / 2.0;
    const Complex rb = (s.t * dq + s.q * s.q - s.t) / 2.0;
    const Complex want_a = s.q * bs.sqrt_pm1 * (bs.sqrt_t / principal_sqrt(s.t));
    const Complex want_b = s.q * bs.sqrt_p * (bs.sqrt_t / principal_sqrt(s.t));
    auto pick = [](Complex r, Complex want) {
        const Complex root = principal_sqrt(r);
        return std::abs(root - want) <= std::abs(root + want) ? 1 : -1;
    };
    return {pick(ra, want_a), pick(rb, want_b)};
}

/// Standard-PIII form of the W map: mu(s) with (alpha, beta, gamma, delta) =
/// (0, 4, 4, -4) to M(S) with (0, 0, 4, -4), S = s/2. Generic over jets;
/// the radicals use signs x principal root of the radicand's value.
template <class S>
std::pair<S, S> piii_form_map(const S& s, const S& mu, const S& dmu, RadicalSigns signs = {}) {
    if (value_of(mu) == Complex{}) throw Error(ErrorKind::SingularPoint, "PIII form map needs mu != 0");
    const S ra = mu + s * dmu + 2.0 * s * (mu * mu - 1.0);
    const S rb = mu + s * dmu - 2.0 * s * (mu * mu + 1.0);
    const S a = sqrt_on_branch(ra, double(signs.first) * principal_sqrt(value_of(ra)));
    const S b = sqrt_on_branch(rb, double(signs.second) * principal_sqrt(value_of(rb)));
    const S rs = sqrt_on_branch(s, principal_sqrt(value_of(s)));
    return {s / 2.0, I_unit / (2.0 * rs * mu) * (a + b)};
}

inline std::pair<Complex, Complex> piii_form_transform(Complex s, Complex mu, Complex dmu, RadicalSigns signs = {}) {
    return piii_form_map<Complex>(s, mu, dmu, signs);
}

inline Complex piii_form_inverse(Complex /*S*/, Complex M, Complex dM) {
    const Complex M2 = M * M;
    if (vanishes(M2 + 1.0, std::abs(M2) + 1.0) || vanishes(M2 - 1.0, std::abs(M2) + 1.0))
        throw Error(ErrorKind::ZeroDenominator, "PIII form inverse needs M^4 != 1");
    return M * dM / ((M2 + 1.0) * (M2 - 1.0));
}

/// Scalar parameters of the two standard-PIII systems in the map above.
inline constexpr ScalarParams piii_form_source_params() { return {0.0, 4.0, 4.0, -4.0}; }
inline constexpr ScalarParams piii_form_target_params() { return {0.0, 0.0, 4.0, -4.0}; }

/// Second-order jet of a standard-PIII solution from (s, mu, mu').
template <std::size_t N>
Jet<Complex, N> piii_solution_jet(Complex s, Complex mu, Complex dmu, const ScalarParams& sp) {
    return second_order_taylor<N>([&](const auto& x, const auto& w, const auto& dw) { return piii_rhs(x, w, dw, sp); },
                                  s, mu, dmu);
}

/// Maximal residuals of each stage of the PV / PIII point-transformation
/// chain from the v = (0,0) system to the W corner.
struct ProofChainReport {
    double pv_dual = 0.0;         ///< p satisfies the PV-dual second-order equation
    double pv = 0.0;              ///< y = p/(p-1) satisfies PV(0, 0, 2, 0)
    double piii_u = 0.0;          ///< u with y = ((u+1)/(u-1))^2 satisfies PIII(-1/2, 1/2, 0, 0) in t
    double piii_v = 0.0;          ///< v(z), u = v^2, t = z^2 satisfies PIII(0, 0, -1, 1)
    double piii_prime_w = 0.0;    ///< w(x) = z v(z), x = z^2 satisfies PIII'(0, 0, -1, 1)
    double piii_prime_final = 0.0;///< Q(T) = (i/2) w(4T) satisfies PIII'(0, 0, 4, -4)
    double w_map_agreement = 0.0; ///< |Q_chain - Q_W| with the closed-form W map
    ParameterPoint final_params;  ///< parameters of the final stage, (-1, 0)
    std::size_t nodes = 0;

    double max_stage_residual() const {
        return std::max({pv_dual, pv, piii_u, piii_v, piii_prime_w, piii_prime_final});
    }
};

/// Scalar parameters of the chain's final stage.
inline constexpr ScalarParams proof_chain_final_params() { return {0.0, 0.0, 4.0, -4.0}; }

inline ProofChainReport verify_proof_chain(const Trajectory<PiiiPrimeSystem>& tr) {
    require_origin(tr.params());
    using J = Jet<Complex, 2>;
    ProofChainReport rep;
    rep.final_params = params_from_scalar(proof_chain_final_params());
    const auto branches = branch_continue(tr);
    auto stage_error = [](const char* stage, const char* what) {
        return Error(ErrorKind::SingularPoint, std::string("proof chain stage ") + stage + ": " + what);
    };
    for (const auto& bs : branches) {
        const auto& s = bs.base;
        auto [qj, pj] = solution_jets<PiiiPrimeSystem, 2>(tr.params(), s);
        (void)qj;
        const Complex t = s.t;
        if (s.p == Complex{} || s.p == Complex{1.0}) throw stage_error("(i)", "p in {0, 1}");

        // (i) PV-dual equation for p; with v1 = v2 = 0 the last term drops.
        {
            const Complex p = pj[0], dp = pj.derivative(1), d2p = pj.derivative(2);
            const Complex rhs = 0.5 * (1.0 / p + 1.0 / (p - 1.0)) * dp * dp - dp / t + 2.0 / t * p * (1.0 - p);
            rep.pv_dual = std::max(rep.pv_dual, std::abs(d2p - rhs));
        }
        // (ii) y = p / (p - 1) satisfies PV(0, 0, 2, 0).
        const J y = pj / (pj - 1.0);
        if (y[0] == Complex{1.0}) throw stage_error("(ii)", "y = 1");
        rep.pv = std::max(rep.pv, std::abs(pv_residual(t, y[0], y.derivative(1), y.derivative(2), {0.0, 0.0, 2.0, 0.0})));

        // (iii) sqrt(y) = sqrt(p)/sqrt(p-1), u = (sqrt(y) + 1)/(sqrt(y) - 1).
        const J rp = sqrt_on_branch(pj, bs.sqrt_p);
        const J rpm1 = sqrt_on_branch(pj - 1.0, bs.sqrt_pm1);
        const J ry = rp / rpm1;
        if (ry[0] == Complex{1.0}) throw stage_error("(iii)", "u = 1");
        const J u = (ry + 1.0) / (ry - 1.0);
        rep.piii_u =
            std::max(rep.piii_u, std::abs(piii_residual(t, u[0], u.derivative(1), u.derivative(2), {-0.5, 0.5, 0.0, 0.0})));

        // v(z) = sqrt(u) on the branch sqrt(p) + sqrt(p-1); d/dz = 2z d/dt.
        const J v = rp + rpm1;
        const Complex z = bs.sqrt_t;
        const Complex vz = 2.0 * z * v.derivative(1);
        const Complex vzz = 2.0 * v.derivative(1) + 4.0 * t * v.derivative(2);
        rep.piii_v = std::max(rep.piii_v, std::abs(piii_residual(z, v[0], vz, vzz, {0.0, 0.0, -1.0, 1.0})));

        // (iv) w(x) = z v(z) with x = z^2 = t.
        const J zt = sqrt_on_branch(J::variable(t), z);
        const J w = zt * v;
        rep.piii_prime_w = std::max(
            rep.piii_prime_w, std::abs(piii_prime_residual(t, w[0], w.derivative(1), w.derivative(2), {0.0, 0.0, -1.0, 1.0})));

        // (v) Q(T) = c w(sigma T), c = i/2, sigma = 4.
        const Complex c = 0.5 * I_unit;
        const Complex T = t / 4.0;
        const Complex Q = c * w[0], dQ = c * 4.0 * w.derivative(1), d2Q = c * 16.0 * w.derivative(2);
        rep.piii_prime_final =
            std::max(rep.piii_prime_final, std::abs(piii_prime_residual(T, Q, dQ, d2Q, proof_chain_final_params())));
        rep.w_map_agreement = std::max(rep.w_map_agreement, std::abs(Q - to_corner(CornerLabel::W, bs).q));
        ++rep.nodes;
    }
    return rep;
}

/// Compares a v = (0,0) source with an independently integrated W image at
/// v = (-1,0): max |q(4T) - q_riccati(T, Q, Q')| over the image nodes, Q'
/// taken from the target equations of motion.
inline double riccati_form_check(const Trajectory<PiiiPrimeSystem>& source, const Trajectory<PiiiPrimeSystem>& target) {
    require_origin(source.params());
    if (!(target.params() == corner_params(CornerLabel::W)))
        throw Error(ErrorKind::InvalidParams, "target trajectory must be at v = (-1, 0)");
    double worst = 0.0;
    for (const auto& n : target.nodes()) {
        auto [dQ, dP] = eom(target.params(), n.t, n.q, n.p);
        (void)dP;
        const Complex q = riccati_q(n.t, n.q, dQ);
        worst = std::max(worst, std::abs(q - source.sample(4.0 * n.t).q));
    }
    return worst;
}

} // namespace painleve
