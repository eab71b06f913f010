#pragma once

// Verifiers for the additive and multiplicative relations between the
// origin and the four corners, and for the PII Gambier relations.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "painleve/corners.hpp"
#include "painleve/integrator.hpp"
#include "painleve/pii.hpp"

namespace painleve {

/// Which closed-form corner Hamiltonian each transformed corner realised.
/// `realized[c]` is the closed form matched by to_corner(c) at every node,
/// or empty if the match was missing or changed along the window.
struct BranchDiagnostic {
    std::array<std::optional<CornerLabel>, 4> realized;

    bool is_identity() const {
        for (std::size_t k = 0; k < 4; ++k)
            if (realized[k] != all_corners[k]) return false;
        return true;
    }
};

struct IdentityReport {
    std::string name;
    Complex t_start, t_end;
    double max_residual = 0.0;
    double drift = 0.0;
    std::size_t nodes = 0;
    std::optional<BranchDiagnostic> branches{};

    bool passed(double tol) const { return max_residual < tol && drift < tol; }
};

/// T H_c from the closed forms, with h the v = (0,0) Hamiltonian at bs.
inline Complex corner_hamiltonian_closed_form(CornerLabel c, const BranchedState& bs, Complex h) {
    const auto& s = bs.base;
    const Complex i = I_unit;
    const Complex a = bs.sqrt_p, b = bs.sqrt_pm1, rt = bs.sqrt_t;
    const Complex X = s.q * a * b;
    Complex bracket;
    switch (c) {
    case CornerLabel::W: bracket = -0.5 - X + i * rt * (a - b); break;
    case CornerLabel::S: bracket = 0.5 + X - i * rt * (a + b); break;
    case CornerLabel::E: bracket = -0.5 - X - i * rt * (a - b); break;
    case CornerLabel::N: bracket = 0.5 + X + i * rt * (a + b); break;
    }
    return 0.25 * s.t * h - 1.0 / 16.0 + 0.25 * bracket;
}

inline Complex corner_hamiltonian_closed_form(CornerLabel c, const BranchedState& bs) {
    return corner_hamiltonian_closed_form(c, bs, hamiltonian(bs.base, ParameterPoint{}));
}

/// T H_c evaluated on the transformed state with the corner's parameters.
inline Complex corner_t_hamiltonian(CornerLabel c, const BranchedState& bs, const FormulaTamper& tamper = {}) {
    const auto img = to_corner(c, bs, {}, tamper);
    return t_hamiltonian(corner_params(c), img.t, img.q, img.p);
}

/// sum_c T H_c - (t h - 1/4).
inline Complex hamiltonian_sum_residual(const BranchedState& bs, const FormulaTamper& tamper = {}) {
    Complex sum{};
    for (auto c : all_corners) sum += corner_t_hamiltonian(c, bs, tamper);
    return sum - (t_hamiltonian(ParameterPoint{}, bs.base.t, bs.base.q, bs.base.p) - 0.25);
}

inline Complex hamiltonian_sum_closed_form_residual(const BranchedState& bs) {
    const Complex h = hamiltonian(bs.base, ParameterPoint{});
    Complex sum{};
    for (auto c : all_corners) sum += corner_hamiltonian_closed_form(c, bs, h);
    return sum - (bs.base.t * h - 0.25);
}

/// sum_c P_c - 4p.
inline Complex momentum_sum_check(const BranchedState& bs, const FormulaTamper& tamper = {}) {
    Complex sum{};
    for (auto c : all_corners) sum += to_corner(c, bs, {}, tamper).p;
    return sum - 4.0 * bs.base.p;
}

/// d/dt log(T^(1/4) tau_W tau_S tau_E tau_N) - d/dt log tau
///   = 1/(4t) + (1/4) sum_c H_c(T) - h(t).
inline Complex tau_log_derivative_residual(const BranchedState& bs, const FormulaTamper& tamper = {}) {
    const Complex t = bs.base.t, T = t / 4.0;
    Complex sum{};
    for (auto c : all_corners) sum += corner_t_hamiltonian(c, bs, tamper) / T;
    return 1.0 / (4.0 * t) + 0.25 * sum - hamiltonian(bs.base, ParameterPoint{});
}

namespace detail {

inline std::optional<CornerLabel> closest_closed_form(Complex value, const BranchedState& bs, Complex h) {
    std::optional<CornerLabel> best;
    double best_d = 0.0;
    for (auto c : all_corners) {
        const double d = std::abs(value - corner_hamiltonian_closed_form(c, bs, h));
        if (!best || d < best_d) best = c, best_d = d;
    }
    const double scale = 1.0 + std::abs(value);
    return best_d <= 1e-8 * scale ? best : std::nullopt;
}

inline std::vector<BranchedState> maybe_flipped(const Trajectory<PiiiPrimeSystem>& tr, bool flip) {
    require_origin(tr.params());
    auto b = branch_continue(tr);
    if (flip)
        for (auto& x : b) x = x.flipped();
    return b;
}

} // namespace detail

/// Additive Hamiltonian relation along a v = (0,0) trajectory, each H_c from
/// the transformed state; records the branch/closed-form correspondence.
inline IdentityReport hamiltonian_sum_check(const Trajectory<PiiiPrimeSystem>& tr, bool flip_branches = false,
                                            const FormulaTamper& tamper = {}) {
    IdentityReport rep{"hsum", tr.t_start(), tr.t_end(), 0.0, 0.0, 0, {}};
    BranchDiagnostic diag;
    bool first = true;
    // closed forms are evaluated on the unflipped continuation as the reference
    const auto reference = detail::maybe_flipped(tr, false);
    for (const auto& ref : reference) {
        const auto bs = flip_branches ? ref.flipped() : ref;
        const Complex h = hamiltonian(bs.base, ParameterPoint{});
        rep.max_residual = std::max(rep.max_residual, std::abs(hamiltonian_sum_residual(bs, tamper)));
        for (std::size_t k = 0; k < 4; ++k) {
            const auto m = detail::closest_closed_form(corner_t_hamiltonian(all_corners[k], bs, tamper), ref, h);
            if (first)
                diag.realized[k] = m;
            else if (diag.realized[k] != m)
                diag.realized[k].reset();
        }
        first = false;
        ++rep.nodes;
    }
    rep.branches = diag;
    return rep;
}

inline IdentityReport hamiltonian_sum_closed_form_check(const Trajectory<PiiiPrimeSystem>& tr) {
    IdentityReport rep{"hsum_closed_form", tr.t_start(), tr.t_end(), 0.0, 0.0, 0, {}};
    for (const auto& bs : detail::maybe_flipped(tr, false)) {
        rep.max_residual = std::max(rep.max_residual, std::abs(hamiltonian_sum_closed_form_residual(bs)));
        ++rep.nodes;
    }
    return rep;
}

inline IdentityReport momentum_sum_check(const Trajectory<PiiiPrimeSystem>& tr, bool flip_branches = false,
                                         const FormulaTamper& tamper = {}) {
    IdentityReport rep{"psum", tr.t_start(), tr.t_end(), 0.0, 0.0, 0, {}};
    for (const auto& bs : detail::maybe_flipped(tr, flip_branches)) {
        rep.max_residual = std::max(rep.max_residual, std::abs(momentum_sum_check(bs, tamper)));
        ++rep.nodes;
    }
    return rep;
}

/// Multiplicative relation in log-derivative form, plus the drift
/// |integral of the residual over the window| by the trapezoid rule in t.
inline IdentityReport tau_product_check(const Trajectory<PiiiPrimeSystem>& tr, bool flip_branches = false,
                                        const FormulaTamper& tamper = {}) {
    IdentityReport rep{"tau", tr.t_start(), tr.t_end(), 0.0, 0.0, 0, {}};
    Complex integral{}, prev_r{}, prev_t{};
    bool first = true;
    for (const auto& bs : detail::maybe_flipped(tr, flip_branches)) {
        const Complex r = tau_log_derivative_residual(bs, tamper);
        rep.max_residual = std::max(rep.max_residual, std::abs(r));
        if (!first) integral += 0.5 * (r + prev_r) * (bs.base.t - prev_t);
        prev_r = r;
        prev_t = bs.base.t;
        first = false;
        ++rep.nodes;
    }
    rep.drift = std::abs(integral);
    return rep;
}

/// Pointwise PII relations at a v1 = 0 state on the branch sqrt_p:
/// the additive relation and its phi-product restatement.
struct PiiRelationResiduals {
    Complex additive;   ///< H_0 + t^2/8 + 2^(-1/3) (H_{1/2} + H_{-1/2})
    Complex expanded;   ///< H_0 + 2^(-1/3) (2 H_{1/2} + Q + T^2/4)
    Complex phi;        ///< d/dt log phi_0 - d/dt log [exp(t^3/24) phi_{-1/2}(T) phi_{1/2}(T)]
};

inline PiiRelationResiduals pii_relations(const CanonicalState& s, Complex sqrt_p) {
    const double k = 1.0 / gambier::c13;
    const auto g = gambier_forward(s, sqrt_p);
    const Complex T = g.t, Q = g.q;
    const Complex h0 = pii_hamiltonian(s.t, s.q, s.p, Complex{0.0});
    const Complex h_half = pii_hamiltonian(g.t, g.q, g.p, Complex{0.5});
    const Complex h_mhalf = h_half + Q;
    const Complex t = s.t;
    // d/dt log phi_v(x(t)) = x'(t) (H_v(x) + x^2/8), with dT/dt = -2^(-1/3)
    const Complex lhs = h0 + t * t / 8.0;
    const Complex rhs = t * t / 8.0 - k * (h_half + T * T / 8.0) - k * (h_mhalf + T * T / 8.0);
    return {h0 + t * t / 8.0 + k * (h_half + h_mhalf), h0 + k * (2.0 * h_half + Q + T * T / 4.0), lhs - rhs};
}

inline IdentityReport pii_identities_check(const Trajectory<PiiSystem>& tr) {
    if (!(tr.params() == PiiParameter{0.0}))
        throw Error(ErrorKind::InvalidParams, "PII identities start from v1 = 0");
    IdentityReport rep{"pii", tr.t_start(), tr.t_end(), 0.0, 0.0, 0, {}};
    std::vector<CanonicalState> nodes(tr.nodes().begin(), tr.nodes().end());
    Complex root = principal_sqrt(nodes.front().p);
    for (std::size_t n = 0; n < nodes.size(); ++n) {
        // the Riccati source sits on p = 0 where both roots coincide
        if (n > 0)
            root = nodes[n].p == Complex{} ? Complex{}
                   : root == Complex{}     ? principal_sqrt(nodes[n].p)
                                           : detail::nearest_root(nodes[n].p, root, n);
        const auto r = pii_relations(nodes[n], root);
        rep.max_residual = std::max({rep.max_residual, std::abs(r.additive), std::abs(r.expanded), std::abs(r.phi)});
        ++rep.nodes;
    }
    return rep;
}

} // namespace painleve
