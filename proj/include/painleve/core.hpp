#pragma once

// PIII' Hamiltonian system {q, p; t, H} with eta_0 = eta_inf = 1, parameter
// coordinates v = (v1, v2) on the B2 root lattice.

#include <array>
#include <cmath>
#include <complex>
#include <utility>

#include "painleve/error.hpp"

namespace painleve {

using Complex = std::complex<double>;

inline constexpr Complex I_unit{0.0, 1.0};

struct ParameterPoint {
    Complex v1{};
    Complex v2{};

    static constexpr double eta0 = 1.0;
    static constexpr double eta_inf = 1.0;

    friend bool operator==(const ParameterPoint&, const ParameterPoint&) = default;
};

struct CanonicalState {
    Complex t{1.0};
    Complex q{};
    Complex p{};

    friend bool operator==(const CanonicalState&, const CanonicalState&) = default;
};

/// Coefficients of the scalar PIII' equation for q(t).
struct ScalarParams {
    Complex alpha{};
    Complex beta{};
    Complex gamma{};
    Complex delta{};

    friend bool operator==(const ScalarParams&, const ScalarParams&) = default;
};

/// Principal square root with the cut on the negative real axis; points on
/// the cut (either sign of zero imaginary part) map to the positive
/// imaginary axis.
inline Complex principal_sqrt(Complex z) {
    if (z.imag() == 0.0 && z.real() < 0.0) return {0.0, std::sqrt(-z.real())};
    return std::sqrt(z);
}

inline void require_nonzero_t(const Complex& t) {
    if (t == Complex{}) throw Error(ErrorKind::InvalidState, "t must be nonzero");
}

/// (alpha, beta, gamma, delta) = (-4 v2, 4 (v1 + 1), 4, -4).
inline ScalarParams scalar_params(const ParameterPoint& v) {
    constexpr double ei = ParameterPoint::eta_inf;
    constexpr double e0 = ParameterPoint::eta0;
    return {-4.0 * ei * v.v2, 4.0 * e0 * (v.v1 + 1.0), Complex(4.0 * ei * ei), Complex(-4.0 * e0 * e0)};
}

/// Inverse of scalar_params; only defined on the gamma = 4, delta = -4 slice.
inline ParameterPoint params_from_scalar(const ScalarParams& sp) {
    if (sp.gamma != Complex(4.0) || sp.delta != Complex(-4.0))
        throw Error(ErrorKind::InvalidParams, "scalar parameters are not on the gamma=4, delta=-4 slice");
    return {sp.beta / 4.0 - 1.0, -sp.alpha / 4.0};
}

/// t*H = q^2 p^2 - (q^2 + v1 q - t) p + (v1 + v2) q / 2, generic over jets.
template <class S>
S t_hamiltonian(const ParameterPoint& v, const S& t, const S& q, const S& p) {
    return q * q * p * p - (q * q + v.v1 * q - t) * p + 0.5 * (v.v1 + v.v2) * q;
}

inline Complex hamiltonian(const CanonicalState& s, const ParameterPoint& v) {
    require_nonzero_t(s.t);
    return t_hamiltonian(v, s.t, s.q, s.p) / s.t;
}

/// Hamilton's equations (q', p'), generic over jets.
template <class S>
std::array<S, 2> eom(const ParameterPoint& v, const S& t, const S& q, const S& p) {
    S dq = (2.0 * q * q * p - q * q - v.v1 * q + t) / t;
    S dp = (-2.0 * q * p * p + (2.0 * q + v.v1) * p - 0.5 * (v.v1 + v.v2)) / t;
    return {dq, dp};
}

inline std::pair<Complex, Complex> eom_rhs(const CanonicalState& s, const ParameterPoint& v) {
    require_nonzero_t(s.t);
    auto [dq, dp] = eom(v, s.t, s.q, s.p);
    return {dq, dp};
}

/// Right-hand side of the scalar PIII' equation q'' = F(t, q, q').
template <class S>
S piii_prime_rhs(const S& t, const S& q, const S& dq, const ScalarParams& sp) {
    return dq * dq / q - dq / t + q * q * (sp.gamma * q + sp.alpha) / (4.0 * t * t) + sp.beta / (4.0 * t) +
           sp.delta / (4.0 * q);
}

inline Complex piii_prime_residual(Complex t, Complex q, Complex dq, Complex d2q, const ScalarParams& sp) {
    if (t == Complex{} || q == Complex{})
        throw Error(ErrorKind::SingularPoint, "PIII' residual needs t != 0 and q != 0");
    return d2q - piii_prime_rhs(t, q, dq, sp);
}

/// Standard PV: y'' = (1/(2y) + 1/(y-1)) y'^2 - y'/t + (y-1)^2 (a y + b/y)/t^2
///                    + g y/t + d y (y+1)/(y-1).
template <class S>
S pv_rhs(const S& t, const S& y, const S& dy, const ScalarParams& sp) {
    S ym1 = y - 1.0;
    return (1.0 / (2.0 * y) + 1.0 / ym1) * dy * dy - dy / t + ym1 * ym1 * (sp.alpha * y + sp.beta / y) / (t * t) +
           sp.gamma * y / t + sp.delta * y * (y + 1.0) / ym1;
}

inline Complex pv_residual(Complex t, Complex y, Complex dy, Complex d2y, const ScalarParams& sp) {
    if (t == Complex{} || y == Complex{} || y == Complex{1.0})
        throw Error(ErrorKind::SingularPoint, "PV residual needs t != 0 and y not in {0, 1}");
    return d2y - pv_rhs(t, y, dy, sp);
}

/// Standard PIII: w'' = w'^2/w - w'/t + (a w^2 + b)/t + g w^3 + d/w.
template <class S>
S piii_rhs(const S& t, const S& w, const S& dw, const ScalarParams& sp) {
    return dw * dw / w - dw / t + (sp.alpha * w * w + sp.beta) / t + sp.gamma * w * w * w + sp.delta / w;
}

inline Complex piii_residual(Complex t, Complex w, Complex dw, Complex d2w, const ScalarParams& sp) {
    if (t == Complex{} || w == Complex{})
        throw Error(ErrorKind::SingularPoint, "PIII residual needs t != 0 and w != 0");
    return d2w - piii_rhs(t, w, dw, sp);
}

/// The PIII' Hamiltonian vector field as an integrable system.
struct PiiiPrimeSystem {
    using params_type = ParameterPoint;
    static constexpr const char* name = "PIII'";
    static constexpr bool singular_at_origin = true;

    template <class S>
    static std::array<S, 2> rhs(const ParameterPoint& v, const S& t, const S& q, const S& p) {
        return eom(v, t, q, p);
    }

    static Complex hamiltonian(const ParameterPoint& v, const CanonicalState& s) {
        return painleve::hamiltonian(s, v);
    }
};

} // namespace painleve
