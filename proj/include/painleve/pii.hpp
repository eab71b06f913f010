#pragma once

// The PII companion system q'' = 2q^3 + tq + alpha in Hamiltonian form,
// H = p^2/2 - (q^2 + t/2) p - v1 q with alpha = v1 - 1/2, and the Gambier
// map between v1 = 0 and v1 = 1/2.

#include <array>
#include <cmath>
#include <complex>

#include "painleve/core.hpp"
#include "painleve/error.hpp"
#include "painleve/integrator.hpp"

namespace painleve {

struct PiiParameter {
    Complex v1{};

    Complex alpha() const { return v1 - 0.5; }
    static PiiParameter from_alpha(Complex a) { return {a + 0.5}; }
    friend bool operator==(const PiiParameter&, const PiiParameter&) = default;
};

inline Complex pii_residual(Complex t, Complex q, Complex d2q, Complex alpha) {
    return d2q - 2.0 * q * q * q - t * q - alpha;
}

template <class S>
S pii_hamiltonian(const S& t, const S& q, const S& p, Complex v1) {
    return 0.5 * p * p - (q * q + t / 2.0) * p - v1 * q;
}

template <class S>
std::array<S, 2> pii_eom(Complex v1, const S& t, const S& q, const S& p) {
    return {p - q * q - t / 2.0, 2.0 * q * p + v1};
}

struct PiiSystem {
    using params_type = PiiParameter;
    static constexpr const char* name = "PII";
    static constexpr bool singular_at_origin = false;

    template <class S>
    static std::array<S, 2> rhs(const PiiParameter& v, const S& t, const S& q, const S& p) {
        return pii_eom(v.v1, t, q, p);
    }

    static Complex hamiltonian(const PiiParameter& v, const CanonicalState& s) {
        return pii_hamiltonian(s.t, s.q, s.p, v.v1);
    }
};

inline Trajectory<PiiSystem> integrate(const PiiParameter& v, const CanonicalState& s0, Complex t_end,
                                       const IntegrationConfig& cfg = {}) {
    return integrate_system<PiiSystem>(v, s0, t_end, cfg);
}

namespace gambier {
inline const double c13 = std::cbrt(2.0);     // 2^(1/3)
inline const double c16 = std::sqrt(c13);     // 2^(1/6)
} // namespace gambier

/// (t, q, p) at v1 = 0 to (T, Q, P) at v1 = 1/2. `sqrt_p` fixes the branch.
inline CanonicalState gambier_forward(const CanonicalState& s, Complex sqrt_p) {
    using namespace gambier;
    const Complex T = -s.t / c13;
    const Complex Q = sqrt_p / c16;
    // sqrt(2p) on the same branch as sqrt(p)
    const Complex P = -(s.t / 2.0 - s.p + s.q * std::sqrt(2.0) * sqrt_p) / c13;
    return {T, Q, P};
}

inline CanonicalState gambier_forward(const CanonicalState& s) { return gambier_forward(s, principal_sqrt(s.p)); }

inline CanonicalState gambier_inverse(const CanonicalState& s) {
    using namespace gambier;
    if (s.q == Complex{}) throw Error(ErrorKind::ZeroQ, "Gambier inverse needs Q != 0");
    const Complex Q2 = s.q * s.q;
    return {-c13 * s.t, -(s.p - Q2 - s.t / 2.0) / (c13 * s.q), c13 * Q2};
}

struct GambierQForm {
    Complex T;
    Complex Q2;
};

/// Branch-free form: 2^(1/3) Q^2 = q' + q^2 + t/2.
inline GambierQForm gambier_q_form(Complex t, Complex q, Complex dq) {
    using namespace gambier;
    return {-t / c13, (dq + q * q + t / 2.0) / c13};
}

namespace detail {

/// Ai and Ai' by Maclaurin series in extended precision. Fine for |z| <= 8.
inline std::array<Complex, 2> airy_series(Complex z) {
    using LC = std::complex<long double>;
    const LC x(z.real(), z.imag());
    const long double ai0 = 0.355028053887817239260063186004183176L;
    const long double dai0 = -0.258819403792806798405183560189203963L;
    // a_{n+3} = a_n / ((n+2)(n+3))
    LC a[3] = {ai0, dai0, 0.0L};
    LC pw = 1.0L; // x^n
    LC pw_prev = 0.0L; // x^(n-1)
    LC val = 0.0L, der = 0.0L;
    for (int n = 0; n < 300; ++n) {
        const LC c = a[n % 3];
        const LC tv = c * pw, td = n > 0 ? LC(n) * c * pw_prev : LC(0.0L);
        val += tv;
        der += td;
        a[n % 3] = c / (long double)((n + 2) * (n + 3));
        pw_prev = pw;
        pw *= x;
    }
    return {Complex((double)val.real(), (double)val.imag()), Complex((double)der.real(), (double)der.imag())};
}

} // namespace detail

/// Ai(z), Ai'(z).
inline std::array<Complex, 2> airy_ai(Complex z) {
    if (std::abs(z) > 8.0) throw Error(ErrorKind::EvaluationOverflow, "Airy series limited to |z| <= 8");
    return detail::airy_series(z);
}

/// Point of the Riccati solution at v1 = 0: q = y'/y with y(t) = Ai(-2^(-1/3) t), p = 0.
inline CanonicalState airy_riccati_state(Complex t) {
    const double k = -1.0 / gambier::c13;
    auto [ai, dai] = airy_ai(k * t);
    if (ai == Complex{}) throw Error(ErrorKind::PoleEncountered, "Airy zero: q has a pole");
    return {t, k * dai / ai, 0.0};
}

} // namespace painleve
