#pragma once

// Classical solutions: parameter classification, Bessel-Toeplitz tau
// determinants, and exact rational solutions generated by Weyl words.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "painleve/bessel.hpp"
#include "painleve/core.hpp"
#include "painleve/error.hpp"
#include "painleve/rational.hpp"
#include "painleve/weyl.hpp"

namespace painleve {

enum class SolutionClass { OneParameter, Rational, Generic };

inline std::string_view to_string(SolutionClass c) {
    switch (c) {
    case SolutionClass::OneParameter: return "OneParameter";
    case SolutionClass::Rational: return "Rational";
    case SolutionClass::Generic: return "Generic";
    }
    return "?";
}

struct Classification {
    SolutionClass cls = SolutionClass::Generic;
    /// One of v2 +- v1 even and the other odd.
    bool mixed_parity = false;
};

namespace detail {
enum class Parity { Even, Odd, None };
inline Parity parity(double x) {
    const double r = std::round(x);
    if (std::abs(x - r) > 1e-12 * std::max(1.0, std::abs(x))) return Parity::None;
    return std::fmod(std::abs(r), 2.0) == 0.0 ? Parity::Even : Parity::Odd;
}
} // namespace detail

inline Classification classify(const ParameterPoint& v) {
    using detail::Parity;
    if (v.v1.imag() != 0.0 || v.v2.imag() != 0.0)
        throw Error(ErrorKind::NonRealInput, "classification needs real parameters");
    const double v1 = v.v1.real(), v2 = v.v2.real();
    const Parity a = detail::parity(v2 + v1), b = detail::parity(v2 - v1);
    if (a == Parity::Odd && b == Parity::Odd) return {SolutionClass::Rational, false};
    const bool any_odd = a == Parity::Odd || b == Parity::Odd;
    const bool any_even = a == Parity::Even || b == Parity::Even;
    if (any_even && !any_odd) return {SolutionClass::OneParameter, false};
    return {SolutionClass::Generic, any_even && any_odd};
}

inline Classification classify(Complex v1, Complex v2) { return classify(ParameterPoint{v1, v2}); }

// ---------------------------------------------------------------------------

enum class BesselKind { IK, JY };

struct BesselTauSpec {
    int n = 0;
    Complex nu{};
    Complex c{};
    BesselKind kind = BesselKind::IK;
};

using ComplexMatrix = std::vector<std::vector<Complex>>;

/// Entries I_{nu+j-k}(sqrt t) + c K_{nu+j-k}(sqrt t), or with J and Y.
inline ComplexMatrix bessel_tau_matrix(const BesselTauSpec& spec, Complex t) {
    if (spec.n < 0) throw Error(ErrorKind::InvalidParams, "Toeplitz size n must be nonnegative");
    require_nonzero_t(t);
    const Complex z = principal_sqrt(t);
    const int m = spec.n + 1;
    // one evaluation per diagonal
    std::vector<Complex> diag(2 * m - 1);
    for (int d = -spec.n; d <= spec.n; ++d) {
        const Complex order = spec.nu + double(d);
        Complex e = spec.kind == BesselKind::IK ? bessel_i(order, z) : bessel_j(order, z);
        if (spec.c != Complex{}) e += spec.c * (spec.kind == BesselKind::IK ? bessel_k(order, z) : bessel_y(order, z));
        diag[d + spec.n] = e;
    }
    ComplexMatrix a(m, std::vector<Complex>(m));
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) a[j][k] = diag[j - k + spec.n];
    return a;
}

/// Determinant by LU with partial pivoting.
inline Complex determinant(ComplexMatrix a) {
    const std::size_t n = a.size();
    Complex det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (a[piv][col] == Complex{}) return 0.0;
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const Complex f = a[r][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) a[r][k] -= f * a[col][k];
        }
    }
    return det;
}

inline Complex bessel_tau(const BesselTauSpec& spec, Complex t) { return determinant(bessel_tau_matrix(spec, t)); }

// ---------------------------------------------------------------------------

/// Solution with q, p rational in s = sqrt(t) over Q(i).
struct RationalSolution {
    ParameterPoint params;
    RationalFunction q;
    RationalFunction p;
};

namespace detail {
inline GaussianRational exact(Complex x) { return GaussianRational::from_double(x.real(), x.imag()); }
} // namespace detail

/// q = s, p = 1/(4s) at v = (0, 1).
inline RationalSolution rational_seed() {
    const auto s = RationalFunction::variable();
    return {{0.0, 1.0}, s, RationalFunction(GaussianRational(Rational(1, 4))) / s};
}

/// Equations of motion with d/dt = (1/(2s)) d/ds, multiplied by t:
/// (s/2) q_s - (2q^2 p - q^2 - v1 q + s^2) and (s/2) p_s - (-2qp^2 + (2q + v1)p - (v1+v2)/2).
inline std::pair<RationalFunction, RationalFunction> exact_eom_residual(const RationalSolution& r) {
    using detail::exact;
    const auto s = RationalFunction::variable();
    const RationalFunction half(GaussianRational(Rational(1, 2)));
    const RationalFunction v1(exact(r.params.v1)), v2(exact(r.params.v2));
    const RationalFunction two(GaussianRational(2));
    const auto& q = r.q;
    const auto& p = r.p;
    const auto rq = half * s * q.derivative() - (two * q * q * p - q * q - v1 * q + s * s);
    const auto rp = half * s * p.derivative() - (-two * q * p * p + (two * q + v1) * p - half * (v1 + v2));
    return {rq, rp};
}

inline bool is_exact_solution(const RationalSolution& r) {
    auto [a, b] = exact_eom_residual(r);
    return a.is_zero() && b.is_zero();
}

inline RationalSolution apply_exact(Generator g, const RationalSolution& r, int letter = 0) {
    using detail::exact;
    const auto& v = r.params;
    const RationalFunction one(GaussianRational(1));
    switch (g) {
    case Generator::s0: {
        if (r.q.is_zero()) throw Error(ErrorKind::IdenticallySingular, "s0 applied to q = 0", letter);
        const auto s = RationalFunction::variable();
        const auto t = s * s;
        const RationalFunction c(exact(0.5 * (v.v1 - v.v2)));
        return {act_on_params(g, v), -t / r.q, (r.q / t) * (r.q * (r.p - one) - c) + one};
    }
    case Generator::s1: {
        if (v.v1 == v.v2) return {act_on_params(g, v), r.q, r.p};
        const auto pm1 = r.p - one;
        if (pm1.is_zero()) throw Error(ErrorKind::IdenticallySingular, "s1 applied to p = 1", letter);
        const RationalFunction c(exact(v.v2 - v.v1));
        return {act_on_params(g, v), r.q + c / (RationalFunction(GaussianRational(2)) * pm1), r.p};
    }
    case Generator::s2: {
        // t -> -t realised as s -> i s
        const auto i = GaussianRational::i();
        return {act_on_params(g, v), -r.q.rescaled(i), one - r.p.rescaled(i)};
    }
    }
    return r;
}

inline RationalSolution apply_exact(const GeneratorWord& w, RationalSolution r) {
    for (std::size_t k = 0; k < w.letters.size(); ++k) r = apply_exact(w.letters[k], r, static_cast<int>(k));
    return r;
}

enum class Shift { T1, T2, T1_inverse, T2_inverse };

inline GeneratorWord shift_word(Shift op) {
    switch (op) {
    case Shift::T1: return word_T1();
    case Shift::T2: return word_T2();
    case Shift::T1_inverse: return word_T1().inverse();
    case Shift::T2_inverse: return word_T2().inverse();
    }
    return {};
}

inline RationalSolution rational_step(const RationalSolution& r, Shift op) { return apply_exact(shift_word(op), r); }

/// Numeric state at t with s the principal root.
inline CanonicalState evaluate(const RationalSolution& r, Complex t) {
    const Complex s = principal_sqrt(t);
    return {t, r.q(s), r.p(s)};
}

} // namespace painleve
