#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <type_traits>

namespace painleve {

/// Truncated Taylor series f(t0 + e) = sum_k c[k] e^k, k <= N.
///
/// Arithmetic propagates derivatives exactly (forward-mode AD), so any
/// formula written generically over its scalar type yields the chain-rule
/// derivatives of its output when fed jets. Coefficients are normalised
/// Taylor coefficients; derivative(k) returns k! * c[k].
template <class T, std::size_t N>
class Jet {
public:
    using value_type = T;
    static constexpr std::size_t order = N;

    constexpr Jet() = default;

    template <class U>
        requires std::is_convertible_v<U, T>
    constexpr Jet(const U& v) { c_[0] = T(v); }

    /// The independent variable itself, sitting at `v`.
    static constexpr Jet variable(const T& v) {
        Jet j(v);
        if constexpr (N > 0) j.c_[1] = T(1);
        return j;
    }

    static constexpr Jet from_coefficients(const std::array<T, N + 1>& c) {
        Jet j;
        j.c_ = c;
        return j;
    }

    constexpr const T& value() const { return c_[0]; }
    constexpr const T& operator[](std::size_t k) const { return c_[k]; }
    constexpr T& operator[](std::size_t k) { return c_[k]; }
    constexpr const std::array<T, N + 1>& coefficients() const { return c_; }

    constexpr T derivative(std::size_t k) const {
        T f = c_[k];
        for (std::size_t j = 2; j <= k; ++j) f *= static_cast<double>(j);
        return f;
    }

    constexpr Jet& operator+=(const Jet& o) {
        for (std::size_t k = 0; k <= N; ++k) c_[k] += o.c_[k];
        return *this;
    }
    constexpr Jet& operator-=(const Jet& o) {
        for (std::size_t k = 0; k <= N; ++k) c_[k] -= o.c_[k];
        return *this;
    }
    constexpr Jet& operator*=(const Jet& o) { return *this = *this * o; }
    constexpr Jet& operator/=(const Jet& o) { return *this = *this / o; }

    friend constexpr Jet operator-(const Jet& a) {
        Jet r;
        for (std::size_t k = 0; k <= N; ++k) r.c_[k] = -a.c_[k];
        return r;
    }
    friend constexpr Jet operator+(const Jet& a) { return a; }
    friend constexpr Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend constexpr Jet operator-(Jet a, const Jet& b) { return a -= b; }

    friend constexpr Jet operator*(const Jet& a, const Jet& b) {
        Jet r;
        for (std::size_t k = 0; k <= N; ++k) {
            T s{};
            for (std::size_t j = 0; j <= k; ++j) s += a.c_[j] * b.c_[k - j];
            r.c_[k] = s;
        }
        return r;
    }

    friend constexpr Jet operator/(const Jet& a, const Jet& b) {
        Jet r;
        for (std::size_t k = 0; k <= N; ++k) {
            T s = a.c_[k];
            for (std::size_t j = 1; j <= k; ++j) s -= b.c_[j] * r.c_[k - j];
            r.c_[k] = s / b.c_[0];
        }
        return r;
    }

private:
    std::array<T, N + 1> c_{};
};

/// Square root on the branch fixed by `root` (root*root == x.value()).
template <class T, std::size_t N>
constexpr Jet<T, N> sqrt_on_branch(const Jet<T, N>& x, const T& root) {
    Jet<T, N> r(root);
    for (std::size_t k = 1; k <= N; ++k) {
        T s = x[k];
        for (std::size_t j = 1; j < k; ++j) s -= r[j] * r[k - j];
        r[k] = s / (2.0 * root);
    }
    return r;
}

template <class T>
constexpr T sqrt_on_branch(const T& x, const T& root) {
    (void)x;
    return root;
}

/// Value of either a plain scalar or a jet.
template <class T>
constexpr const T& value_of(const T& x) { return x; }
template <class T, std::size_t N>
constexpr const T& value_of(const Jet<T, N>& x) { return x.value(); }

} // namespace painleve

namespace painleve {

/// Taylor jet (order N) of a solution of w'' = F(x, w, w') through
/// (x0, w0, w1). `rhs` must be callable with Jet<T, N> arguments.
template <std::size_t N, class T, class F>
Jet<T, N> second_order_taylor(F&& rhs, const T& x0, const T& w0, const T& w1) {
    static_assert(N >= 1);
    using J = Jet<T, N>;
    J x = J::variable(x0);
    J w(w0);
    w[1] = w1;
    for (std::size_t k = 0; k + 2 <= N; ++k) {
        J dw;
        for (std::size_t j = 0; j + 1 <= N; ++j) dw[j] = static_cast<double>(j + 1) * w[j + 1];
        J acc = rhs(x, w, dw);
        w[k + 2] = acc[k] / static_cast<double>((k + 1) * (k + 2));
    }
    return w;
}

} // namespace painleve
