#pragma once

// Exact arithmetic over Q(i): Gaussian rationals, polynomials and rational
// functions in one variable, normalised by polynomial gcd.

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "painleve/core.hpp"
#include "painleve/error.hpp"

namespace painleve {

using Rational = boost::multiprecision::cpp_rational;

class GaussianRational {
public:
    GaussianRational() = default;
    GaussianRational(long long re) : re_(re) {}
    GaussianRational(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {}

    static GaussianRational i() { return {Rational(0), Rational(1)}; }
    /// Exact conversion; every finite double is a dyadic rational.
    static GaussianRational from_double(double re, double im = 0.0) { return {Rational(re), Rational(im)}; }

    const Rational& real() const { return re_; }
    const Rational& imag() const { return im_; }
    bool is_zero() const { return re_ == 0 && im_ == 0; }
    Rational norm() const { return re_ * re_ + im_ * im_; }
    GaussianRational conj() const { return {re_, -im_}; }

    Complex to_complex() const { return {static_cast<double>(re_), static_cast<double>(im_)}; }

    std::string str() const {
        if (im_ == 0) return re_.str();
        if (re_ == 0) return im_.str() + "i";
        return re_.str() + (im_ > 0 ? "+" : "") + im_.str() + "i";
    }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re_ + b.re_, a.im_ + b.im_};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re_ - b.re_, a.im_ - b.im_};
    }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re_, -a.im_}; }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
    }
    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        if (b.is_zero()) throw Error(ErrorKind::ZeroDenominator, "division by zero Gaussian rational");
        const Rational n = b.norm();
        const GaussianRational num = a * b.conj();
        return {num.re_ / n, num.im_ / n};
    }
    GaussianRational& operator+=(const GaussianRational& b) { return *this = *this + b; }
    GaussianRational& operator-=(const GaussianRational& b) { return *this = *this - b; }
    GaussianRational& operator*=(const GaussianRational& b) { return *this = *this * b; }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

private:
    Rational re_{0};
    Rational im_{0};
};

/// Dense polynomial in s, coefficient k multiplies s^k; no trailing zeros.
class Polynomial {
public:
    using Coeff = GaussianRational;

    Polynomial() = default;
    Polynomial(Coeff c) {
        if (!c.is_zero()) c_.push_back(std::move(c));
    }
    explicit Polynomial(std::vector<Coeff> c) : c_(std::move(c)) { trim(); }

    static Polynomial monomial(int k, Coeff c = Coeff(1)) {
        std::vector<Coeff> v(static_cast<std::size_t>(k) + 1);
        v.back() = std::move(c);
        return Polynomial(std::move(v));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Coeff>& coefficients() const { return c_; }
    Coeff coefficient(int k) const { return k >= 0 && k <= degree() ? c_[k] : Coeff{}; }
    const Coeff& leading() const { return c_.back(); }

    Polynomial derivative() const {
        std::vector<Coeff> d;
        for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * Coeff(static_cast<long long>(k)));
        return Polynomial(std::move(d));
    }

    /// p(a s)
    Polynomial rescaled(const Coeff& a) const {
        std::vector<Coeff> d = c_;
        Coeff pw(1);
        for (auto& x : d) {
            x *= pw;
            pw *= a;
        }
        return Polynomial(std::move(d));
    }

    Complex operator()(Complex s) const {
        Complex r{};
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * s + it->to_complex();
        return r;
    }

    Polynomial monic() const {
        if (is_zero()) return *this;
        const Coeff l = leading();
        std::vector<Coeff> d = c_;
        for (auto& x : d) x = x / l;
        return Polynomial(std::move(d));
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<Coeff> d(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t k = 0; k < d.size(); ++k) d[k] = a.coefficient(int(k)) + b.coefficient(int(k));
        return Polynomial(std::move(d));
    }
    friend Polynomial operator-(const Polynomial& a) {
        std::vector<Coeff> d = a.c_;
        for (auto& x : d) x = -x;
        return Polynomial(std::move(d));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Coeff> d(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) d[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(d));
    }
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

    /// Euclidean division a = q b + r.
    friend std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
        if (b.is_zero()) throw Error(ErrorKind::ZeroDenominator, "polynomial division by zero");
        Polynomial q, r = a;
        while (!r.is_zero() && r.degree() >= b.degree()) {
            const auto t = monomial(r.degree() - b.degree(), r.leading() / b.leading());
            q = q + t;
            r = r - t * b;
        }
        return {q, r};
    }

    friend Polynomial gcd(Polynomial a, Polynomial b) {
        while (!b.is_zero()) {
            auto r = divmod(a, b).second;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<Coeff> c_;
};

/// num / den in lowest terms with monic denominator.
class RationalFunction {
public:
    using Coeff = GaussianRational;

    RationalFunction() : den_(Coeff(1)) {}
    RationalFunction(Coeff c) : num_(std::move(c)), den_(Coeff(1)) {}
    RationalFunction(Polynomial n) : num_(std::move(n)), den_(Coeff(1)) {}
    RationalFunction(Polynomial n, Polynomial d) : num_(std::move(n)), den_(std::move(d)) { normalise(); }

    static RationalFunction variable() { return Polynomial::monomial(1); }

    const Polynomial& numerator() const { return num_; }
    const Polynomial& denominator() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_constant(const Coeff& c) const { return den_.degree() == 0 && num_ == Polynomial(c); }

    RationalFunction derivative() const {
        return {num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_};
    }
    RationalFunction rescaled(const Coeff& a) const { return {num_.rescaled(a), den_.rescaled(a)}; }

    Complex operator()(Complex s) const {
        const Complex d = den_(s);
        if (d == Complex{}) throw Error(ErrorKind::ZeroDenominator, "rational function evaluated at a pole");
        return num_(s) / d;
    }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
    }
    friend RationalFunction operator-(const RationalFunction& a) { return {-a.num_, a.den_}; }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        return {a.num_ * b.num_, a.den_ * b.den_};
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.is_zero()) throw Error(ErrorKind::ZeroDenominator, "division by the zero rational function");
        return {a.num_ * b.den_, a.den_ * b.num_};
    }
    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

private:
    void normalise() {
        if (den_.is_zero()) throw Error(ErrorKind::ZeroDenominator, "rational function with zero denominator");
        if (num_.is_zero()) {
            den_ = Polynomial(Coeff(1));
            return;
        }
        const Polynomial g = gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = divmod(num_, g).first;
            den_ = divmod(den_, g).first;
        }
        const Coeff l = den_.leading();
        if (!(l == Coeff(1))) {
            const Polynomial inv(Coeff(1) / l);
            num_ = num_ * inv;
            den_ = den_ * inv;
        }
    }

    Polynomial num_;
    Polynomial den_;
};

} // namespace painleve
