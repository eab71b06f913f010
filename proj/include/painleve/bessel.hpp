#pragma once

// Bessel functions I, K, J, Y of complex order and argument.
//
// Real order, real positive argument: Temme series for small x, Steed's
// continued fractions otherwise, plus recurrences (the bessjy / bessik
// scheme). Relative accuracy ~1e-14 on 0 < x <= 40, |nu| <= 50.
//
// Anything complex: ascending series in long double, with the reflection
// formulas for non-integer order and the limit series for integer order.
// Accuracy degrades with |z| through cancellation; about 1e-11 absolute
// for |z| <= 10, which is the validated range.

#include <array>
#include <cmath>
#include <complex>
#include <limits>

#include "painleve/core.hpp"
#include "painleve/error.hpp"

namespace painleve {

inline constexpr double bessel_real_max_argument = 40.0;
inline constexpr double bessel_complex_max_argument = 10.0;
inline constexpr double bessel_max_order = 50.0;

namespace detail::bessel {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double euler_gamma = 0.57721566490153286061;

// 1/Gamma(z) = sum_k c_k z^k, k = 1..28
inline constexpr std::array<double, 28> rgamma_taylor{
    1.0,
    0.5772156649015328606065,
    -0.655878071520253881077,
    -0.042002635034095235529,
    0.1665386113822914895017,
    -0.04219773455554433674821,
    -0.009621971527876973562115,
    0.007218943246663099542395,
    -0.001165167591859065112114,
    -0.0002152416741149509728157,
    0.0001280502823881161861532,
    -0.00002013485478078823865569,
    -0.000001250493482142670657345,
    0.000001133027231981695882374,
    -2.05633841697760710345e-7,
    6.116095104481415817862e-9,
    5.002007644469222930056e-9,
    -1.181274570487020144588e-9,
    1.043426711691100510492e-10,
    7.78226343990507125405e-12,
    -3.696805618642205708188e-12,
    5.100370287454475979015e-13,
    -2.058326053566506783222e-14,
    -5.34812253942301798237e-15,
    1.226778628238260790159e-15,
    -1.181259301697458769514e-16,
    1.18669225475160033258e-18,
    1.412380655318031781556e-18,
};

struct TemmeGammas {
    double gam1, gam2, gampl, gammi;
};

/// For |x| <= 1/2: gam1 = (1/G(1-x) - 1/G(1+x))/(2x), gam2 = (1/G(1-x) + 1/G(1+x))/2,
/// gampl = 1/G(1+x), gammi = 1/G(1-x).
inline TemmeGammas temme_gammas(double x) {
    // 1/G(1+x) = sum c_k x^(k-1); odd k give gam2, even k give -gam1
    double even = 0.0, odd = 0.0;
    for (int k = static_cast<int>(rgamma_taylor.size()); k >= 1; --k) {
        const double c = rgamma_taylor[k - 1];
        if (k % 2) odd = odd * x * x + c;
        else even = even * x * x + c;
    }
    const double gam2 = odd;
    const double gam1 = -even;
    return {gam1, gam2, gam2 - x * gam1, gam2 + x * gam1};
}

inline constexpr double eps = std::numeric_limits<double>::epsilon();
inline constexpr double fpmin = std::numeric_limits<double>::min() / eps;
inline constexpr int max_iterations = 100000;

[[noreturn]] inline void no_convergence(const char* what) {
    throw Error(ErrorKind::EvaluationOverflow, std::string("Bessel continued fraction did not converge: ") + what);
}

/// J_nu(x), Y_nu(x) for nu >= 0, x > 0.
inline std::array<double, 2> jy(double xnu, double x) {
    constexpr double xmin = 2.0;
    const int nl = x < xmin ? static_cast<int>(xnu + 0.5) : std::max(0, static_cast<int>(xnu - x + 1.5));
    const double xmu = xnu - nl, xmu2 = xmu * xmu;
    const double xi = 1.0 / x, xi2 = 2.0 * xi, w = xi2 / pi;
    int isign = 1;
    double h = std::max(xnu * xi, fpmin);
    double b = xi2 * xnu, d = 0.0, c = h;
    int i = 0;
    for (; i < max_iterations; ++i) {
        b += xi2;
        d = b - d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = b - 1.0 / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = c * d;
        h *= del;
        if (d < 0.0) isign = -isign;
        if (std::abs(del - 1.0) <= eps) break;
    }
    if (i >= max_iterations) no_convergence("J ratio");
    double rjl = isign * fpmin, rjpl = h * rjl;
    const double rjl1 = rjl;
    double fact = xnu * xi;
    for (int l = nl - 1; l >= 0; --l) {
        const double rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if (rjl == 0.0) rjl = eps;
    const double f = rjpl / rjl;
    double rjmu, rymu, ry1;
    if (x < xmin) {
        const double x2 = 0.5 * x, pimu = pi * xmu;
        const double fct = std::abs(pimu) < eps ? 1.0 : pimu / std::sin(pimu);
        double dd = -std::log(x2);
        double e = xmu * dd;
        const double fact2 = std::abs(e) < eps ? 1.0 : std::sinh(e) / e;
        const auto g = temme_gammas(xmu);
        double ff = 2.0 / pi * fct * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * dd);
        e = std::exp(e);
        double p = e / (g.gampl * pi);
        double q = 1.0 / (e * pi * g.gammi);
        const double pimu2 = 0.5 * pimu;
        const double fact3 = std::abs(pimu2) < eps ? 1.0 : std::sin(pimu2) / pimu2;
        const double r = pi * pimu2 * fact3 * fact3;
        double cc = 1.0;
        dd = -x2 * x2;
        double sum = ff + r * q, sum1 = p;
        for (i = 1; i < max_iterations; ++i) {
            ff = (i * ff + p + q) / (i * i - xmu2);
            cc *= dd / i;
            p /= i - xmu;
            q /= i + xmu;
            const double del = cc * (ff + r * q);
            sum += del;
            sum1 += cc * p - i * del;
            if (std::abs(del) < (1.0 + std::abs(sum)) * eps) break;
        }
        if (i >= max_iterations) no_convergence("Y series");
        rymu = -sum;
        ry1 = -sum1 * xi2;
        const double rymup = xmu * xi * rymu - ry1;
        rjmu = w / (rymup - f * rymu);
    } else {
        double a = 0.25 - xmu2, p = -0.5 * xi, q = 1.0;
        const double br = 2.0 * x;
        double bi = 2.0;
        double fct = a * xi / (p * p + q * q);
        double cr = br + q * fct, ci = bi + p * fct;
        double den = br * br + bi * bi;
        double dr = br / den, di = -bi / den;
        double dlr = cr * dr - ci * di, dli = cr * di + ci * dr;
        double temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        for (i = 1; i < max_iterations; ++i) {
            a += 2 * i;
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if (std::abs(dr) + std::abs(di) < fpmin) dr = fpmin;
            fct = a / (cr * cr + ci * ci);
            cr = br + cr * fct;
            ci = bi - ci * fct;
            if (std::abs(cr) + std::abs(ci) < fpmin) cr = fpmin;
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (std::abs(dlr - 1.0) + std::abs(dli) <= eps) break;
        }
        if (i >= max_iterations) no_convergence("Steed");
        const double gam = (p - f) / q;
        rjmu = std::copysign(std::sqrt(w / ((p - f) * gam + q)), rjl);
        rymu = rjmu * gam;
        const double rymup = rymu * (p + q / gam);
        ry1 = xmu * xi * rymu - rymup;
    }
    const double rj = rjl1 * (rjmu / rjl);
    for (int k = 1; k <= nl; ++k) {
        const double rytemp = (xmu + k) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = rytemp;
    }
    return {rj, rymu};
}

/// I_nu(x), K_nu(x) for nu >= 0, x > 0.
inline std::array<double, 2> ik(double xnu, double x) {
    constexpr double xmin = 2.0;
    const int nl = static_cast<int>(xnu + 0.5);
    const double xmu = xnu - nl, xmu2 = xmu * xmu;
    const double xi = 1.0 / x, xi2 = 2.0 * xi;
    double h = std::max(xnu * xi, fpmin);
    double b = xi2 * xnu, d = 0.0, c = h;
    int i = 0;
    for (; i < max_iterations; ++i) {
        b += xi2;
        d = 1.0 / (b + d);
        c = b + 1.0 / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    if (i >= max_iterations) no_convergence("I ratio");
    double ril = fpmin, ripl = h * ril;
    const double ril1 = ril;
    double fact = xnu * xi;
    for (int l = nl - 1; l >= 0; --l) {
        const double ritemp = fact * ril + ripl;
        fact -= xi;
        ripl = fact * ritemp + ril;
        ril = ritemp;
    }
    const double f = ripl / ril;
    double rkmu, rk1;
    if (x < xmin) {
        const double x2 = 0.5 * x, pimu = pi * xmu;
        const double fct = std::abs(pimu) < eps ? 1.0 : pimu / std::sin(pimu);
        double dd = -std::log(x2);
        double e = xmu * dd;
        const double fact2 = std::abs(e) < eps ? 1.0 : std::sinh(e) / e;
        const auto g = temme_gammas(xmu);
        double ff = fct * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * dd);
        double sum = ff;
        e = std::exp(e);
        double p = 0.5 * e / g.gampl, q = 0.5 / (e * g.gammi);
        double cc = 1.0;
        dd = x2 * x2;
        double sum1 = p;
        for (i = 1; i < max_iterations; ++i) {
            ff = (i * ff + p + q) / (i * i - xmu2);
            cc *= dd / i;
            p /= i - xmu;
            q /= i + xmu;
            const double del = cc * ff;
            sum += del;
            sum1 += cc * (p - i * ff);
            if (std::abs(del) < std::abs(sum) * eps) break;
        }
        if (i >= max_iterations) no_convergence("K series");
        rkmu = sum;
        rk1 = sum1 * xi2;
    } else {
        double bb = 2.0 * (1.0 + x), dd = 1.0 / bb;
        double hh = dd, delh = dd;
        double q1 = 0.0, q2 = 1.0;
        const double a1 = 0.25 - xmu2;
        double q = a1, cc = a1, a = -a1;
        double s = 1.0 + q * delh;
        for (i = 1; i < max_iterations; ++i) {
            a -= 2 * i;
            cc = -a * cc / (i + 1.0);
            const double qnew = (q1 - bb * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += cc * qnew;
            bb += 2.0;
            dd = 1.0 / (bb + a * dd);
            delh = (bb * dd - 1.0) * delh;
            hh += delh;
            const double dels = q * delh;
            s += dels;
            if (std::abs(dels / s) < eps) break;
        }
        if (i >= max_iterations) no_convergence("Steed K");
        hh = a1 * hh;
        rkmu = std::sqrt(pi / (2.0 * x)) * std::exp(-x) / s;
        rk1 = rkmu * (xmu + x + 0.5 - hh) * xi;
    }
    const double rkmup = xmu * xi * rkmu - rk1;
    const double rimu = xi / (f * rkmu - rkmup);
    const double ri = rimu * ril1 / ril;
    for (int k = 1; k <= nl; ++k) {
        const double rktemp = (xmu + k) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = rktemp;
    }
    return {ri, rkmu};
}

// sin(pi x), cos(pi x) with exact zeros at (half-)integers
inline double sin_pi(double x) {
    const double r = std::remainder(x, 2.0);
    if (r == 0.0 || std::abs(r) == 1.0) return 0.0;
    return std::sin(pi * r);
}
inline double cos_pi(double x) {
    const double r = std::remainder(x, 2.0);
    if (std::abs(r) == 0.5) return 0.0;
    return std::cos(pi * r);
}

using LC = std::complex<long double>;
inline constexpr long double pil = 3.141592653589793238462643383279502884L;

inline LC rgamma(LC z) {
    static constexpr long double g = 7.0L;
    static constexpr long double coef[9] = {0.99999999999980993L,  676.5203681218851L,     -1259.1392167224028L,
                                            771.32342877765313L,   -176.61502916214059L,   12.507343278686905L,
                                            -0.13857109526572012L, 9.9843695780195716e-6L, 1.5056327351493116e-7L};
    if (z.real() < 0.5L) return std::sin(pil * z) / pil * (1.0L / rgamma(1.0L - z));
    z -= 1.0L;
    LC x = coef[0];
    for (int k = 1; k < 9; ++k) x += coef[k] / (z + LC(k));
    const LC t = z + g + 0.5L;
    return 1.0L / (std::sqrt(2.0L * pil) * std::pow(t, z + 0.5L) * std::exp(-t) * x);
}

/// nu not a negative integer.
/// sum_k (sign z^2/4)^k / (k! Gamma(nu+k+1)) times (z/2)^nu; sign = +1 gives I, -1 gives J.
inline LC ascending(LC nu, LC z, int sign) {
    const LC w = LC(sign) * z * z / 4.0L;
    LC term = rgamma(nu + 1.0L);
    LC sum = term;
    for (int k = 1; k < 2000; ++k) {
        term *= w / (static_cast<long double>(k) * (nu + static_cast<long double>(k)));
        sum += term;
        if (std::abs(term) <= 1e-21L * std::abs(sum) && k > std::abs(z)) break;
    }
    return sum * std::pow(z / 2.0L, nu);
}

inline long double digamma_int(int m) { // psi(m), m >= 1
    long double s = -static_cast<long double>(euler_gamma);
    for (int k = 1; k < m; ++k) s += 1.0L / k;
    return s;
}

/// Y_n or K_n for integer n >= 0 by the limit series.
inline LC integer_second_kind(int n, LC z, bool modified) {
    const LC h = z / 2.0L, lg = std::log(h);
    const LC w = (modified ? 1.0L : -1.0L) * h * h;
    LC finite = 0.0L;
    {
        long double fact_nk1 = 1.0L; // (n-k-1)!
        for (int k = 1; k < n; ++k) fact_nk1 *= k;
        long double fact_k = 1.0L;
        for (int k = 0; k < n; ++k) {
            if (k > 0) {
                fact_k *= k;
                fact_nk1 /= (n - k);
            }
            const long double sgn = modified && (k % 2) ? -1.0L : 1.0L;
            finite += sgn * fact_nk1 / fact_k * std::pow(h, static_cast<long double>(2 * k - n));
        }
    }
    LC tail = 0.0L;
    LC term = std::pow(h, static_cast<long double>(n));
    for (int k = 1; k <= n; ++k) term /= static_cast<long double>(k);
    long double psi_a = digamma_int(1), psi_b = digamma_int(n + 1);
    for (int k = 0; k < 2000; ++k) {
        if (k > 0) {
            term *= w / (static_cast<long double>(k) * static_cast<long double>(n + k));
            psi_a += 1.0L / k;
            psi_b += 1.0L / (n + k);
        }
        const LC d = (psi_a + psi_b) * term;
        tail += d;
        if (k > std::abs(z) && std::abs(d) <= 1e-21L * std::abs(tail)) break;
    }
    if (modified) {
        const LC in = ascending(LC(n), z, 1);
        const long double sn = (n % 2) ? -1.0L : 1.0L;
        return 0.5L * finite - sn * lg * in + sn * 0.5L * tail;
    }
    const LC jn = ascending(LC(n), z, -1);
    return -finite / pil + 2.0L / pil * lg * jn - tail / pil;
}

inline bool is_integer(Complex nu) {
    return nu.imag() == 0.0 && nu.real() == std::round(nu.real());
}

inline Complex to_c(LC z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

enum class Kind { I, K, J, Y };

inline Complex complex_path(Kind kind, Complex nu_d, Complex z_d) {
    const LC nu(nu_d.real(), nu_d.imag()), z(z_d.real(), z_d.imag());
    const bool modified = kind == Kind::I || kind == Kind::K;
    const int sign = modified ? 1 : -1;
    if (kind == Kind::I || kind == Kind::J) {
        if (is_integer(nu_d) && nu_d.real() < 0.0) {
            const int n = static_cast<int>(-nu_d.real());
            const LC v = ascending(LC(n), z, sign);
            return to_c(!modified && (n % 2) ? -v : v);
        }
        return to_c(ascending(nu, z, sign));
    }
    if (is_integer(nu_d)) {
        const int n = static_cast<int>(std::abs(nu_d.real()));
        const LC v = integer_second_kind(n, z, modified);
        // K_{-n} = K_n, Y_{-n} = (-1)^n Y_n
        return to_c(!modified && nu_d.real() < 0.0 && (n % 2) ? -v : v);
    }
    const LC s = std::sin(pil * nu), c = std::cos(pil * nu);
    if (modified) return to_c(pil / 2.0L * (ascending(-nu, z, 1) - ascending(nu, z, 1)) / s);
    return to_c((ascending(nu, z, -1) * c - ascending(-nu, z, -1)) / s);
}

inline Complex real_path(Kind kind, double nu, double x) {
    const double m = std::abs(nu);
    const bool modified = kind == Kind::I || kind == Kind::K;
    const auto pair = modified ? ik(m, x) : jy(m, x);
    const double first = pair[0], second = pair[1];
    if (nu >= 0.0) return (kind == Kind::I || kind == Kind::J) ? first : second;
    const double sn = sin_pi(m), cs = cos_pi(m);
    switch (kind) {
    case Kind::I: return first + 2.0 / pi * sn * second;
    case Kind::K: return second;
    case Kind::J: return cs * first - sn * second;
    case Kind::Y: return sn * first + cs * second;
    }
    return {};
}

inline Complex evaluate(Kind kind, Complex nu, Complex z) {
    if (z == Complex{}) throw Error(ErrorKind::SingularPoint, "Bessel functions evaluated at z = 0");
    if (std::abs(nu) > bessel_max_order) throw Error(ErrorKind::EvaluationOverflow, "Bessel order beyond validated range");
    const bool real = nu.imag() == 0.0 && z.imag() == 0.0 && z.real() > 0.0;
    if (real) {
        if (z.real() > bessel_real_max_argument)
            throw Error(ErrorKind::EvaluationOverflow, "Bessel argument beyond validated range");
        return real_path(kind, nu.real(), z.real());
    }
    if (std::abs(z) > bessel_complex_max_argument)
        throw Error(ErrorKind::EvaluationOverflow, "complex Bessel argument beyond validated range");
    return complex_path(kind, nu, z);
}

} // namespace detail::bessel

inline Complex bessel_i(Complex nu, Complex z) { return detail::bessel::evaluate(detail::bessel::Kind::I, nu, z); }
inline Complex bessel_k(Complex nu, Complex z) { return detail::bessel::evaluate(detail::bessel::Kind::K, nu, z); }
inline Complex bessel_j(Complex nu, Complex z) { return detail::bessel::evaluate(detail::bessel::Kind::J, nu, z); }
inline Complex bessel_y(Complex nu, Complex z) { return detail::bessel::evaluate(detail::bessel::Kind::Y, nu, z); }

} // namespace painleve
