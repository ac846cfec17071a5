#pragma once

// Scalar special functions: gamma family, incomplete gammas (complex argument
// on the arg(-x)=+pi branch), exponential-integral family, erf family,
// modified Bessel I/K, Laguerre polynomials and small combinatorial helpers.

#include <array>
#include <algorithm>
#include <cstdlib>
#include <vector>

#include "wderiv/types.hpp"

namespace wderiv {

// sin(pi x) / cos(pi x) with argument reduction, accurate near integers
inline double sinpi(double x) {
    double r = std::remainder(x, 2.0);     // r in [-1, 1]
    if (r > 0.5) r = 1.0 - r;
    else if (r < -0.5) r = -1.0 - r;
    return std::sin(pi * r);
}

inline double cospi(double x) {
    return sinpi(x + 0.5);
}

inline double cotpi(double x) {
    return cospi(x) / sinpi(x);
}

namespace detail {

// Godfrey's Lanczos coefficients, g = 607/128, relative error < 1e-15
inline constexpr double lanczos_g = 607.0 / 128.0;
inline constexpr std::array<double, 15> lanczos_c = {
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    3.3994649984811888699e-5,
    4.6523628927048575665e-5,
    -9.8374475304879564677e-5,
    1.5808870322491248884e-4,
    -2.1026444172410488319e-4,
    2.1743961811521264320e-4,
    -1.6431810653676389022e-4,
    8.4418223983852743293e-5,
    -2.6190838401581408670e-5,
    3.6899182659531622704e-6,
};

inline cplx lanczos_gamma_half_plane(cplx z) {
    // valid for Re z >= 0.5
    cplx s = lanczos_c[0];
    for (std::size_t k = 1; k < lanczos_c.size(); ++k)
        s += lanczos_c[k] / (z + static_cast<double>(k - 1));
    cplx t = z + (lanczos_g - 0.5);
    return std::sqrt(2.0 * pi) * std::pow(t, z - 0.5) * std::exp(-t) * s;
}

inline cplx sin_pi_c(cplx z) {
    if (z.imag() == 0.0) return cplx(sinpi(z.real()), 0.0);
    return std::sin(pi * z);
}

} // namespace detail

inline bool is_nonpositive_integer(double a, double tol = 0.0) {
    if (a > 0.5) return false;
    return tol == 0.0 ? a == std::round(a) : int_distance(a) <= tol;
}

// Gamma(z), complex, >= 13 significant digits for |z| <= 50 off the poles
inline cplx gamma_c(cplx z) {
    if (z.imag() == 0.0 && is_nonpositive_integer(z.real()))
        throw pole_error("gamma: pole at nonpositive integer " + std::to_string(z.real()));
    if (z.real() >= 0.5) return detail::lanczos_gamma_half_plane(z);
    // reflection
    return pi / (detail::sin_pi_c(z) * detail::lanczos_gamma_half_plane(1.0 - z));
}

inline double gamma_r(double a) {
    if (is_nonpositive_integer(a))
        throw pole_error("gamma: pole at nonpositive integer " + std::to_string(a));
    if (a > 0.0) return std::tgamma(a);
    return pi / (sinpi(a) * std::tgamma(1.0 - a));
}

// 1/Gamma(a); zero at the poles
inline double rgamma(double a) {
    if (is_nonpositive_integer(a)) return 0.0;
    if (a > 0.0) return 1.0 / std::tgamma(a);
    return sinpi(a) * std::tgamma(1.0 - a) / pi;
}

// psi(z), complex plane minus the poles
inline cplx digamma_c(cplx z) {
    if (z.imag() == 0.0 && is_nonpositive_integer(z.real()))
        throw pole_error("digamma: pole at nonpositive integer " + std::to_string(z.real()));
    cplx acc(0.0, 0.0);
    if (z.real() < 0.5) {
        // psi(z) = psi(1-z) - pi cot(pi z)
        cplx s = detail::sin_pi_c(z);
        cplx c = (z.imag() == 0.0) ? cplx(cospi(z.real()), 0.0) : std::cos(pi * z);
        acc -= pi * c / s;
        z = 1.0 - z;
    }
    while (std::abs(z) < 12.0) {
        acc -= 1.0 / z;
        z += 1.0;
    }
    // asymptotic series, B_{2n}/(2n z^{2n})
    static constexpr std::array<double, 7> b2n_over_2n = {
        1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0,
        1.0 / 132.0, -691.0 / 32760.0, 1.0 / 12.0,
    };
    cplx inv2 = 1.0 / (z * z);
    cplx sum(0.0, 0.0);
    cplx p = inv2;
    for (double coef : b2n_over_2n) {
        sum += coef * p;
        p *= inv2;
    }
    return acc + std::log(z) - 0.5 / z - sum;
}

inline double digamma_r(double a) {
    return digamma_c(cplx(a, 0.0)).real();
}

// psi(a)/Gamma(a), finite everywhere; at a = -p the limit is (-1)^{p+1} p!
inline double psi_over_gamma(double a) {
    if (is_nonpositive_integer(a)) {
        long long p = std::llround(-a);
        double f = 1.0;
        for (long long k = 2; k <= p; ++k) f *= static_cast<double>(k);
        return (p % 2 == 0 ? -1.0 : 1.0) * f;
    }
    return digamma_r(a) * rgamma(a);
}

inline double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double b = 1.0;
    for (int j = 1; j <= k; ++j) b = b * (n - k + j) / j;
    return b;
}

inline double harmonic(int n) {
    kahan_sum s;
    for (int k = 1; k <= n; ++k) s.add(1.0 / k);
    return s.value();
}

// e_n(x) = sum_{k<=n} x^k/k!
inline double exp_polynomial(int n, double x) {
    kahan_sum s;
    double t = 1.0;
    s.add(t);
    for (int k = 1; k <= n; ++k) {
        t *= x / k;
        s.add(t);
    }
    return s.value();
}

inline double pochhammer(double a, int n) {
    double p = 1.0;
    for (int k = 0; k < n; ++k) p *= (a + k);
    return p;
}

inline double beta(double x, double y) {
    if (is_nonpositive_integer(x) || is_nonpositive_integer(y))
        throw pole_error("beta: pole at nonpositive integer argument");
    // Gamma(x+y) may itself sit on a pole; 1/Gamma covers that case
    double rg = rgamma(x + y);
    if (rg == 0.0) throw pole_error("beta: Gamma(x+y) pole");
    return gamma_r(x) * gamma_r(y) * rg;
}

// ---------------------------------------------------------------------------
// Incomplete gammas
// ---------------------------------------------------------------------------

// lower gamma(nu, z) by the regularized power series
//   gamma(nu,z) = z^nu sum_n (-z)^n / (n! (nu+n))
inline cplx lower_gamma(double nu, cplx z, const series_control& ctl = {}) {
    if (is_nonpositive_integer(nu))
        throw pole_error("lower_gamma: order is a nonpositive integer");
    if (z == cplx(0.0, 0.0)) return cplx(0.0, 0.0);
    cplx term(1.0, 0.0);
    cplx sum = term / nu;
    int ok = 0;
    for (int n = 1; n <= ctl.max_terms; ++n) {
        term *= -z / static_cast<double>(n);
        cplx t = term / (nu + n);
        sum += t;
        if (std::abs(t) <= std::max(ctl.rel_tol * std::abs(sum), ctl.abs_floor)) {
            if (++ok >= 3) {
                cplx zp = (z.imag() == 0.0 && z.real() < 0.0)
                              ? pow_minus(-z.real(), nu)
                              : std::pow(z, nu);
                return zp * sum;
            }
        } else {
            ok = 0;
        }
    }
    throw non_convergence("lower_gamma: series did not converge");
}

// gamma(k,-x) for integer k >= 1 and real x, real-valued:
//   gamma(k,-x) = (-1)^k x^k sum_{j>=0} x^j / (j! (j+k))
// For x > 0 every term is positive; for x < 0 this is the ordinary
// gamma(k,|x|) and the (mildly alternating) same series is used.
inline double lower_gamma_negx_int(int k, double x, const series_control& ctl = {}) {
    if (k < 1) throw pole_error("lower_gamma_negx_int: order must be >= 1");
    if (x == 0.0) return 0.0;
    double term = 1.0;
    kahan_sum s;
    s.add(1.0 / k);
    for (int j = 1; j <= ctl.max_terms; ++j) {
        term *= x / j;
        double t = term / (j + k);
        s.add(t);
        if (std::abs(t) <= 0.01 * ctl.rel_tol * std::abs(s.value()) && j > std::abs(x)) break;
    }
    double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return sign * std::pow(x, k) * s.value();
}

namespace detail {

// Lentz continued fraction for Gamma(a,x), x > 0
inline double upper_gamma_cf(double a, double x, int max_iter = 400) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= max_iter; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) return std::exp(-x + a * std::log(x)) * h;
    }
    throw non_convergence("upper_gamma: continued fraction stalled");
}

} // namespace detail

// gamma(nu, x) for real x >= 0 (nu not a nonpositive integer)
inline double lower_gamma_r(double nu, double x, const series_control& ctl = {}) {
    return lower_gamma(nu, cplx(x, 0.0), ctl).real();
}

// Gamma(nu, x) for real x > 0; continued fraction when x > nu + 1, else
// complement of the series
inline double e1(double x);

inline double upper_gamma(double nu, double x, const series_control& ctl = {}) {
    if (x <= 0.0) throw domain_error("upper_gamma: requires x > 0");
    if (nu == 0.0) return e1(x);
    if (x > nu + 1.0) return detail::upper_gamma_cf(nu, x);
    if (is_nonpositive_integer(nu))
        return detail::upper_gamma_cf(nu, x);  // reached only for x in (0, nu+1]
    return gamma_r(nu) - lower_gamma_r(nu, x, ctl);
}

// ---------------------------------------------------------------------------
// Exponential integrals
// ---------------------------------------------------------------------------

// Ein(x) = sum_{k>=1} (-1)^{k+1} x^k / (k k!)  (entire)
inline double ein_series(double x, const series_control& ctl = {}) {
    if (x == 0.0) return 0.0;
    double term = 1.0;
    kahan_sum s;
    for (int k = 1; k <= ctl.max_terms; ++k) {
        term *= -x / k;
        double t = -term / k;
        s.add(t);
        if (std::abs(t) <= 0.01 * ctl.rel_tol * std::max(std::abs(s.value()), 1e-30) && k > std::abs(x))
            return s.value();
    }
    throw non_convergence("ein: series did not converge");
}

inline double e1(double x) {
    if (x <= 0.0) throw domain_error("e1: requires x > 0");
    if (x <= 1.0) return ein_series(x) - std::log(x) - euler_gamma;
    return detail::upper_gamma_cf(0.0, x);   // E1(x) = Gamma(0,x)
}

inline double ein(double x) {
    if (x > 4.0) return e1(x) + std::log(x) + euler_gamma;
    return ein_series(x);
}

struct exp_integrals_result {
    double e1 = 0.0, ein = 0.0, shi = 0.0, chi = 0.0;
};

// consistent family: E1 = Ein - ln x - gamma, Chi - Shi = -E1 (x > 0)
inline exp_integrals_result exp_integrals(double x) {
    if (x <= 0.0) throw domain_error("exp_integrals: E1/Chi require x > 0");
    exp_integrals_result r;
    r.e1 = e1(x);
    r.ein = r.e1 + std::log(x) + euler_gamma;
    double ein_neg = ein_series(-x);   // all terms same sign, stable
    r.shi = 0.5 * (r.ein - ein_neg);
    r.chi = euler_gamma + std::log(x) + 0.5 * (-ein_neg - r.ein);
    return r;
}

inline double shi(double x) {
    double sign = x < 0 ? -1.0 : 1.0;
    x = std::abs(x);
    if (x == 0.0) return 0.0;
    return sign * 0.5 * (ein(x) - ein_series(-x));
}

inline double chi(double x) {
    if (x <= 0.0) throw domain_error("chi: requires x > 0");
    return euler_gamma + std::log(x) + 0.5 * (-ein_series(-x) - ein(x));
}

// complex E1 via the entire Ein series (moderate |z|)
inline cplx e1_c(cplx z, const series_control& ctl = {}) {
    if (z == cplx(0.0, 0.0)) throw domain_error("e1_c: z = 0");
    if (z.imag() == 0.0 && z.real() > 0.0) return cplx(e1(z.real()), 0.0);
    cplx term(1.0, 0.0);
    cplx sum(0.0, 0.0);
    for (int k = 1; k <= ctl.max_terms; ++k) {
        term *= -z / static_cast<double>(k);
        cplx t = -term / static_cast<double>(k);
        sum += t;
        if (std::abs(t) <= ctl.rel_tol * std::max(std::abs(sum), 1e-30) && k > std::abs(z)) {
            cplx lnz = (z.imag() == 0.0 && z.real() < 0.0)
                           ? cplx(std::log(-z.real()), pi)
                           : std::log(z);
            return sum - lnz - euler_gamma;
        }
    }
    throw non_convergence("e1_c: series did not converge");
}

// Gamma(-m, z) = (-1)^m/m! [E1(z) - e^{-z} sum_{k<m} (-1)^k k!/z^{k+1}]
inline cplx upper_gamma_neg_order(int m, cplx z) {
    if (z == cplx(0.0, 0.0)) throw domain_error("upper_gamma_neg_order: z = 0");
    if (m < 0) throw domain_error("upper_gamma_neg_order: m must be >= 0");
    cplx sum(0.0, 0.0);
    cplx zk = z;  // z^{k+1}
    double kfac = 1.0;
    for (int k = 0; k < m; ++k) {
        if (k > 0) {
            kfac *= k;
            zk *= z;
        }
        double sign = (k % 2 == 0) ? 1.0 : -1.0;
        sum += sign * kfac / zk;
    }
    double pref = rgamma(m + 1.0) * ((m % 2 == 0) ? 1.0 : -1.0);
    return pref * (e1_c(z) - std::exp(-z) * sum);
}

inline double upper_gamma_neg_order_r(int m, double x) {
    return upper_gamma_neg_order(m, cplx(x, 0.0)).real();
}

// Gamma(nu, x) for possibly negative non-integer nu, real x > 0
inline double upper_gamma_any(double nu, double x, const series_control& ctl = {}) {
    if (near_integer(nu) && nu < 0.5)
        return upper_gamma_neg_order_r(static_cast<int>(std::llround(-nu)), x);
    return upper_gamma(nu, x, ctl);
}

// generalized exponential integral E_p(z) = z^{p-1} Gamma(1-p, z)
inline cplx gen_exp_integral(double p, cplx z, const series_control& ctl = {}) {
    if (z == cplx(0.0, 0.0)) throw domain_error("gen_exp_integral: z = 0");
    double a = 1.0 - p;
    cplx zp = (z.imag() == 0.0 && z.real() < 0.0) ? pow_minus(-z.real(), p - 1.0)
                                                  : std::pow(z, p - 1.0);
    cplx G;
    if (near_integer(a) && a < 0.5) {
        G = upper_gamma_neg_order(static_cast<int>(std::llround(-a)), z);
    } else if (z.imag() == 0.0 && z.real() > 0.0) {
        G = cplx(upper_gamma(a, z.real(), ctl), 0.0);
    } else {
        if (is_nonpositive_integer(a))
            throw pole_error("gen_exp_integral: Gamma(1-p) pole off the real axis path");
        G = gamma_c(cplx(a, 0.0)) - lower_gamma(a, z, ctl);
    }
    return zp * G;
}

// ---------------------------------------------------------------------------
// erf family
// ---------------------------------------------------------------------------

struct erf_family_result {
    double erf = 0.0, erfc = 0.0, erfi = 0.0;
};

inline double erfi(double x, const series_control& ctl = {}) {
    // Maclaurin series, 2/sqrt(pi) sum x^{2k+1}/(k!(2k+1))
    double x2 = x * x;
    double term = x;
    kahan_sum s;
    s.add(x);
    for (int k = 1; k <= ctl.max_terms; ++k) {
        term *= x2 / k;
        double t = term / (2 * k + 1);
        s.add(t);
        if (std::abs(t) <= 0.01 * ctl.rel_tol * std::abs(s.value()) && k > x2)
            return 2.0 / sqrt_pi * s.value();
    }
    throw non_convergence("erfi: series did not converge");
}

inline erf_family_result erf_family(double x) {
    erf_family_result r;
    r.erf = std::erf(x);
    r.erfc = std::erfc(x);
    r.erfi = erfi(x);
    return r;
}

// ---------------------------------------------------------------------------
// Modified Bessel functions
// ---------------------------------------------------------------------------

// I_nu by the ascending series; works for any real order (1/Gamma kills
// the pole terms for negative integer offsets)
inline double bessel_i(double nu, double x, const series_control& ctl = {}) {
    if (x <= 0.0) throw domain_error("bessel_i: requires x > 0");
    if (x > 700.0) throw overflow_error("bessel_i: argument too large");
    double q = 0.25 * x * x;
    double xh = 0.5 * x;
    kahan_sum s;
    double kfac = 1.0;
    double qk = 1.0;
    for (int k = 0; k <= ctl.max_terms; ++k) {
        if (k > 0) {
            kfac *= k;
            qk *= q;
        }
        double t = qk / kfac * rgamma(nu + k + 1.0);
        s.add(t);
        if (k > 2 && std::abs(t) <= ctl.rel_tol * std::max(std::abs(s.value()), ctl.abs_floor) &&
            static_cast<double>(k) > 0.5 * x)
            return std::pow(xh, nu) * s.value();
    }
    throw non_convergence("bessel_i: series did not converge");
}

namespace detail {

inline double bessel_k_offint(double nu, double x, const series_control& ctl) {
    // reflection formula, valid off integer order
    return 0.5 * pi * (bessel_i(-nu, x, ctl) - bessel_i(nu, x, ctl)) / sinpi(nu);
}

} // namespace detail

// K_nu via the reflection formula; near-integer orders interpolated from
// eps-offset nodes (removable singularity), two extrapolation levels
inline double bessel_k(double nu, double x, const series_control& ctl = {}) {
    if (x <= 0.0) throw domain_error("bessel_k: requires x > 0");
    nu = std::abs(nu);       // K is even in the order
    double d = int_distance(nu);
    if (d > 1e-3) return detail::bessel_k_offint(nu, x, ctl);
    // 4-point Lagrange through n +- eps, n +- 2 eps; at nu = n this reduces
    // to the Richardson-extrapolated average of the eps and 2 eps pairs
    const double eps = 0.00390625;  // 2^-8
    double n = std::round(nu);
    double t = nu - n;
    double f1p = detail::bessel_k_offint(n + eps, x, ctl);
    double f1m = detail::bessel_k_offint(std::abs(n - eps), x, ctl);
    double f2p = detail::bessel_k_offint(n + 2 * eps, x, ctl);
    double f2m = detail::bessel_k_offint(std::abs(n - 2 * eps), x, ctl);
    double u = t / eps;  // in [-1e-3/eps, +...], small
    // Lagrange weights on nodes -2,-1,1,2 (units of eps)
    double w_m2 = (u + 1) * (u - 1) * (u - 2) / ((-1) * (-3) * (-4));
    double w_m1 = (u + 2) * (u - 1) * (u - 2) / ((1) * (-2) * (-3));
    double w_p1 = (u + 2) * (u + 1) * (u - 2) / ((3) * (2) * (-1));
    double w_p2 = (u + 2) * (u + 1) * (u - 1) / ((4) * (3) * (1));
    return w_m2 * f2m + w_m1 * f1m + w_p1 * f1p + w_p2 * f2p;
}

// ---------------------------------------------------------------------------
// Laguerre polynomials
// ---------------------------------------------------------------------------

// L_n^{(alpha)}(x) = sum_m [prod_{j=m+1..n} (alpha+j)] (-x)^m / (m! (n-m)!)
// The product form avoids the Gamma-ratio poles at negative integer alpha.
inline double laguerre(int n, double alpha, double x) {
    if (n < 0) throw domain_error("laguerre: n must be >= 0");
    std::vector<double> suffix(static_cast<std::size_t>(n) + 1);
    suffix[static_cast<std::size_t>(n)] = 1.0;
    for (int m = n - 1; m >= 0; --m)
        suffix[static_cast<std::size_t>(m)] = suffix[static_cast<std::size_t>(m) + 1] * (alpha + m + 1);
    kahan_sum s;
    double xm = 1.0;   // (-x)^m / m!
    for (int m = 0; m <= n; ++m) {
        if (m > 0) xm *= -x / m;
        s.add(suffix[static_cast<std::size_t>(m)] * xm / factorial(n - m));
    }
    return s.value();
}

} // namespace wderiv
