#pragma once

// Generalized hypergeometric series engine, Tricomi U, and the parameter
// derivatives of 1F1 (G1/H1) and of U (central differences).

#include <functional>
#include <vector>

#include "wderiv/scalar.hpp"
#include "wderiv/types.hpp"

namespace wderiv {

struct hyp_params {
    std::vector<double> upper;
    std::vector<double> lower;
    cplx argument{0.0, 0.0};

    hyp_params(std::vector<double> up, std::vector<double> lo, cplx z)
        : upper(std::move(up)), lower(std::move(lo)), argument(z) {
        for (double b : lower)
            if (is_nonpositive_integer(b))
                throw pole_error("pfq: lower parameter is a nonpositive integer");
        if (upper.size() > lower.size() + 1)
            throw domain_error("pfq: requires p <= q + 1");
    }
};

// pFq partial sum with the successive-term recurrence; convergence is
// declared after three consecutive terms below tolerance.
inline series_result pfq(const hyp_params& p, const series_control& ctl = {}) {
    if (p.upper.size() == p.lower.size() + 1 && std::abs(p.argument) >= 1.0)
        throw domain_error("pfq: p = q+1 series requires |z| < 1");
    cplx term(1.0, 0.0);
    cplx sum(1.0, 0.0);
    int ok = 0;
    for (int n = 0; n < ctl.max_terms; ++n) {
        cplx ratio = p.argument / static_cast<double>(n + 1);
        for (double a : p.upper) ratio *= (a + n);
        for (double b : p.lower) ratio /= (b + n);
        term *= ratio;
        sum += term;
        if (!is_finite(sum)) throw non_convergence("pfq: series overflowed");
        if (std::abs(term) <= std::max(ctl.rel_tol * std::abs(sum), ctl.abs_floor)) {
            if (++ok >= 3) {
                series_result r;
                r.value = sum;
                r.terms_used = n + 1;
                r.tail_bound = std::abs(term);
                return r;
            }
        } else {
            ok = 0;
        }
    }
    throw non_convergence("pfq: no convergence within max_terms");
}

// real-argument conveniences
inline double hyp1f1(double a, double b, double x, const series_control& ctl = {}) {
    return pfq(hyp_params({a}, {b}, cplx(x, 0.0)), ctl).value.real();
}

// Kummer-stabilized 1F1: negative arguments flipped through e^x 1F1(b-a;b;-x)
inline double kummer_1f1(double a, double b, double x, const series_control& ctl = {}) {
    if (x < 0.0) return std::exp(x) * hyp1f1(b - a, b, -x, ctl);
    return hyp1f1(a, b, x, ctl);
}

inline double hyp2f2(double a1, double a2, double b1, double b2, double x,
                     const series_control& ctl = {}) {
    return pfq(hyp_params({a1, a2}, {b1, b2}, cplx(x, 0.0)), ctl).value.real();
}

// ---------------------------------------------------------------------------
// G1 = d/da 1F1(a;b;x), H1 = d/db 1F1(a;b;x)
// ---------------------------------------------------------------------------

// G1 series: sum_{n>=1} (a)_n/(b)_n [psi(a+n)-psi(a)] x^n/n!.  The psi
// difference telescopes to sum_{j<n} 1/(a+j); the pole-free joint recurrence
//   u_{n+1} = r_n u_n + s_n p_n,  p_{n+1} = r_n p_n,  r_n = (a+n) x/((n+1)(b+n))
// keeps (a)_n * sum_j 1/(a+j) finite even across nonpositive integer a.
inline series_result g1(double a, double b, double x, const series_control& ctl = {}) {
    if (is_nonpositive_integer(b))
        throw pole_error("g1: lower parameter is a nonpositive integer");
    double u = 0.0;   // c_n x^n / (n! (b)_n), c_n = sum_j prod_{i != j} (a+i)
    double p = 1.0;   // (a)_n x^n / (n! (b)_n)
    kahan_sum sum;
    int n = 0;
    int ok = 0;
    for (; n < ctl.max_terms; ++n) {
        double scale = x / ((n + 1.0) * (b + n));
        double unew = ((a + n) * u + p) * scale;
        p *= (a + n) * scale;
        u = unew;
        sum.add(u);
        if (!std::isfinite(u)) throw non_convergence("g1: series overflowed");
        if (std::abs(u) <= std::max(ctl.rel_tol * std::abs(sum.value()), ctl.abs_floor)
            && std::abs(p) <= std::max(ctl.rel_tol * std::abs(sum.value()), ctl.abs_floor)) {
            if (++ok >= 3) break;
        } else {
            ok = 0;
        }
    }
    if (ok < 3) throw non_convergence("g1: no convergence within max_terms");
    series_result r;
    r.value = cplx(sum.value(), 0.0);
    r.terms_used = n + 1;
    r.tail_bound = std::abs(u);
    return r;
}

// H1 series: -(a)_n/(b)_n [psi(b+n)-psi(b)] x^n/n!
inline series_result h1(double a, double b, double x, const series_control& ctl = {}) {
    if (is_nonpositive_integer(b))
        throw pole_error("h1: lower parameter is a nonpositive integer");
    double p = 1.0;   // (a)_n x^n / (n! (b)_n)
    double T = 0.0;   // sum_{j<n} 1/(b+j)
    kahan_sum sum;
    int n = 0;
    int ok = 0;
    for (; n < ctl.max_terms; ++n) {
        p *= (a + n) * x / ((n + 1.0) * (b + n));
        T += 1.0 / (b + n);
        double term = -p * T;
        sum.add(term);
        if (!std::isfinite(term)) throw non_convergence("h1: series overflowed");
        if (std::abs(term) <= std::max(ctl.rel_tol * std::abs(sum.value()), ctl.abs_floor)) {
            if (++ok >= 3) break;
        } else {
            ok = 0;
        }
    }
    if (ok < 3) throw non_convergence("h1: no convergence within max_terms");
    series_result r;
    r.value = cplx(sum.value(), 0.0);
    r.terms_used = n + 1;
    r.tail_bound = std::abs(p * T);
    return r;
}

// Residual of the differentiated Kummer transform,
//   G1(b;a;x) = -e^x G1(a-b;a;-x)
// (the upper parameter is differentiated on both sides).
inline double g1_transform_check(double a, double b, double x,
                                 const series_control& ctl = {}) {
    double lhs = g1(b, a, x, ctl).value.real();
    double rhs = std::exp(x) * g1(a - b, a, -x, ctl).value.real();
    return std::abs(lhs + rhs);
}

// ---------------------------------------------------------------------------
// Tricomi U
// ---------------------------------------------------------------------------

namespace detail {

// two-term representation, b away from the integers
inline double tricomi_two_term(double a, double b, double x,
                               const series_control& ctl, double* cancellation) {
    double c1 = gamma_r(1.0 - b) * rgamma(a - b + 1.0);
    double c2 = gamma_r(b - 1.0) * rgamma(a);
    double t1 = (c1 == 0.0) ? 0.0 : c1 * kummer_1f1(a, b, x, ctl);
    double t2 = (c2 == 0.0) ? 0.0 : c2 * std::pow(x, 1.0 - b) * kummer_1f1(a - b + 1.0, 2.0 - b, x, ctl);
    if (cancellation) *cancellation = std::abs(t1) + std::abs(t2);
    return t1 + t2;
}

} // namespace detail

// U(a,b,x) for x > 0.  Integer (and near-integer) b goes through four
// off-lattice nodes b0 +- eps, b0 +- 2 eps interpolated to b; at b = b0 this
// is the Richardson-extrapolated average of the two symmetric pairs.
inline eval_result tricomi_u(double a, double b, double x, const series_control& ctl = {}) {
    if (x <= 0.0) throw domain_error("tricomi_u: requires x > 0");
    eval_result r;
    r.method = method_tag::tricomi;
    double d = b - std::round(b);
    if (std::abs(d) >= 1e-5) {
        double spread = 0.0;
        r.value = detail::tricomi_two_term(a, b, x, ctl, &spread);
        r.err = 1e-15 * spread + 2e-16 * std::abs(r.value);
        if (spread > 1e6 * std::abs(r.value)) r.flags |= flag_cancellation;
        return r;
    }
    const double eps = 1e-6;
    double b0 = std::round(b);
    double spread = 0.0, smax = 0.0;
    auto node = [&](double bb) {
        double s = 0.0;
        double v = detail::tricomi_two_term(a, bb, x, ctl, &s);
        smax = std::max(smax, s);
        return v;
    };
    double f1m = node(b0 - eps), f1p = node(b0 + eps);
    double f2m = node(b0 - 2 * eps), f2p = node(b0 + 2 * eps);
    double u = d / eps;
    double w_m2 = (u + 1) * (u - 1) * (u - 2) / ((-1) * (-3) * (-4));
    double w_m1 = (u + 2) * (u - 1) * (u - 2) / ((1) * (-2) * (-3));
    double w_p1 = (u + 2) * (u + 1) * (u - 2) / ((3) * (2) * (-1));
    double w_p2 = (u + 2) * (u + 1) * (u - 1) / ((4) * (3) * (1));
    r.value = w_m2 * f2m + w_m1 * f1m + w_p1 * f1p + w_p2 * f2p;
    spread = std::abs(0.5 * (f1p + f1m) - 0.5 * (f2p + f2m));
    r.err = spread + 1e-15 * smax;
    if (smax > 1e6 * std::abs(r.value)) r.flags |= flag_cancellation;
    return r;
}

inline double tricomi_u_value(double a, double b, double x, const series_control& ctl = {}) {
    return tricomi_u(a, b, x, ctl).value;
}

// ---------------------------------------------------------------------------
// Parameter derivatives of U by central differences with one Richardson level
// ---------------------------------------------------------------------------

struct u_derivs {
    double dU_da = 0.0;
    double dU_db = 0.0;
    double err = 0.0;
};

namespace detail {

inline double central_richardson(const std::function<double(double)>& f, double at,
                                 double h, double* err_out) {
    auto d = [&](double hh) { return (f(at + hh) - f(at - hh)) / (2.0 * hh); };
    double d1 = d(h);
    double d2 = d(0.5 * h);
    double rich = (4.0 * d2 - d1) / 3.0;
    if (err_out) *err_out = std::abs(rich - d2);
    return rich;
}

} // namespace detail

inline u_derivs u_param_derivs(double a, double b, double x, const series_control& ctl = {}) {
    if (x <= 0.0) throw domain_error("u_param_derivs: requires x > 0");
    u_derivs r;
    double ea = 0.0, eb = 0.0;
    double ha = 1e-4 * std::max(1.0, std::abs(a));
    double hb = 1e-4 * std::max(1.0, std::abs(b));
    r.dU_da = detail::central_richardson(
        [&](double aa) { return tricomi_u_value(aa, b, x, ctl); }, a, ha, &ea);
    r.dU_db = detail::central_richardson(
        [&](double bb) { return tricomi_u_value(a, bb, x, ctl); }, b, hb, &eb);
    r.err = ea + eb;
    double scale = std::max({std::abs(r.dU_da), std::abs(r.dU_db), 1e-3});
    if (ea > 1e-5 * scale || eb > 1e-5 * scale)
        throw step_collapse("u_param_derivs: Richardson levels disagree beyond 1e-5 relative");
    return r;
}

// ---------------------------------------------------------------------------
// 2F2(1,1;2,2+m;x) reduction (finite, real; the x -> 0 limit is 1)
// ---------------------------------------------------------------------------

inline double reduce_2f2_m(int m, double x, const series_control& ctl = {}) {
    if (m < 0) throw domain_error("reduce_2f2_m: m must be >= 0");
    if (x == 0.0) return 1.0;
    kahan_sum s;
    s.add(harmonic(m));
    s.add(-ein(-x));
    for (int k = 1; k <= m; ++k)
        s.add(binomial(m, k) * std::pow(x, -k) * lower_gamma_negx_int(k, x, ctl));
    return (m + 1.0) / x * s.value();
}

} // namespace wderiv
