#pragma once

// First parameter derivatives dW/dkappa and dW/dmu: the general series
// formulas, every closed-form special case, the integral-representation
// routes, the Macdonald-function order derivative, and automatic dispatch.

#include "wderiv/log_integrals.hpp"
#include "wderiv/oracle.hpp"
#include "wderiv/whittaker.hpp"

namespace wderiv {

enum class wrt_param { kappa, mu };
enum class deriv_route { auto_, closed_form, series, integral_rep, finite_difference };
enum class family_variant { limit, buschman };

struct deriv_request {
    whittaker_point point;
    wrt_param wrt = wrt_param::kappa;
    deriv_route route = deriv_route::auto_;
};

namespace detail {

inline deriv_result make_real_result(cplx v, case_family fam, double err_scale = 1e-12) {
    deriv_result r;
    r.case_used = fam;
    r.value = take_real(v, &r.imag_residual);
    if (r.imag_residual > 1e-8 * std::max(1.0, std::abs(r.value)))
        r.flags |= flag_imag_residual_big;
    r.err_estimate = err_scale * std::abs(r.value) + r.imag_residual;
    return r;
}

} // namespace detail

// ---------------------------------------------------------------------------
// dW/dkappa: general series (two-term psi*M + G1 combination)
// ---------------------------------------------------------------------------

inline deriv_result dW_dkappa_series(const whittaker_point& p, const series_control& ctl = {}) {
    if (p.x <= 0.0) throw domain_error("dW_dkappa_series: requires x > 0");
    double mu = std::abs(p.mu);   // even in mu
    double kappa = p.kappa, x = p.x;
    if (int_distance(2.0 * mu) < 1e-4)
        throw pole_error("dW_dkappa_series: too close to the 2 mu integer lattice");
    double cm = 0.5 - mu - kappa;  // pairs with Gamma(-2mu) group
    double cp = 0.5 + mu - kappa;
    double Mp = whittaker_m({kappa, mu, x}, ctl).value;
    double Mm = whittaker_m({kappa, -mu, x}, ctl).value;
    double g2 = g1(cm, 1.0 - 2.0 * mu, x, ctl).value.real();
    double grp1;
    if (x > 1.0) {
        // Kummer-transformed variant of the first G1 block
        double g1k = g1(0.5 + mu + kappa, 1.0 + 2.0 * mu, -x, ctl).value.real();
        grp1 = gamma_r(-2.0 * mu) *
               (psi_over_gamma(cm) * Mp +
                rgamma(cm) * std::pow(x, 0.5 + mu) * std::exp(0.5 * x) * g1k);
    } else {
        double g1d = g1(cp, 1.0 + 2.0 * mu, x, ctl).value.real();
        grp1 = gamma_r(-2.0 * mu) *
               (psi_over_gamma(cm) * Mp -
                rgamma(cm) * std::pow(x, 0.5 + mu) * std::exp(-0.5 * x) * g1d);
    }
    double grp2 = gamma_r(2.0 * mu) *
                  (psi_over_gamma(cp) * Mm -
                   rgamma(cp) * std::pow(x, 0.5 - mu) * std::exp(-0.5 * x) * g2);
    deriv_result r;
    r.case_used = case_family::generic;
    r.value = grp1 + grp2;
    r.err_estimate = 1e-13 * (std::abs(grp1) + std::abs(grp2));
    return r;
}

// ---------------------------------------------------------------------------
// Closed forms, kappa side
// ---------------------------------------------------------------------------

// kappa = mu + 1/2, 2 mu not integer
inline deriv_result dW_dkappa_theorem1(double mu, double x, const series_control& ctl = {}) {
    if (x <= 0.0) throw domain_error("dW_dkappa_theorem1: requires x > 0");
    if (near_integer(2.0 * mu, 1e-12))
        throw pole_error("dW_dkappa_theorem1: requires 2 mu not integer");
    cplx v = std::pow(x, mu) * (digamma_r(-2.0 * mu) -
                                x / (2.0 * mu + 1.0) * hyp2f2(1, 1, 2.0 * mu + 2.0, 2.0, x, ctl))
           + gamma_r(2.0 * mu + 1.0) * std::pow(x, -mu) * pow_minus(x, 2.0 * mu) *
                 lower_gamma(-2.0 * mu, neg_real(x), ctl);
    v *= std::sqrt(x) * std::exp(-0.5 * x);
    return detail::make_real_result(v, case_family::kappa_equals_mu_plus_half);
}

// kappa = n >= 1, mu = +-1/2 (Laguerre-polynomial form)
inline deriv_result dW_dkappa_laurenzi(int n, double x) {
    if (n < 1) throw domain_error("dW_dkappa_laurenzi: requires n >= 1");
    if (x <= 0.0) throw domain_error("dW_dkappa_laurenzi: requires x > 0");
    kahan_sum s;
    for (int l = 0; l < n; ++l)
        s.add(static_cast<double>(n + l) / static_cast<double>(n - l) * laguerre(l, -1.0, x));
    double sign = (n % 2 == 0) ? 1.0 : -1.0;
    deriv_result r;
    r.case_used = case_family::mu_half_integer;
    r.value = sign * factorial(n - 1) * std::exp(-0.5 * x) *
              (s.value() + n * laguerre(n, -1.0, x) * std::log(x));
    r.err_estimate = 4e-15 * std::abs(r.value);
    return r;
}

// kappa = 1/2 - mu; -2 mu not in {0,1,2,...}.  Primary form returned, the
// alternative form's cross-residual recorded in err_estimate when defined.
inline deriv_result dW_dkappa_half_minus_mu(double mu, double x, const series_control& ctl = {}) {
    if (x <= 0.0) throw domain_error("dW_dkappa_half_minus_mu: requires x > 0");
    if (is_nonpositive_integer(2.0 * mu, 1e-12))
        throw pole_error("dW_dkappa_half_minus_mu: -2 mu must not be 0,1,2,...");
    cplx brace = digamma_r(2.0 * mu)
               + x / (2.0 * mu) * pfq(hyp_params({1, 1}, {2.0, 1.0 + 2.0 * mu}, cplx(-x, 0.0)), ctl).value
               + std::polar(1.0, -2.0 * pi * mu) * upper_gamma_any(1.0 - 2.0 * mu, x, ctl) *
                     lower_gamma(2.0 * mu, neg_real(x), ctl);
    cplx v = std::exp(-0.5 * x) * std::pow(x, 0.5 - mu) * brace;
    deriv_result r = detail::make_real_result(v, case_family::kappa_equals_half_minus_mu);
    // alternative form, defined when 2-2mu is off the nonpositive integers
    if (!is_nonpositive_integer(2.0 - 2.0 * mu, 1e-12) && std::abs(2.0 * mu - 1.0) > 1e-12) {
        cplx brace2 = digamma_r(2.0 * mu)
                    + pi * (cotpi(2.0 * mu) - cplx(0.0, 1.0)) * rgamma(2.0 * mu) *
                          lower_gamma(2.0 * mu, neg_real(x), ctl)
                    + x / (2.0 * mu - 1.0) * hyp2f2(1, 1, 2.0, 2.0 - 2.0 * mu, x, ctl);
        double alt = (std::exp(-0.5 * x) * std::pow(x, 0.5 - mu) * brace2).real();
        r.err_estimate = std::max(r.err_estimate, std::abs(alt - r.value));
    }
    return r;
}

inline double dW_dkappa_half_minus_mu_alt(double mu, double x, const series_control& ctl = {}) {
    if (is_nonpositive_integer(2.0 * mu, 1e-12) || is_nonpositive_integer(2.0 - 2.0 * mu, 1e-12) ||
        std::abs(2.0 * mu - 1.0) <= 1e-12)
        throw pole_error("dW_dkappa_half_minus_mu_alt: parameter on an excluded lattice");
    cplx brace2 = digamma_r(2.0 * mu)
                + pi * (cotpi(2.0 * mu) - cplx(0.0, 1.0)) * rgamma(2.0 * mu) *
                      lower_gamma(2.0 * mu, neg_real(x), ctl)
                + x / (2.0 * mu - 1.0) * hyp2f2(1, 1, 2.0, 2.0 - 2.0 * mu, x, ctl);
    return (std::exp(-0.5 * x) * std::pow(x, 0.5 - mu) * brace2).real();
}

// kappa = (1+m)/2, mu = +-m/2
inline deriv_result dW_dkappa_integer_family(int m, double x,
                                             family_variant variant = family_variant::limit,
                                             const series_control& ctl = {}) {
    if (m < 0) throw domain_error("dW_dkappa_integer_family: m must be >= 0");
    if (x <= 0.0) throw domain_error("dW_dkappa_integer_family: requires x > 0");
    kahan_sum s;
    if (variant == family_variant::limit) {
        for (int k = 1; k <= m; ++k)
            s.add(std::pow(x, -k) *
                  (std::exp(x) * factorial(k - 1) + binomial(m, k) * lower_gamma_negx_int(k, x, ctl)));
    } else {
        for (int k = 1; k <= m; ++k)
            s.add(factorial(m) * std::pow(x, -k) / (k * factorial(m - k)));
    }
    deriv_result r;
    r.case_used = case_family::mu_half_integer;
    r.value = std::exp(-0.5 * x) * std::pow(x, 0.5 * (1.0 + m)) * (std::log(x) - s.value());
    r.err_estimate = 4e-15 * std::abs(r.value) + 1e-15 * std::exp(0.5 * x) * std::pow(x, 0.5 * (1.0 - m));
    return r;
}

namespace detail {

// shared inner bracket of the n/2 and (0, n+1/2) kappa-families:
//   (-1)^{j+1} Gamma(-j,x) gamma(j+1,-x) - H_j - sum_{l<=j} C(j,l)(-x)^{-l} gamma(l,x)
inline double dkw_inner_bracket(int j, double x, const series_control& ctl) {
    kahan_sum inner;
    double sgn = ((j + 1) % 2 == 0) ? 1.0 : -1.0;
    inner.add(sgn * upper_gamma_neg_order_r(j, x) * lower_gamma_negx_int(j + 1, x, ctl));
    inner.add(-harmonic(j));
    for (int l = 1; l <= j; ++l) {
        double sl = (l % 2 == 0) ? 1.0 : -1.0;
        inner.add(-binomial(j, l) * sl * std::pow(x, -l) * lower_gamma_r(l, x, ctl));
    }
    return inner.value();
}

// mu-side twin: H_j + (-1)^{j+1} Gamma(-j,x) gamma(j+1,-x) - sum_{l<=j} ...
inline double dmw_inner_bracket(int j, double x, const series_control& ctl) {
    return dkw_inner_bracket(j, x, ctl) + 2.0 * harmonic(j);
}

} // namespace detail

// kappa = n/2, mu = +-(n+1)/2
inline deriv_result dW_dkappa_n_half_family(int n, double x, const series_control& ctl = {}) {
    if (n < 0) throw domain_error("dW_dkappa_n_half_family: n must be >= 0");
    if (x <= 0.0) throw domain_error("dW_dkappa_n_half_family: requires x > 0");
    double E1x = e1(x);
    kahan_sum s;
    for (int k = 0; k <= n; ++k)
        s.add(std::pow(x, -k) / factorial(n - k) * detail::dkw_inner_bracket(k, x, ctl));
    deriv_result r;
    r.case_used = case_family::upper_gamma_family;
    r.value = std::pow(x, -0.5 * n) * std::exp(0.5 * x) * upper_gamma(n + 1.0, x) *
                  (E1x + std::log(x))
            + factorial(n) * std::pow(x, 0.5 * n) * std::exp(-0.5 * x) * s.value();
    r.err_estimate = 2e-14 * std::abs(r.value) + 1e-15;
    return r;
}

// kappa = 0, mu = +-(n + 1/2)
inline deriv_result dW_dkappa_zero_halfint(int n, double x, const series_control& ctl = {}) {
    if (n < 0) throw domain_error("dW_dkappa_zero_halfint: n must be >= 0");
    if (x <= 0.0) throw domain_error("dW_dkappa_zero_halfint: requires x > 0");
    double E1x = e1(x);
    kahan_sum s;
    for (int k = 0; k <= n; ++k)
        s.add(factorial(n + k) * std::pow(x, -k) / (factorial(k) * factorial(n - k)) *
              detail::dkw_inner_bracket(n + k, x, ctl));
    deriv_result r;
    r.case_used = case_family::kappa0;
    r.value = std::sqrt(x / pi) * bessel_k(n + 0.5, 0.5 * x, ctl) *
                  (harmonic(n) + E1x + std::log(x))
            + std::exp(-0.5 * x) * s.value();
    r.err_estimate = 2e-14 * std::abs(r.value) + 1e-15;
    return r;
}

// (DkW_I1) realized through the I1* quadrature
inline deriv_result dW_dkappa_integral_rep(const whittaker_point& p,
                                           const quadrature_control& qctl = {},
                                           const series_control& ctl = {}) {
    double mu = std::abs(p.mu);
    double delta = mu - p.kappa + 0.5;
    if (delta <= 0.0)
        throw domain_error("dW_dkappa_integral_rep: requires mu - kappa + 1/2 > 0");
    double W = whittaker_w({p.kappa, mu, p.x}, w_method::auto_, ctl, qctl).value;
    eval_result i1 = I1_star(p.kappa, mu, p.x, i_route::quadrature, qctl, ctl);
    deriv_result r;
    r.case_used = case_family::generic;
    double pref = std::pow(p.x, mu + 0.5) * std::exp(-0.5 * p.x) * rgamma(delta);
    r.value = digamma_r(delta) * W + pref * i1.value;
    r.err_estimate = std::abs(pref) * i1.err + 1e-13 * std::abs(r.value);
    return r;
}

// ---------------------------------------------------------------------------
// mu side
// ---------------------------------------------------------------------------

// direct differentiation of the Tricomi representation (any mu, signed)
inline deriv_result dW_dmu_series(const whittaker_point& p, const series_control& ctl = {}) {
    if (p.x <= 0.0) throw domain_error("dW_dmu_series: requires x > 0");
    double a = 0.5 - p.kappa + p.mu;
    double b = 1.0 + 2.0 * p.mu;
    double pref = std::pow(p.x, p.mu + 0.5) * std::exp(-0.5 * p.x);
    eval_result u = tricomi_u(a, b, p.x, ctl);
    u_derivs du = u_param_derivs(a, b, p.x, ctl);
    deriv_result r;
    r.case_used = case_family::generic;
    r.value = std::log(p.x) * pref * u.value + pref * (du.dU_da + 2.0 * du.dU_db);
    r.err_estimate = pref * (du.err + u.err * std::abs(std::log(p.x)));
    return r;
}

// kappa = mu + 1/2, evaluated at signed mu (odd in mu)
inline deriv_result dW_dmu_theorem(double mu, double x, const series_control& ctl = {}) {
    if (x <= 0.0) throw domain_error("dW_dmu_theorem: requires x > 0");
    double mua = std::abs(mu);
    if (mua == 0.0) {
        deriv_result r;
        r.case_used = case_family::kappa_equals_mu_plus_half;
        return r;
    }
    if (near_integer(2.0 * mua, 1e-12))
        throw pole_error("dW_dmu_theorem: requires 2 mu not integer");
    cplx v = std::pow(x, mua) * (x / (2.0 * mua + 1.0) * hyp2f2(1, 1, 2.0 * mua + 2.0, 2.0, x, ctl)
                                 - digamma_r(-2.0 * mua) + std::log(x))
           - gamma_r(2.0 * mua + 1.0) * std::pow(x, -mua) * pow_minus(x, 2.0 * mua) *
                 lower_gamma(-2.0 * mua, neg_real(x), ctl);
    v *= std::sqrt(x) * std::exp(-0.5 * x);
    deriv_result r = detail::make_real_result(v, case_family::kappa_equals_mu_plus_half);
    if (mu < 0.0) r.value = -r.value;
    return r;
}

// kappa = 1/2 - mu, evaluated at signed mu
inline deriv_result dW_dmu_half_minus_mu(double mu, double x, const series_control& ctl = {}) {
    if (x <= 0.0) throw domain_error("dW_dmu_half_minus_mu: requires x > 0");
    if (is_nonpositive_integer(2.0 * mu, 1e-12))
        throw pole_error("dW_dmu_half_minus_mu: -2 mu must not be 0,1,2,...");
    cplx brace = x / (2.0 * mu) * pfq(hyp_params({1, 1}, {2.0, 1.0 + 2.0 * mu}, cplx(-x, 0.0)), ctl).value
               + std::polar(1.0, -2.0 * pi * mu) * upper_gamma_any(1.0 - 2.0 * mu, x, ctl) *
                     lower_gamma(2.0 * mu, neg_real(x), ctl)
               + digamma_r(2.0 * mu) - std::log(x);
    cplx v = std::pow(x, 0.5 - mu) * std::exp(-0.5 * x) * brace;
    deriv_result r = detail::make_real_result(v, case_family::kappa_equals_half_minus_mu);
    if (!is_nonpositive_integer(2.0 - 2.0 * mu, 1e-12) && std::abs(2.0 * mu - 1.0) > 1e-12) {
        cplx brace2 = pi * (cotpi(2.0 * mu) - cplx(0.0, 1.0)) * rgamma(2.0 * mu) *
                          lower_gamma(2.0 * mu, neg_real(x), ctl)
                    + x / (2.0 * mu - 1.0) * hyp2f2(1, 1, 2.0, 2.0 - 2.0 * mu, x, ctl)
                    + digamma_r(2.0 * mu) - std::log(x);
        double alt = (std::pow(x, 0.5 - mu) * std::exp(-0.5 * x) * brace2).real();
        r.err_estimate = std::max(r.err_estimate, std::abs(alt - r.value));
    }
    return r;
}

inline double dW_dmu_half_minus_mu_alt(double mu, double x, const series_control& ctl = {}) {
    if (is_nonpositive_integer(2.0 * mu, 1e-12) || is_nonpositive_integer(2.0 - 2.0 * mu, 1e-12) ||
        std::abs(2.0 * mu - 1.0) <= 1e-12)
        throw pole_error("dW_dmu_half_minus_mu_alt: parameter on an excluded lattice");
    cplx brace2 = pi * (cotpi(2.0 * mu) - cplx(0.0, 1.0)) * rgamma(2.0 * mu) *
                      lower_gamma(2.0 * mu, neg_real(x), ctl)
                + x / (2.0 * mu - 1.0) * hyp2f2(1, 1, 2.0, 2.0 - 2.0 * mu, x, ctl)
                + digamma_r(2.0 * mu) - std::log(x);
    return (std::pow(x, 0.5 - mu) * std::exp(-0.5 * x) * brace2).real();
}

// kappa = (1+m)/2, mu = +m/2 branch (odd in mu; m = 0 gives 0)
inline deriv_result dW_dmu_integer_family(int m, double x,
                                          family_variant variant = family_variant::limit,
                                          const series_control& ctl = {}) {
    if (m < 0) throw domain_error("dW_dmu_integer_family: m must be >= 0");
    if (x <= 0.0) throw domain_error("dW_dmu_integer_family: requires x > 0");
    kahan_sum s;
    if (variant == family_variant::limit) {
        for (int k = 1; k <= m; ++k)
            s.add(std::pow(x, -k) *
                  (std::exp(x) * factorial(k - 1) + binomial(m, k) * lower_gamma_negx_int(k, x, ctl)));
    } else {
        for (int k = 1; k <= m; ++k)
            s.add(factorial(m) * std::pow(x, -k) / (k * factorial(m - k)));
    }
    deriv_result r;
    r.case_used = case_family::mu_half_integer;
    r.value = std::exp(-0.5 * x) * std::pow(x, 0.5 * (1.0 + m)) * s.value();
    r.err_estimate = 4e-15 * std::abs(r.value) + 1e-15 * std::exp(0.5 * x) * std::pow(x, 0.5 * (1.0 - m));
    return r;
}

// kappa = n/2, mu = +(n+1)/2 branch
inline deriv_result dW_dmu_n_half_family(int n, double x, const series_control& ctl = {}) {
    if (n < 0) throw domain_error("dW_dmu_n_half_family: n must be >= 0");
    if (x <= 0.0) throw domain_error("dW_dmu_n_half_family: requires x > 0");
    kahan_sum s;
    for (int k = 0; k <= n; ++k)
        s.add(std::pow(x, -k) / factorial(n - k) * detail::dmw_inner_bracket(k, x, ctl));
    deriv_result r;
    r.case_used = case_family::upper_gamma_family;
    r.value = std::pow(x, -0.5 * n) * std::exp(0.5 * x) * e1(x) * upper_gamma(n + 1.0, x)
            + factorial(n) * std::pow(x, 0.5 * n) * std::exp(-0.5 * x) * s.value();
    r.err_estimate = 2e-14 * std::abs(r.value) + 1e-15;
    return r;
}

// kappa = 0, mu = +(n + 1/2) branch
inline deriv_result dW_dmu_zero_halfint(int n, double x, const series_control& ctl = {}) {
    if (n < 0) throw domain_error("dW_dmu_zero_halfint: n must be >= 0");
    if (x <= 0.0) throw domain_error("dW_dmu_zero_halfint: requires x > 0");
    kahan_sum s;
    for (int k = 0; k <= n; ++k)
        s.add(factorial(n + k) * std::pow(x, -k) / (factorial(k) * factorial(n - k)) *
              detail::dmw_inner_bracket(n + k, x, ctl));
    deriv_result r;
    r.case_used = case_family::kappa0;
    r.value = std::sqrt(x / pi) * bessel_k(n + 0.5, 0.5 * x, ctl) * (e1(x) - harmonic(n))
            + std::exp(-0.5 * x) * s.value();
    r.err_estimate = 2e-14 * std::abs(r.value) + 1e-15;
    return r;
}

// (DmW_I*3) realized through the I3* quadrature
inline deriv_result dW_dmu_integral_rep(const whittaker_point& p,
                                        const quadrature_control& qctl = {},
                                        const series_control& ctl = {}) {
    double mu = std::abs(p.mu);
    double delta = mu - p.kappa + 0.5;
    if (delta <= 0.0)
        throw domain_error("dW_dmu_integral_rep: requires mu - kappa + 1/2 > 0");
    double W = whittaker_w({p.kappa, mu, p.x}, w_method::auto_, ctl, qctl).value;
    eval_result i3 = I3_star(p.kappa, mu, p.x, i_route::quadrature, qctl, ctl);
    deriv_result r;
    r.case_used = case_family::generic;
    double pref = std::pow(p.x, mu + 0.5) * std::exp(-0.5 * p.x) * rgamma(delta);
    r.value = (std::log(p.x) - digamma_r(delta)) * W + pref * i3.value;
    r.err_estimate = std::abs(pref) * i3.err + 1e-13 * std::abs(r.value);
    if (p.mu < 0.0) r.value = -r.value;
    return r;
}

// ---------------------------------------------------------------------------
// Macdonald-function order derivative
// ---------------------------------------------------------------------------

// dK_nu/dnu by the 3F4/2F3 combination; falls back to central differences
// with Richardson when 2 nu is an integer (flagged)
inline eval_result dK_dnu(double nu, double x, const series_control& ctl = {}) {
    if (x <= 0.0) throw domain_error("dK_dnu: requires x > 0");
    if (nu < 0.0) throw domain_error("dK_dnu: requires nu >= 0");
    eval_result r;
    if (nu == 0.0) {
        // K is even in the order
        r.method = method_tag::closed_form;
        r.value = 0.0;
        return r;
    }
    if (int_distance(2.0 * nu) < 1e-6) {
        auto f = [&](double n) { return bessel_k(n, x, ctl); };
        eval_result fd = fd_param_derivative(f, nu, fd_spec(1e-3, fd_stencil::central4, 1));
        fd.flags |= flag_fd_fallback;
        fd.method = method_tag::finite_difference;
        return fd;
    }
    double x2 = x * x;
    double Ip = bessel_i(nu, x, ctl);
    double Im = bessel_i(-nu, x, ctl);
    double f34 = pfq(hyp_params({1.0, 1.0, 1.5}, {2.0, 2.0, 2.0 - nu, 2.0 + nu}, cplx(x2, 0.0)), ctl)
                     .value.real();
    double t1 = 0.5 * pi / sinpi(nu) *
                (pi * cotpi(nu) * Ip -
                 (Ip + Im) * (x2 / (4.0 * (1.0 - nu * nu)) * f34 + std::log(0.5 * x) -
                              digamma_r(nu) - 0.5 / nu));
    double f23p = pfq(hyp_params({nu, 0.5 + nu}, {1.0 + nu, 1.0 + nu, 1.0 + 2.0 * nu}, cplx(x2, 0.0)), ctl)
                      .value.real();
    double f23m = pfq(hyp_params({-nu, 0.5 - nu}, {1.0 - nu, 1.0 - nu, 1.0 - 2.0 * nu}, cplx(x2, 0.0)), ctl)
                      .value.real();
    double g2p = gamma_r(nu), g2m = gamma_r(-nu);
    double t2 = 0.25 * (Im * g2m * g2m * std::pow(0.5 * x, 2.0 * nu) * f23p -
                        Ip * g2p * g2p * std::pow(0.5 * x, -2.0 * nu) * f23m);
    r.method = method_tag::hypergeometric;
    r.value = t1 + t2;
    r.err = 1e-12 * (std::abs(t1) + std::abs(t2));
    return r;
}

// kappa = 0: dW/dmu = sgn(mu) sqrt(x/pi) dK/dnu at |mu|, argument x/2
inline deriv_result dW_dmu_bessel(double mu, double x, const series_control& ctl = {}) {
    if (x <= 0.0) throw domain_error("dW_dmu_bessel: requires x > 0");
    deriv_result r;
    r.case_used = case_family::kappa0;
    if (mu == 0.0) return r;
    eval_result dk = dK_dnu(std::abs(mu), 0.5 * x, ctl);
    double sgn = (mu > 0.0) ? 1.0 : -1.0;
    r.value = sgn * std::sqrt(x / pi) * dk.value;
    r.err_estimate = std::sqrt(x / pi) * dk.err;
    r.flags = dk.flags;
    return r;
}

// ---------------------------------------------------------------------------
// FD fallback on W with a route pinned per stencil (keeps the evaluations
// smooth in the differentiated parameter)
// ---------------------------------------------------------------------------

namespace detail {

inline deriv_result dW_fd_fallback(const whittaker_point& p, wrt_param wrt,
                                   const series_control& ctl, const quadrature_control& qctl) {
    double mua = std::abs(p.mu);
    bool on_lattice = int_distance(2.0 * mua) < 1e-4;
    double h = (wrt == wrt_param::mu && on_lattice) ? 1e-3 : 1e-5 * std::max(1.0, std::abs(
                   wrt == wrt_param::kappa ? p.kappa : mua));
    double margin = mua - p.kappa + 0.5;
    w_method route = (margin > 0.1) ? w_method::quadrature : w_method::tricomi;
    std::function<double(double)> f;
    if (wrt == wrt_param::kappa) {
        f = [=](double k) { return whittaker_w({k, mua, p.x}, route, ctl, qctl).value; };
    } else {
        f = [=](double m) { return whittaker_w({p.kappa, std::abs(m), p.x}, route, ctl, qctl).value; };
    }
    eval_result fd = fd_param_derivative(f, wrt == wrt_param::kappa ? p.kappa : mua,
                                         fd_spec(h, fd_stencil::central4, 1));
    deriv_result r;
    r.case_used = classify_case(p.kappa, p.mu).family;
    r.value = fd.value;
    r.err_estimate = fd.err;
    r.flags = flag_fd_fallback;
    if (wrt == wrt_param::mu && p.mu < 0.0) r.value = -r.value;
    return r;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Automatic dispatch
// ---------------------------------------------------------------------------

inline deriv_result dW_auto(const deriv_request& req, const series_control& ctl = {},
                            const quadrature_control& qctl = {}) {
    const whittaker_point& p = req.point;
    if (p.x <= 0.0) throw domain_error("dW_auto: requires x > 0");
    double mua = std::abs(p.mu);
    double sgn_mu = (p.mu < 0.0) ? -1.0 : 1.0;

    auto lattice = [&](double v) { return near_integer(v, 1e-12) ? std::optional<int>(static_cast<int>(std::llround(v))) : std::nullopt; };

    if (req.route == deriv_route::finite_difference)
        return detail::dW_fd_fallback(p, req.wrt, ctl, qctl);

    if (req.wrt == wrt_param::kappa) {
        if (req.route == deriv_route::auto_ || req.route == deriv_route::closed_form) {
            if (std::abs(mua - 0.5) < 1e-12) {
                if (auto n = lattice(p.kappa); n && *n >= 1) return dW_dkappa_laurenzi(*n, p.x);
            }
            if (std::abs(p.kappa) < 1e-12 && mua >= 0.5 - 1e-12) {
                if (auto n = lattice(mua - 0.5)) return dW_dkappa_zero_halfint(*n, p.x, ctl);
            }
            if (auto m = lattice(2.0 * p.kappa - 1.0); m && *m >= 0 && std::abs(mua - 0.5 * *m) < 1e-12)
                return dW_dkappa_integer_family(*m, p.x, family_variant::limit, ctl);
            if (auto n = lattice(2.0 * p.kappa); n && *n >= 0 && std::abs(mua - 0.5 * (*n + 1)) < 1e-12)
                return dW_dkappa_n_half_family(*n, p.x, ctl);
            if (!near_integer(2.0 * mua, 1e-10)) {
                if (std::abs(p.kappa - mua - 0.5) < 1e-12) return dW_dkappa_theorem1(mua, p.x, ctl);
                if (std::abs(p.kappa + mua - 0.5) < 1e-12) return dW_dkappa_half_minus_mu(0.5 - p.kappa, p.x, ctl);
            }
            if (req.route == deriv_route::closed_form)
                throw domain_error("dW_auto: no closed form matches this (kappa, mu)");
        }
        if ((req.route == deriv_route::auto_ || req.route == deriv_route::series) &&
            int_distance(2.0 * mua) >= 1e-4)
            return dW_dkappa_series(p, ctl);
        if (req.route == deriv_route::series)
            throw pole_error("dW_auto: series route too close to the 2 mu lattice");
        if ((req.route == deriv_route::auto_ || req.route == deriv_route::integral_rep) &&
            mua - p.kappa + 0.5 > 0.05)
            return dW_dkappa_integral_rep(p, qctl, ctl);
        if (req.route == deriv_route::integral_rep)
            throw domain_error("dW_auto: integral representation needs mu - kappa + 1/2 > 0");
        return detail::dW_fd_fallback(p, wrt_param::kappa, ctl, qctl);
    }

    // wrt mu
    if (mua == 0.0) {
        // odd in mu
        deriv_result r;
        r.case_used = classify_case(p.kappa, 0.0).family;
        return r;
    }
    if (req.route == deriv_route::auto_ || req.route == deriv_route::closed_form) {
        if (std::abs(p.kappa) < 1e-12) {
            if (auto n = lattice(mua - 0.5); n && *n >= 0) {
                deriv_result r = dW_dmu_zero_halfint(*n, p.x, ctl);
                r.value *= sgn_mu;
                return r;
            }
            deriv_result r = dW_dmu_bessel(p.mu, p.x, ctl);
            if (!(r.flags & flag_fd_fallback) || req.route == deriv_route::auto_) return r;
        }
        if (auto m = lattice(2.0 * p.kappa - 1.0); m && *m >= 0 && std::abs(mua - 0.5 * *m) < 1e-12) {
            deriv_result r = dW_dmu_integer_family(*m, p.x, family_variant::limit, ctl);
            r.value *= sgn_mu;
            return r;
        }
        if (auto n = lattice(2.0 * p.kappa); n && *n >= 0 && std::abs(mua - 0.5 * (*n + 1)) < 1e-12) {
            deriv_result r = dW_dmu_n_half_family(*n, p.x, ctl);
            r.value *= sgn_mu;
            return r;
        }
        if (!near_integer(2.0 * mua, 1e-10)) {
            if (std::abs(p.kappa - mua - 0.5) < 1e-12) return dW_dmu_theorem(p.mu, p.x, ctl);
            if (std::abs(p.kappa + mua - 0.5) < 1e-12) {
                deriv_result r = dW_dmu_half_minus_mu(0.5 - p.kappa, p.x, ctl);
                if (sgn_mu * (0.5 - p.kappa) < 0.0) r.value = -r.value;
                return r;
            }
        }
        if (req.route == deriv_route::closed_form)
            throw domain_error("dW_auto: no closed form matches this (kappa, mu)");
    }
    if ((req.route == deriv_route::auto_ || req.route == deriv_route::series) &&
        int_distance(2.0 * mua) >= 1e-4)
        return dW_dmu_series(p, ctl);
    if (req.route == deriv_route::series)
        return dW_dmu_series(p, ctl);   // Tricomi representation tolerates the lattice
    if ((req.route == deriv_route::auto_ || req.route == deriv_route::integral_rep) &&
        mua - p.kappa + 0.5 > 0.05)
        return dW_dmu_integral_rep(p, qctl, ctl);
    if (req.route == deriv_route::integral_rep)
        throw domain_error("dW_auto: integral representation needs mu - kappa + 1/2 > 0");
    return detail::dW_fd_fallback(p, wrt_param::mu, ctl, qctl);
}

} // namespace wderiv
