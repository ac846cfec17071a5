#pragma once

// The logarithmic Laplace integrals I1*..I4*, the Laplace-transform lemma
// family I_{+-}(nu,x), the Bessel-kernel integral H(kappa,mu;x), and the
// Bessel-kernel representation of W used as an independent fourth route.

#include "wderiv/hyperseries.hpp"
#include "wderiv/quadrature.hpp"
#include "wderiv/scalar.hpp"
#include "wderiv/whittaker.hpp"

namespace wderiv {

enum class i_route { quadrature, closed_form };

// ---------------------------------------------------------------------------
// Lemma: I_{+-}(nu, x) = int_0^inf e^{-xt} t^nu ln(t^{+-1}(1+t)) dt
//   = Gamma(nu+1)/x^{nu+1} { x/(nu+1) 2F2(1,1;2,2+nu;-x)
//       - e^{-i pi nu} Gamma(-nu,x) gamma(nu+1,-x) + (1 +- 1)[psi(nu+1) - ln x] }
// ---------------------------------------------------------------------------

inline eval_result lemma_I(int sign, double nu, double x, const series_control& ctl = {}) {
    if (x <= 0.0) throw domain_error("lemma_I: requires x > 0");
    if (nu < 0.0) throw domain_error("lemma_I: requires nu >= 0");
    if (sign != 1 && sign != -1) throw domain_error("lemma_I: sign must be +-1");
    eval_result r;
    r.method = method_tag::closed_form;
    double pm = (sign > 0) ? 2.0 : 0.0;
    if (near_integer(nu, 1e-12)) {
        // integer order: Gamma(-m,x) through the E1 expansion, gamma(m+1,-x) real
        int m = static_cast<int>(std::llround(nu));
        double t = x / (m + 1.0) * hyp2f2(1.0, 1.0, 2.0, 2.0 + m, -x, ctl)
                 - ((m % 2 == 0) ? 1.0 : -1.0) * upper_gamma_neg_order_r(m, x) *
                       lower_gamma_negx_int(m + 1, x, ctl)
                 + pm * (digamma_r(m + 1.0) - std::log(x));
        r.value = factorial(m) * std::pow(x, -(m + 1.0)) * t;
        r.err = 1e-13 * std::abs(r.value);
        return r;
    }
    cplx t = x / (nu + 1.0) * pfq(hyp_params({1.0, 1.0}, {2.0, 2.0 + nu}, cplx(-x, 0.0)), ctl).value
           - std::polar(1.0, -pi * nu) * upper_gamma_any(-nu, x, ctl) *
                 lower_gamma(nu + 1.0, neg_real(x), ctl)
           + pm * (digamma_r(nu + 1.0) - std::log(x));
    cplx v = gamma_r(nu + 1.0) * std::pow(x, -(nu + 1.0)) * t;
    r.value = take_real(v, &r.imag_residual);
    if (r.imag_residual > 1e-8 * std::max(1.0, std::abs(r.value))) r.flags |= flag_imag_residual_big;
    r.flags |= flag_imag_discarded;
    r.err = 1e-13 * std::abs(r.value) + r.imag_residual;
    return r;
}

// quadrature realization of the same integral (oracle side of the pair)
inline eval_result lemma_I_quad(int sign, double nu, double x,
                                const quadrature_control& qctl = {}) {
    auto f = [=](double t) {
        double lg = (sign > 0) ? std::log(t * (1.0 + t)) : std::log((1.0 + t) / t);
        return std::exp(-x * t) * std::pow(t, nu) * lg;
    };
    return quad_I(singularity_spec(nu, true), f, qctl);
}

// ---------------------------------------------------------------------------
// I1* / I2*
// ---------------------------------------------------------------------------

inline eval_result I1_star(double kappa, double mu, double x,
                           i_route route = i_route::quadrature,
                           const quadrature_control& qctl = {},
                           const series_control& ctl = {}) {
    if (x <= 0.0) throw domain_error("I1_star: requires x > 0");
    if (mu - kappa <= -0.5) throw domain_error("I1_star: requires mu - kappa > -1/2");
    if (route == i_route::quadrature) {
        auto f = [=](double t) {
            return std::exp(-x * t) * std::pow(t, mu - kappa - 0.5) *
                   std::pow(1.0 + t, mu + kappa - 0.5) * std::log((1.0 + t) / t);
        };
        return quad_I(singularity_spec(mu - kappa - 0.5, true), f, qctl);
    }
    // closed form via the beta-prefactored G1 combination; needs 2mu off Z.
    // Written as Gamma(a)Gamma(-2mu){ [psi(c)/Gamma(c)] M - [1/Gamma(c)](psi(a) M + G1) }
    // with c = 1/2-mu-kappa so the psi(c) pole at nonpositive integer c cancels.
    if (near_integer(2.0 * mu, 1e-10))
        throw pole_error("I1_star closed form: 2 mu on the integer lattice");
    double a = 0.5 + mu - kappa;
    double c = 0.5 - mu - kappa;
    if (is_nonpositive_integer(a))
        throw pole_error("I1_star closed form: Gamma(1/2 + mu - kappa) pole");
    double M = kummer_1f1(a, 1.0 + 2.0 * mu, x, ctl);
    double G1a = g1(a, 1.0 + 2.0 * mu, x, ctl).value.real();
    double t = gamma_r(a) * gamma_r(-2.0 * mu) *
                   (psi_over_gamma(c) * M - rgamma(c) * (digamma_r(a) * M + G1a))
             - gamma_r(2.0 * mu) * std::pow(x, -2.0 * mu) *
                   g1(c, 1.0 - 2.0 * mu, x, ctl).value.real();
    eval_result r;
    r.method = method_tag::closed_form;
    r.value = t;
    r.err = 1e-12 * std::abs(t);
    return r;
}

// I2* = e^{-x} I1*; the quadrature route integrates the (1,inf) form directly
inline eval_result I2_star(double kappa, double mu, double x,
                           i_route route = i_route::quadrature,
                           const quadrature_control& qctl = {},
                           const series_control& ctl = {}) {
    if (x <= 0.0) throw domain_error("I2_star: requires x > 0");
    if (mu - kappa <= -0.5) throw domain_error("I2_star: requires mu - kappa > -1/2");
    if (route == i_route::closed_form) {
        eval_result r = I1_star(kappa, mu, x, i_route::closed_form, qctl, ctl);
        r.value *= std::exp(-x);
        r.err *= std::exp(-x);
        return r;
    }
    // shifted variable s = t - 1 exposes the (t-1)^{mu-kappa-1/2} endpoint
    auto f = [=](double s) {
        double t = 1.0 + s;
        return std::exp(-x * t) * std::pow(t, mu + kappa - 0.5) *
               std::pow(s, mu - kappa - 0.5) * std::log(t / s);
    };
    return quad_I(singularity_spec(mu - kappa - 0.5, true), f, qctl);
}

// ---------------------------------------------------------------------------
// I3* / I4*
// ---------------------------------------------------------------------------

inline eval_result I3_star(double kappa, double mu, double x,
                           i_route route = i_route::quadrature,
                           const quadrature_control& qctl = {},
                           const series_control& ctl = {}) {
    if (x <= 0.0) throw domain_error("I3_star: requires x > 0");
    if (mu - kappa <= -0.5) throw domain_error("I3_star: requires mu - kappa > -1/2");
    if (route == i_route::quadrature) {
        auto f = [=](double t) {
            return std::exp(-x * t) * std::pow(t, mu - kappa - 0.5) *
                   std::pow(1.0 + t, mu + kappa - 0.5) * std::log(t * (1.0 + t));
        };
        return quad_I(singularity_spec(mu - kappa - 0.5, true), f, qctl);
    }
    // Gamma(a){ U psi(a) + Gt + 2 Ht }, a = 1/2 - kappa + mu, b = 1 + 2 mu
    double a = 0.5 - kappa + mu;
    double b = 1.0 + 2.0 * mu;
    eval_result u = tricomi_u(a, b, x, ctl);
    u_derivs du = u_param_derivs(a, b, x, ctl);
    eval_result r;
    r.method = method_tag::closed_form;
    r.value = gamma_r(a) * (u.value * digamma_r(a) + du.dU_da + 2.0 * du.dU_db);
    r.err = std::abs(gamma_r(a)) * (du.err + u.err);
    return r;
}

inline eval_result I4_star(double kappa, double mu, double x,
                           i_route route = i_route::quadrature,
                           const quadrature_control& qctl = {},
                           const series_control& ctl = {}) {
    if (x <= 0.0) throw domain_error("I4_star: requires x > 0");
    if (mu - kappa <= -0.5) throw domain_error("I4_star: requires mu - kappa > -1/2");
    if (route == i_route::closed_form) {
        eval_result r = I3_star(kappa, mu, x, i_route::closed_form, qctl, ctl);
        r.value *= std::exp(-x);
        r.err *= std::exp(-x);
        return r;
    }
    auto f = [=](double s) {
        double t = 1.0 + s;
        return std::exp(-x * t) * std::pow(t, mu + kappa - 0.5) *
               std::pow(s, mu - kappa - 0.5) * std::log(t * s);
    };
    return quad_I(singularity_spec(mu - kappa - 0.5, true), f, qctl);
}

// ---------------------------------------------------------------------------
// Binomial-sum closed forms of I1* on the integer lattices
// ---------------------------------------------------------------------------

// I1*(n/2, (n+1)/2; x)
inline eval_result I1_star_n_family(int n, double x, const series_control& ctl = {}) {
    if (n < 0) throw domain_error("I1_star_n_family: n must be >= 0");
    if (x <= 0.0) throw domain_error("I1_star_n_family: requires x > 0");
    eval_result r;
    r.method = method_tag::closed_form;
    kahan_sum s;
    for (int k = 0; k <= n; ++k) {
        kahan_sum inner;
        double sgn = ((k + 1) % 2 == 0) ? 1.0 : -1.0;
        inner.add(sgn * upper_gamma_neg_order_r(k, x) * lower_gamma_negx_int(k + 1, x, ctl));
        inner.add(-harmonic(k));
        for (int l = 1; l <= k; ++l) {
            double sl = (l % 2 == 0) ? 1.0 : -1.0;   // (-x)^{-l} = (-1)^l x^{-l}
            inner.add(-binomial(k, l) * sl * std::pow(x, -l) * lower_gamma_r(l, x, ctl));
        }
        s.add(std::pow(x, -k - 1.0) / factorial(n - k) * inner.value());
    }
    r.value = std::exp(x) * ein(x) * std::pow(x, -(n + 1.0)) * upper_gamma(n + 1.0, x)
            + factorial(n) * s.value();
    r.err = 1e-12 * std::abs(r.value);
    return r;
}

// I1*(0, n + 1/2; x)
inline eval_result I1_star_zero_halfint(int n, double x, const series_control& ctl = {}) {
    if (n < 0) throw domain_error("I1_star_zero_halfint: n must be >= 0");
    if (x <= 0.0) throw domain_error("I1_star_zero_halfint: requires x > 0");
    eval_result r;
    r.method = method_tag::closed_form;
    kahan_sum s;
    for (int k = 0; k <= n; ++k) {
        kahan_sum inner;
        double sgn = ((n + k + 1) % 2 == 0) ? 1.0 : -1.0;
        inner.add(sgn * upper_gamma_neg_order_r(n + k, x) * lower_gamma_negx_int(n + k + 1, x, ctl));
        inner.add(-harmonic(n + k));
        for (int l = 1; l <= n + k; ++l) {
            double sl = (l % 2 == 0) ? 1.0 : -1.0;
            inner.add(-binomial(n + k, l) * sl * std::pow(x, -l) * lower_gamma_r(l, x, ctl));
        }
        s.add(binomial(n, k) * factorial(n + k) * std::pow(x, -(n + k + 1.0)) * inner.value());
    }
    r.value = factorial(n) * std::exp(0.5 * x) / (sqrt_pi * std::pow(x, n + 0.5)) *
                  bessel_k(n + 0.5, 0.5 * x, ctl) * ein(x)
            + s.value();
    r.err = 1e-12 * std::abs(r.value);
    return r;
}

// ---------------------------------------------------------------------------
// Bessel-kernel integrals
// ---------------------------------------------------------------------------

enum class h_route { quadrature, via_i1 };

// H(kappa, mu; x) = int_0^inf e^{-t} t^{-kappa-1/2} K_{2mu}(2 sqrt(xt)) ln t dt
// for |mu| < 1/2 - kappa.  The u = sqrt(t) substitution makes the kernel
// argument linear and turns the weight into u^{-2 kappa}, ln t into 2 ln u.
inline eval_result H_bessel(double kappa, double mu, double x,
                            h_route route = h_route::quadrature,
                            const quadrature_control& qctl = {},
                            const series_control& ctl = {}) {
    if (x <= 0.0) throw domain_error("H_bessel: requires x > 0");
    if (std::abs(mu) >= 0.5 - kappa)
        throw domain_error("H_bessel: requires |mu| < 1/2 - kappa");
    if (route == h_route::quadrature) {
        double sx = 2.0 * std::sqrt(x);
        auto f = [=](double u) {
            if (u >= 26.0) return 0.0;   // e^{-u^2} below every target already
            return 4.0 * std::exp(-u * u) * std::pow(u, -2.0 * kappa) *
                   bessel_k(2.0 * std::abs(mu), sx * u, ctl) * std::log(u);
        };
        return quad_I(singularity_spec(-2.0 * kappa - 2.0 * std::abs(mu), true), f, qctl);
    }
    // via I1*: H = 1/2 Gamma(1/2-mu-kappa) { Gamma(1/2+mu-kappa) psi(1/2-mu-kappa)
    //               W / (sqrt(x) e^{-x/2}) - x^mu I1* }
    double W = whittaker_w({kappa, mu, x}, w_method::auto_, ctl, qctl).value;
    eval_result i1 = I1_star(kappa, mu, x, i_route::quadrature, qctl, ctl);
    eval_result r;
    r.method = method_tag::closed_form;
    r.value = 0.5 * gamma_r(0.5 - mu - kappa) *
              (gamma_r(0.5 + mu - kappa) * digamma_r(0.5 - mu - kappa) * W /
                   (std::sqrt(x) * std::exp(-0.5 * x))
               - std::pow(x, mu) * i1.value);
    r.err = 0.5 * std::abs(gamma_r(0.5 - mu - kappa)) * std::pow(x, mu) * i1.err
          + 1e-12 * std::abs(r.value);
    return r;
}

// Bessel-kernel representation of W itself: an independent fourth route
inline eval_result bessel_rep_W(double kappa, double mu, double x,
                                const quadrature_control& qctl = {},
                                const series_control& ctl = {}) {
    if (x <= 0.0) throw domain_error("bessel_rep_W: requires x > 0");
    mu = std::abs(mu);
    if (0.5 + mu - kappa <= 0.0 || 0.5 - mu - kappa <= 0.0)
        throw domain_error("bessel_rep_W: requires 1/2 +- mu - kappa > 0");
    double sx = 2.0 * std::sqrt(x);
    auto f = [=](double u) {
        if (u >= 26.0) return 0.0;
        return 2.0 * std::exp(-u * u) * std::pow(u, -2.0 * kappa) *
               bessel_k(2.0 * mu, sx * u, ctl);
    };
    eval_result q = quad_I(singularity_spec(-2.0 * kappa - 2.0 * mu, false), f, qctl);
    eval_result r;
    r.method = method_tag::bessel_rep;
    double pref = 2.0 * std::sqrt(x) * std::exp(-0.5 * x) *
                  rgamma(0.5 + mu - kappa) * rgamma(0.5 - mu - kappa);
    r.value = pref * q.value;
    r.err = std::abs(pref) * q.err;
    return r;
}

} // namespace wderiv
