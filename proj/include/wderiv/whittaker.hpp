#pragma once

// Whittaker M and W with automatic route dispatch, the Table-5 explicit
// rows, the Laguerre / upper-gamma reduction families, and the integral
// Whittaker functions Wi (from 0) and wi (to infinity).

#include <optional>

#include "wderiv/hyperseries.hpp"
#include "wderiv/quadrature.hpp"
#include "wderiv/scalar.hpp"

namespace wderiv {

// ---------------------------------------------------------------------------
// Case classification (rational snap, denominator <= 12, tolerance 1e-12)
// ---------------------------------------------------------------------------

struct case_info {
    case_family family = case_family::generic;
    int n = -1;          // family index when integral
};

inline case_info classify_case(double kappa, double mu) {
    case_info c;
    double mua = std::abs(mu);
    rational rk, rm;
    bool k_snap = snap_rational(kappa, rk);
    bool m_snap = snap_rational(mua, rm);
    if (k_snap && m_snap) {
        // kappa = mu + 1/2 and its reflection
        if (std::abs(kappa - mua - 0.5) < 1e-12) {
            c.family = case_family::kappa_equals_mu_plus_half;
            return c;
        }
        if (std::abs(kappa + mua - 0.5) < 1e-12) {
            c.family = case_family::kappa_equals_half_minus_mu;
            return c;
        }
        if (std::abs(kappa) < 1e-12) {
            c.family = case_family::kappa0;
            return c;
        }
        double nlag = kappa - mua - 0.5;
        if (nlag > 0.5 && near_integer(nlag)) {
            c.family = case_family::laguerre_family;
            c.n = static_cast<int>(std::llround(nlag));
            return c;
        }
        if (near_integer(2.0 * kappa) && std::abs(mua - (kappa + 0.5)) < 1e-12 && kappa >= -1e-12) {
            c.family = case_family::upper_gamma_family;
            c.n = static_cast<int>(std::llround(2.0 * kappa));
            return c;
        }
    }
    if (near_integer(2.0 * mua, 1e-12)) {
        c.family = case_family::mu_half_integer;
        return c;
    }
    return c;
}

// ---------------------------------------------------------------------------
// M
// ---------------------------------------------------------------------------

inline eval_result whittaker_m(const whittaker_point& p, const series_control& ctl = {}) {
    if (p.x <= 0.0) throw domain_error("whittaker_m: requires x > 0");
    double b = 1.0 + 2.0 * p.mu;
    if (is_nonpositive_integer(b, 1e-13))
        throw pole_error("whittaker_m: 2 mu must not be a negative integer");
    eval_result r;
    r.method = method_tag::series;
    double a = 0.5 + p.mu - p.kappa;
    r.value = std::pow(p.x, p.mu + 0.5) * std::exp(-0.5 * p.x) * kummer_1f1(a, b, p.x, ctl);
    r.err = 4e-16 * std::abs(r.value);
    return r;
}

// ---------------------------------------------------------------------------
// W
// ---------------------------------------------------------------------------

enum class w_method { auto_, combination, tricomi, quadrature };

inline eval_result whittaker_w(const whittaker_point& p, w_method method = w_method::auto_,
                               const series_control& ctl = {},
                               const quadrature_control& qctl = {}) {
    if (p.x <= 0.0) throw domain_error("whittaker_w: requires x > 0");
    const double mu = std::abs(p.mu);  // symmetric in mu by construction
    const double kappa = p.kappa;
    const double x = p.x;

    if (method == w_method::auto_) {
        if (int_distance(2.0 * mu) >= 1e-4) method = w_method::combination;
        else if (mu - kappa + 0.5 <= 0.0) method = w_method::tricomi;
        else method = w_method::quadrature;
    }

    eval_result r;
    switch (method) {
        case w_method::combination: {
            // Gamma(-2mu)/Gamma(1/2-mu-kappa) M_{k,mu} + Gamma(2mu)/Gamma(1/2+mu-kappa) M_{k,-mu}
            double c1 = gamma_r(-2.0 * mu) * rgamma(0.5 - mu - kappa);
            double c2 = gamma_r(2.0 * mu) * rgamma(0.5 + mu - kappa);
            whittaker_point pp = p;
            double t1 = 0.0, t2 = 0.0;
            if (c1 != 0.0) {
                pp.mu = mu;
                t1 = c1 * whittaker_m(pp, ctl).value;
            }
            if (c2 != 0.0) {
                pp.mu = -mu;
                t2 = c2 * whittaker_m(pp, ctl).value;
            }
            r.value = t1 + t2;
            r.err = 1e-15 * (std::abs(t1) + std::abs(t2));
            r.method = method_tag::combination;
            if (std::abs(t1) + std::abs(t2) > 1e6 * std::abs(r.value)) r.flags |= flag_cancellation;
            return r;
        }
        case w_method::tricomi: {
            eval_result u = tricomi_u(0.5 + mu - kappa, 1.0 + 2.0 * mu, x, ctl);
            double pref = std::pow(x, mu + 0.5) * std::exp(-0.5 * x);
            r.value = pref * u.value;
            r.err = pref * u.err;
            r.method = method_tag::tricomi;
            r.flags = u.flags;
            return r;
        }
        case w_method::quadrature: {
            double dk = mu - kappa + 0.5;
            if (dk <= 0.0)
                throw quadrature_failure("whittaker_w: Laplace representation needs mu - kappa + 1/2 > 0");
            auto f = [=](double t) {
                return std::exp(-x * t) * std::pow(t, mu - kappa - 0.5) *
                       std::pow(1.0 + t, mu + kappa - 0.5);
            };
            eval_result q = quad_I(singularity_spec(mu - kappa - 0.5, false), f, qctl);
            double pref = std::pow(x, mu + 0.5) * std::exp(-0.5 * x) * rgamma(dk);
            r.value = pref * q.value;
            r.err = std::abs(pref) * q.err;
            r.method = method_tag::quadrature;
            return r;
        }
        default:
            throw eval_failure("whittaker_w: unresolved method");
    }
}

// ---------------------------------------------------------------------------
// Reduction families
// ---------------------------------------------------------------------------

// W_{kappa+n, kappa-1/2}(x) = (-1)^n n! e^{-x/2} x^kappa L_n^{(2 kappa - 1)}(x)
inline eval_result w_laguerre_family(double kappa, int n, double x) {
    if (x <= 0.0) throw domain_error("w_laguerre_family: requires x > 0");
    if (n < 0) throw domain_error("w_laguerre_family: n must be >= 0");
    eval_result r;
    r.method = method_tag::laguerre_family;
    double sign = (n % 2 == 0) ? 1.0 : -1.0;
    r.value = sign * factorial(n) * std::exp(-0.5 * x) * std::pow(x, kappa) *
              laguerre(n, 2.0 * kappa - 1.0, x);
    r.err = 4e-16 * std::abs(r.value);
    return r;
}

// W_{n/2, (n+1)/2}(x) = x^{-n/2} e^{x/2} Gamma(1+n, x)
inline eval_result w_upper_gamma_family(int n, double x) {
    if (x <= 0.0) throw domain_error("w_upper_gamma_family: requires x > 0");
    if (n < 0) throw domain_error("w_upper_gamma_family: n must be >= 0");
    eval_result r;
    r.method = method_tag::upper_gamma_family;
    r.value = std::pow(x, -0.5 * n) * std::exp(0.5 * x) * upper_gamma(n + 1.0, x);
    r.err = 4e-16 * std::abs(r.value);
    return r;
}

// ---------------------------------------------------------------------------
// Table 5 (explicit elementary/Bessel rows)
// ---------------------------------------------------------------------------

struct table5_row {
    const char* kappa_txt;
    const char* mu_txt;
    double kappa;
    double mu;
    double (*fn)(double);
};

namespace detail {

inline double t5_bk(double nu, double x) { return bessel_k(nu, 0.5 * x); }

} // namespace detail

inline const std::vector<table5_row>& table5_rows() {
    using detail::t5_bk;
    static const std::vector<table5_row> rows = {
        {"-1/4", "1/4", -0.25, 0.25, +[](double x) { return sqrt_pi * std::exp(0.5 * x) * std::pow(x, 0.25) * std::erfc(std::sqrt(x)); }},
        {"-1/2", "1/2", -0.5, 0.5, +[](double x) { return x / sqrt_pi * (t5_bk(1, x) - t5_bk(0, x)); }},
        {"-1/2", "1/6", -0.5, 1.0 / 6.0, +[](double x) { return 3.0 * x / sqrt_pi * (t5_bk(2.0 / 3.0, x) - t5_bk(1.0 / 3.0, x)); }},
        {"-1/2", "1", -0.5, 1.0, +[](double x) { return std::exp(-0.5 * x) / std::sqrt(x); }},
        {"0", "0", 0.0, 0.0, +[](double x) { return std::sqrt(x / pi) * t5_bk(0, x); }},
        {"0", "1/2", 0.0, 0.5, +[](double x) { return std::exp(-0.5 * x); }},
        {"0", "1", 0.0, 1.0, +[](double x) { return std::sqrt(x / pi) * t5_bk(1, x); }},
        {"0", "3/2", 0.0, 1.5, +[](double x) { return std::exp(-0.5 * x) * (x + 2.0) / x; }},
        {"0", "5/2", 0.0, 2.5, +[](double x) { return std::exp(-0.5 * x) * (x * x + 6.0 * x + 12.0) / (x * x); }},
        {"1/4", "1/4", 0.25, 0.25, +[](double x) { return std::pow(x, 0.25) * std::exp(-0.5 * x); }},
        {"1/2", "1/6", 0.5, 1.0 / 6.0, +[](double x) { return 0.5 * x / sqrt_pi * (t5_bk(1.0 / 3.0, x) + t5_bk(2.0 / 3.0, x)); }},
        {"1/2", "1/4", 0.5, 0.25, +[](double x) { return 0.5 * x / sqrt_pi * (t5_bk(0.25, x) + t5_bk(0.75, x)); }},
        {"1/2", "1/2", 0.5, 0.5, +[](double x) { return 0.5 * x / sqrt_pi * (t5_bk(0, x) + t5_bk(1, x)); }},
        {"1/2", "1", 0.5, 1.0, +[](double x) { return std::exp(-0.5 * x) * (x + 1.0) / std::sqrt(x); }},
        {"1/2", "2", 0.5, 2.0, +[](double x) { return std::exp(-0.5 * x) * (x * x + 4.0 * x + 6.0) / std::pow(x, 1.5); }},
        {"1", "3/2", 1.0, 1.5, +[](double x) { return std::exp(-0.5 * x) * (x * x + 2.0 * x + 2.0) / x; }},
        {"1", "1", 1.0, 1.0, +[](double x) { return 0.5 * std::sqrt(x / pi) * (x * t5_bk(0, x) + (x + 1.0) * t5_bk(1, x)); }},
        {"1", "2", 1.0, 2.0, +[](double x) { return 0.5 / std::sqrt(pi * x) * (x * (x + 3.0) * t5_bk(0, x) + (x * x + 4.0 * x + 12.0) * t5_bk(1, x)); }},
        {"2", "2", 2.0, 2.0, +[](double x) { return 0.25 / std::sqrt(pi * x) * (x * (2.0 * x * x + 2.0 * x + 3.0) * t5_bk(0, x) + 2.0 * (x * x * x + 2.0 * x * x + 4.0 * x + 6.0) * t5_bk(1, x)); }},
    };
    return rows;
}

inline std::optional<eval_result> table5_lookup(const whittaker_point& p) {
    double mua = std::abs(p.mu);
    for (const auto& row : table5_rows()) {
        if (std::abs(p.kappa - row.kappa) < 1e-12 && std::abs(mua - row.mu) < 1e-12) {
            eval_result r;
            r.method = method_tag::table5;
            r.value = row.fn(p.x);
            r.err = 4e-16 * std::abs(r.value);
            return r;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Integral Whittaker functions
// ---------------------------------------------------------------------------

namespace detail {

// does (kappa, |mu|) sit on the Laguerre lattice mu = kappa - n - 1/2?
inline std::optional<int> laguerre_index(double kappa, double mua) {
    double n = kappa - mua - 0.5;
    if (n > -0.5 && near_integer(n, 1e-12)) return static_cast<int>(std::llround(n));
    return std::nullopt;
}

} // namespace detail

// Wi_{kappa,mu}(x) = int_0^x W(t)/t dt; closed form on the Laguerre lattice,
// else quadrature with an integrability check (W/t ~ t^{-1/2-mu} at 0)
inline eval_result wi_lower(const whittaker_point& p, const series_control& ctl = {},
                            const quadrature_control& qctl = {}) {
    if (p.x <= 0.0) throw domain_error("wi_lower: requires x > 0");
    double mua = std::abs(p.mu);
    if (auto n = detail::laguerre_index(p.kappa, mua)) {
        // Wi_{k0+n, k0-1/2} = (-1)^n (2k0)_n 2^{k0} sum_m C(n,m)(-2)^m/(2k0)_m gamma(k0+m, x/2)
        double k0 = mua + 0.5;
        eval_result r;
        r.method = method_tag::laguerre_family;
        kahan_sum s;
        for (int m = 0; m <= *n; ++m)
            s.add(binomial(*n, m) * std::pow(-2.0, m) / pochhammer(2.0 * k0, m) *
                  lower_gamma_r(k0 + m, 0.5 * p.x, ctl));
        double sign = (*n % 2 == 0) ? 1.0 : -1.0;
        r.value = sign * pochhammer(2.0 * k0, *n) * std::pow(2.0, k0) * s.value();
        r.err = 1e-14 * std::abs(r.value);
        return r;
    }
    if (mua >= 0.5 - 1e-12)
        throw divergent_integral("wi_lower: integrand ~ t^{-1/2-mu} is not integrable at 0");
    auto f = [&](double t) {
        return whittaker_w({p.kappa, mua, t}, w_method::auto_, ctl).value / t;
    };
    // split at min(x,1); the t^{mu-1/2}-type endpoint weight is absorbed by
    // the tanh-sinh transform
    double split = std::min(p.x, qctl.split);
    eval_result a = quad_finite(f, 0.0, split, qctl);
    eval_result r = a;
    if (split < p.x) {
        eval_result b = quad_finite(f, split, p.x, qctl);
        r.value += b.value;
        r.err += b.err;
    }
    r.method = method_tag::quadrature;
    return r;
}

// wi_{kappa,mu}(x) = int_x^inf W(t)/t dt; closed forms on the Laguerre
// lattice and at (0, n+1/2), else tail quadrature
inline eval_result wi_upper(const whittaker_point& p, const series_control& ctl = {},
                            const quadrature_control& qctl = {}) {
    if (p.x <= 0.0) throw domain_error("wi_upper: requires x > 0");
    double mua = std::abs(p.mu);
    if (auto n = detail::laguerre_index(p.kappa, mua)) {
        double k0 = mua + 0.5;
        eval_result r;
        r.method = method_tag::laguerre_family;
        kahan_sum s;
        for (int m = 0; m <= *n; ++m)
            s.add(binomial(*n, m) * std::pow(-2.0, m) / pochhammer(2.0 * k0, m) *
                  upper_gamma(k0 + m, 0.5 * p.x, ctl));
        double sign = (*n % 2 == 0) ? 1.0 : -1.0;
        r.value = sign * pochhammer(2.0 * k0, *n) * std::pow(2.0, k0) * s.value();
        r.err = 1e-14 * std::abs(r.value);
        return r;
    }
    if (std::abs(p.kappa) < 1e-12 && near_integer(mua - 0.5, 1e-12) && mua > 0.0) {
        // wi_{0,n+1/2}(x) = sum_k (n+k)! 2^{-k} / (k!(n-k)!) Gamma(-k, x/2)
        int n = static_cast<int>(std::llround(mua - 0.5));
        eval_result r;
        r.method = method_tag::closed_form;
        kahan_sum s;
        for (int k = 0; k <= n; ++k)
            s.add(factorial(n + k) * std::pow(2.0, -k) / (factorial(k) * factorial(n - k)) *
                  upper_gamma_neg_order_r(k, 0.5 * p.x));
        r.value = s.value();
        r.err = 1e-14 * std::abs(r.value);
        return r;
    }
    auto f = [&](double t) {
        if (0.5 * t - p.kappa * std::log(std::max(t, 1.0)) > 700.0) return 0.0;
        return whittaker_w({p.kappa, mua, t}, w_method::auto_, ctl).value / t;
    };
    eval_result r = quad_tail(f, p.x, qctl);
    r.method = method_tag::quadrature;
    return r;
}

// wi_{kappa,mu}(x) as the single integral
//   1/Gamma(1/2+mu-kappa) int_0^inf t^{mu-kappa-1/2} (1+t)^{mu+kappa-1/2}
//                                  (1/2+t)^{-mu-1/2} Gamma(1/2+mu, x(t+1/2)) dt
inline eval_result wi_upper_integral_rep(const whittaker_point& p,
                                         const quadrature_control& qctl = {},
                                         const series_control& ctl = {}) {
    if (p.x <= 0.0) throw domain_error("wi_upper_integral_rep: requires x > 0");
    double mu = p.mu, kappa = p.kappa, x = p.x;
    double dk = 0.5 + mu - kappa;
    if (dk <= 0.0)
        throw domain_error("wi_upper_integral_rep: requires 1/2 + mu - kappa > 0");
    auto f = [=](double t) {
        if (x * (t + 0.5) - (2.0 * std::abs(mu) + 2.0) * std::log(std::max(t, 2.0)) > 700.0) return 0.0;
        return std::pow(t, mu - kappa - 0.5) * std::pow(1.0 + t, mu + kappa - 0.5) *
               std::pow(0.5 + t, -mu - 0.5) * upper_gamma(0.5 + mu, x * (t + 0.5), ctl);
    };
    eval_result q = quad_I(singularity_spec(mu - kappa - 0.5, false), f, qctl);
    eval_result r;
    r.method = method_tag::integral_rep;
    double pref = rgamma(dk);
    r.value = pref * q.value;
    r.err = pref * q.err;
    return r;
}

// d wi / d kappa by the differentiated integral representation
inline eval_result wi_upper_dkappa(const whittaker_point& p,
                                   const quadrature_control& qctl = {},
                                   const series_control& ctl = {}) {
    if (p.x <= 0.0) throw domain_error("wi_upper_dkappa: requires x > 0");
    double mu = p.mu, kappa = p.kappa, x = p.x;
    double dk = 0.5 + mu - kappa;
    if (dk <= 0.0)
        throw domain_error("wi_upper_dkappa: requires 1/2 + mu - kappa > 0");
    double psi_dk = digamma_r(dk);
    auto f = [=](double t) {
        if (x * (t + 0.5) - (2.0 * std::abs(mu) + 2.0) * std::log(std::max(t, 2.0)) > 700.0) return 0.0;
        return (psi_dk + std::log((1.0 + t) / t)) *
               std::pow(t, mu - kappa - 0.5) * std::pow(1.0 + t, mu + kappa - 0.5) *
               std::pow(0.5 + t, -mu - 0.5) * upper_gamma(0.5 + mu, x * (t + 0.5), ctl);
    };
    eval_result q = quad_I(singularity_spec(mu - kappa - 0.5, true), f, qctl);
    eval_result r;
    r.method = method_tag::integral_rep;
    double pref = rgamma(dk);
    r.value = pref * q.value;
    r.err = pref * q.err;
    return r;
}

} // namespace wderiv
