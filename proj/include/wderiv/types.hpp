#pragma once

#include <complex>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace wderiv {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;
inline constexpr double sqrt_pi = 1.77245385090551602729816748334114518;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct pole_error : error { using error::error; };
struct non_convergence : error { using error::error; };
struct domain_error : error { using error::error; };
struct quadrature_failure : error { using error::error; };
struct divergent_integral : error { using error::error; };
struct overflow_error : error { using error::error; };
struct eval_failure : error { using error::error; };
struct step_collapse : error { using error::error; };

// ---------------------------------------------------------------------------
// Controls
// ---------------------------------------------------------------------------

struct series_control {
    double rel_tol = 1e-13;
    double abs_floor = 1e-300;
    int max_terms = 10000;
};

struct quadrature_control {
    double target_tol = 1e-10;
    int max_level = 12;
    double split = 1.0;
};

struct whittaker_point {
    double kappa = 0.0;
    double mu = 0.0;
    double x = 1.0;   // strictly positive
};

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

enum class method_tag : std::uint8_t {
    none,
    combination,      // two-M linear combination
    tricomi,          // e^{-x/2} x^{mu+1/2} U(a,b,x)
    quadrature,       // Laplace-transform integral
    bessel_rep,       // Bessel-kernel integral
    table5,           // explicit elementary/Bessel row
    laguerre_family,  // W_{kappa+n,kappa-1/2}
    upper_gamma_family, // W_{n/2,(n+1)/2}
    closed_form,
    series,
    integral_rep,
    finite_difference,
    hypergeometric,
};

inline const char* to_string(method_tag m) {
    switch (m) {
        case method_tag::none: return "none";
        case method_tag::combination: return "combination";
        case method_tag::tricomi: return "tricomi";
        case method_tag::quadrature: return "quadrature";
        case method_tag::bessel_rep: return "bessel-rep";
        case method_tag::table5: return "table5";
        case method_tag::laguerre_family: return "laguerre-family";
        case method_tag::upper_gamma_family: return "upper-gamma-family";
        case method_tag::closed_form: return "closed-form";
        case method_tag::series: return "series";
        case method_tag::integral_rep: return "integral-rep";
        case method_tag::finite_difference: return "finite-difference";
        case method_tag::hypergeometric: return "hypergeometric";
    }
    return "?";
}

// diagnostic flags
enum : unsigned {
    flag_imag_discarded   = 1u << 0,  // imaginary residual discarded
    flag_cancellation     = 1u << 1,
    flag_fd_fallback      = 1u << 2,
    flag_disagreement     = 1u << 3,  // cross-route residual above budget
    flag_imag_residual_big = 1u << 4, // residual exceeded 1e-8 * max(1,|value|)
};

struct eval_result {
    double value = 0.0;
    double err = 0.0;             // absolute error estimate
    method_tag method = method_tag::none;
    double imag_residual = 0.0;
    unsigned flags = 0;
};

struct series_result {
    cplx value{0.0, 0.0};
    int terms_used = 0;
    double tail_bound = 0.0;
};

enum class case_family : std::uint8_t {
    generic,
    mu_half_integer,          // 2mu in Z
    kappa_equals_mu_plus_half,
    kappa_equals_half_minus_mu,
    kappa0,
    table5_row,
    laguerre_family,
    upper_gamma_family,
};

inline const char* to_string(case_family c) {
    switch (c) {
        case case_family::generic: return "generic";
        case case_family::mu_half_integer: return "mu-half-integer";
        case case_family::kappa_equals_mu_plus_half: return "kappa=mu+1/2";
        case case_family::kappa_equals_half_minus_mu: return "kappa=1/2-mu";
        case case_family::kappa0: return "kappa=0";
        case case_family::table5_row: return "table5-row";
        case case_family::laguerre_family: return "laguerre-family";
        case case_family::upper_gamma_family: return "upper-gamma-family";
    }
    return "?";
}

struct deriv_result {
    double value = 0.0;
    double err_estimate = 0.0;
    case_family case_used = case_family::generic;
    double imag_residual = 0.0;
    unsigned flags = 0;
};

// ---------------------------------------------------------------------------
// Complex helpers.  Branch convention everywhere: arg(-x) = +pi for x > 0,
// so (-x)^p = x^p e^{i pi p}.
// ---------------------------------------------------------------------------

// (-x)^p for x > 0 on the principal branch with arg = +pi
inline cplx pow_minus(double x, double p) {
    return std::polar(std::pow(x, p), pi * p);
}

inline cplx neg_real(double x) { return cplx(-x, 0.0); }

// take the real part, recording the discarded imaginary residual
inline double take_real(cplx z, double* residual) {
    if (residual) *residual = std::abs(z.imag());
    return z.real();
}

inline bool is_finite(cplx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Kahan compensated accumulator
struct kahan_sum {
    double s = 0.0, c = 0.0;
    void add(double v) {
        double y = v - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double value() const { return s; }
};

// distance from v to the nearest integer
inline double int_distance(double v) {
    return std::abs(v - std::round(v));
}

inline bool near_integer(double v, double tol = 1e-12) {
    return int_distance(v) <= tol;
}

// try to snap v to a small rational p/q with q <= maxden (used by case
// classification; ambiguous values stay generic)
struct rational {
    long long num = 0;
    long long den = 1;
};

inline bool snap_rational(double v, rational& out, int maxden = 12, double tol = 1e-12) {
    for (int q = 1; q <= maxden; ++q) {
        double p = v * q;
        if (int_distance(p) <= tol * q && std::abs(p) < 1e15) {
            long long pi_ = static_cast<long long>(std::llround(p));
            long long g = std::gcd(std::abs(pi_) > 0 ? std::abs(pi_) : 1LL, static_cast<long long>(q));
            out.num = pi_ / g;
            out.den = q / g;
            return true;
        }
    }
    return false;
}

} // namespace wderiv
