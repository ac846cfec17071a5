#pragma once

// Independent reference engines: finite-difference parameter derivatives,
// naive brute-force series summation (no recurrence reuse), and comparison
// utilities used by the verification suites.

#include <functional>
#include <string>
#include <vector>

#include "wderiv/types.hpp"

namespace wderiv {

enum class fd_stencil { central2, central4 };

struct fd_spec {
    double step = 0.0;                 // 0: auto, 1e-5 * max(1, |at|)
    fd_stencil stencil = fd_stencil::central4;
    int richardson_levels = 1;         // 0, 1 or 2

    fd_spec() = default;
    fd_spec(double h, fd_stencil s, int rich) : step(h), stencil(s), richardson_levels(rich) {
        if (rich < 0 || rich > 2) throw domain_error("fd_spec: richardson_levels in {0,1,2}");
        if (h < 0.0) throw domain_error("fd_spec: step must be > 0");
    }
};

inline eval_result fd_param_derivative(const std::function<double(double)>& f, double at,
                                       const fd_spec& spec = {}) {
    double h = spec.step > 0.0 ? spec.step : 1e-5 * std::max(1.0, std::abs(at));
    auto stencil_eval = [&](double hh) {
        try {
            if (spec.stencil == fd_stencil::central2)
                return (f(at + hh) - f(at - hh)) / (2.0 * hh);
            return (8.0 * (f(at + hh) - f(at - hh)) - (f(at + 2.0 * hh) - f(at - 2.0 * hh))) /
                   (12.0 * hh);
        } catch (const error& e) {
            throw eval_failure(std::string("fd_param_derivative: inner evaluation failed: ") + e.what());
        }
    };
    int order = (spec.stencil == fd_stencil::central2) ? 2 : 4;
    double cur = stencil_eval(h);
    eval_result r;
    r.method = method_tag::finite_difference;
    if (spec.richardson_levels == 0) {
        r.value = cur;
        r.err = std::abs(cur) * 1e-9 + 1e-12;
        return r;
    }
    double prev = cur;
    double pow2 = std::pow(2.0, order);
    for (int level = 1; level <= spec.richardson_levels; ++level) {
        double fine = stencil_eval(h / std::pow(2.0, level));
        cur = (pow2 * fine - prev) / (pow2 - 1.0);
        r.err = std::abs(cur - fine);
        prev = fine;
    }
    r.value = cur;
    return r;
}

// plain summation of term_fn(0) + term_fn(1) + ...; deliberately redundant
// with the recurrence-based pfq engine
inline series_result brute_series(const std::function<cplx(int)>& term_fn,
                                  const series_control& ctl = {}) {
    cplx sum(0.0, 0.0);
    int ok = 0;
    for (int n = 0; n < ctl.max_terms; ++n) {
        cplx t = term_fn(n);
        sum += t;
        if (std::abs(t) <= std::max(ctl.rel_tol * std::abs(sum), ctl.abs_floor)) {
            if (++ok >= 3) {
                series_result r;
                r.value = sum;
                r.terms_used = n + 1;
                r.tail_bound = std::abs(t);
                return r;
            }
        } else {
            ok = 0;
        }
    }
    throw non_convergence("brute_series: no convergence within max_terms");
}

struct comparison_report {
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_diff = 0.0;
    double rel_diff = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::string context;
};

inline comparison_report compare(double lhs, double rhs, double tol, std::string context = {}) {
    comparison_report r;
    r.lhs = lhs;
    r.rhs = rhs;
    r.abs_diff = std::abs(lhs - rhs);
    double scale = std::max(1.0, std::max(std::abs(lhs), std::abs(rhs)));
    r.rel_diff = r.abs_diff / scale;
    r.tol = tol;
    r.pass = r.abs_diff <= tol * scale;
    r.context = std::move(context);
    return r;
}

template <typename Point>
std::vector<comparison_report> sweep(const std::vector<Point>& grid,
                                     const std::function<double(const Point&)>& lhs_fn,
                                     const std::function<double(const Point&)>& rhs_fn,
                                     double tol,
                                     const std::function<std::string(const Point&)>& label = nullptr) {
    std::vector<comparison_report> out;
    out.reserve(grid.size());
    for (const auto& p : grid)
        out.push_back(compare(lhs_fn(p), rhs_fn(p), tol, label ? label(p) : std::string{}));
    return out;
}

} // namespace wderiv
