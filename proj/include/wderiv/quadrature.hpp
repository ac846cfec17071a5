#pragma once

// Double-exponential quadrature for (0, inf) integrands with algebraic or
// algebraic-log endpoint behaviour: tanh-sinh on (0, split), exp-sinh on
// (split, inf).  Backed by boost.math behind the QuadratureControl contract.

#include <functional>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "wderiv/types.hpp"

namespace wderiv {

struct singularity_spec {
    double left_exponent = 0.0;  // t^alpha strength at 0
    bool has_log = false;

    singularity_spec(double alpha = 0.0, bool log_ = false)
        : left_exponent(alpha), has_log(log_) {
        if (alpha <= -1.0)
            throw domain_error("singularity_spec: endpoint exponent must be > -1");
    }
};

namespace detail {

inline double de_finite(const std::function<double(double)>& f, double a, double b,
                        const quadrature_control& qctl, double* abs_err) {
    boost::math::quadrature::tanh_sinh<double> integ(static_cast<std::size_t>(qctl.max_level));
    double rel_err = 0.0, l1 = 0.0;
    std::size_t levels = 0;
    double v = integ.integrate(f, a, b, qctl.target_tol, &rel_err, &l1, &levels);
    if (!std::isfinite(v))
        throw quadrature_failure("tanh-sinh segment returned a non-finite value");
    if (abs_err) *abs_err = rel_err * std::max(std::abs(v), 1.0e-30);
    if (rel_err > 1e3 * std::max(qctl.target_tol, 1e-14) && rel_err * l1 > 1e3 * qctl.target_tol)
        throw quadrature_failure("tanh-sinh segment exhausted its levels before the target tolerance");
    return v;
}

inline double de_tail(const std::function<double(double)>& f, double a,
                      const quadrature_control& qctl, double* abs_err) {
    boost::math::quadrature::exp_sinh<double> integ(static_cast<std::size_t>(qctl.max_level));
    double rel_err = 0.0, l1 = 0.0;
    std::size_t levels = 0;
    double v = integ.integrate(f, a, std::numeric_limits<double>::infinity(),
                               qctl.target_tol, &rel_err, &l1, &levels);
    if (!std::isfinite(v))
        throw quadrature_failure("exp-sinh segment returned a non-finite value");
    if (abs_err) *abs_err = rel_err * std::max(std::abs(v), 1.0e-30);
    if (rel_err > 1e3 * std::max(qctl.target_tol, 1e-14) && rel_err * l1 > 1e3 * qctl.target_tol)
        throw quadrature_failure("exp-sinh segment exhausted its levels before the target tolerance");
    return v;
}

} // namespace detail

// integral of f over (0, inf)
inline eval_result quad_I(const singularity_spec& /*spec*/, const std::function<double(double)>& f,
                          const quadrature_control& qctl = {}) {
    // the DE transforms absorb t^alpha (alpha > -1, validated by the spec
    // type) and log endpoint factors without node customization
    eval_result r;
    r.method = method_tag::quadrature;
    double e1v = 0.0, e2v = 0.0;
    double head = detail::de_finite(f, 0.0, qctl.split, qctl, &e1v);
    double tail = detail::de_tail(f, qctl.split, qctl, &e2v);
    r.value = head + tail;
    r.err = e1v + e2v;
    return r;
}

// integral of f over (a, b), both endpoints possibly singular
inline eval_result quad_finite(const std::function<double(double)>& f, double a, double b,
                               const quadrature_control& qctl = {}) {
    eval_result r;
    r.method = method_tag::quadrature;
    double e = 0.0;
    r.value = detail::de_finite(f, a, b, qctl, &e);
    r.err = e;
    return r;
}

// integral of f over (a, inf)
inline eval_result quad_tail(const std::function<double(double)>& f, double a,
                             const quadrature_control& qctl = {}) {
    eval_result r;
    r.method = method_tag::quadrature;
    double e = 0.0;
    r.value = detail::de_tail(f, a, qctl, &e);
    r.err = e;
    return r;
}

} // namespace wderiv
