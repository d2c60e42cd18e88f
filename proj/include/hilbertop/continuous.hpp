#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <vector>

#include "hilbertop/classifier.hpp"
#include "hilbertop/errors.hpp"
#include "hilbertop/kernel.hpp"
#include "hilbertop/normest.hpp"
#include "hilbertop/quadrature.hpp"

namespace hilbertop {

// Numeric evaluation of I(y) = integral over x > 0 of x^tau / (x+y)^lambda.
// The substitution u = x/(x+y) maps the half line onto (0,1) and turns the
// integrand into y^{tau+1-lambda} u^tau (1-u)^{lambda-tau-2}, which can be
// singular at either end; splitting at 1/2 and flipping the upper half puts
// each singularity at the origin, where the quadrature routine expects it.
inline QuadResult integral_I_quad(double y, double tau, double lambda) {
    if (!(y > 0.0)) throw std::domain_error("integral_I_quad: y must be positive");
    if (!(tau > -1.0) || !(lambda - tau - 1.0 > 0.0))
        throw divergent_integral("integral_I_quad: exponents outside the convergent range");

    const double scale = std::pow(y, tau + 1.0 - lambda);
    const QuadResult lower = integrate(
        [=](double u) { return std::pow(u, tau) * std::pow(1.0 - u, lambda - tau - 2.0); },
        0.0, 0.5);
    const QuadResult upper = integrate(
        [=](double v) { return std::pow(v, lambda - tau - 2.0) * std::pow(1.0 - v, tau); },
        0.0, 0.5);
    return QuadResult{scale * (lower.value + upper.value),
                      scale * (lower.abs_error_estimate + upper.abs_error_estimate),
                      lower.subdivisions + upper.subdivisions};
}

struct IntegralIdentityPoint {
    double y;
    double tau;
    double lambda;
    double quad;
    double quad_error_estimate;
    double closed;
    double rel_gap;
};

struct IntegralIdentityReport {
    std::vector<IntegralIdentityPoint> points;
    double max_rel_gap = 0.0;
};

// (y, tau, lambda) triples covering singular, flat, and decaying charts.
inline std::vector<std::array<double, 3>> default_identity_grid() {
    std::vector<std::array<double, 3>> grid;
    for (double tau : {-0.5, 0.0, 1.0, 2.5})
        for (double d : {0.5, 1.0, 2.0})
            for (double y : {0.5, 1.0, 10.0}) grid.push_back({y, tau, tau + 1.0 + d});
    return grid;
}

// Cross-check of quadrature against the closed form on a parameter grid.
inline IntegralIdentityReport integral_identity_check(
    const std::vector<std::array<double, 3>>& grid) {
    IntegralIdentityReport report;
    for (const auto& pt : grid) {
        const double y = pt[0], tau = pt[1], lambda = pt[2];
        const double closed = integral_I_closed(y, tau, lambda);
        const QuadResult quad = integral_I_quad(y, tau, lambda);
        const double gap = std::fabs(quad.value - closed) / std::fabs(closed);
        report.points.push_back(
            {y, tau, lambda, quad.value, quad.abs_error_estimate, closed, gap});
        report.max_rel_gap = std::max(report.max_rel_gap, gap);
    }
    return report;
}

// Lower bound on the continuous operator norm from the unit-norm test
// function supported on [1, infinity) with exponent -(alpha+1+eps)/p,
// eps = 1/z: the bound is (eps^eps)^{1/p} times the tail integral of
// t^{mu-(alpha+1)/p-eps/p} (1+t)^{-lambda} over [1/z, infinity).  The value
// increases toward the limit constant as z grows.
inline double continuous_lower_bound(const Problem& prob, double z) {
    if (prob.setting != Setting::continuous)
        throw std::invalid_argument("continuous_lower_bound: problem is not continuous");
    if (prob.source.is_sup() || prob.target.is_sup() || prob.source.p != prob.target.p)
        throw std::invalid_argument("continuous_lower_bound: requires p = q finite");
    if (!(z >= 1.0)) throw std::domain_error("continuous_lower_bound: z must be >= 1");

    const double p = prob.source.p;
    const double eps = 1.0 / z;
    const double g = prob.e.mu - (prob.source.theta + 1.0) / p - eps / p;
    if (!(prob.e.lambda - g - 1.0 > 0.0))
        throw divergent_integral("continuous_lower_bound: tail integral diverges");

    // u = 1/(1+t) maps [1/z, infinity) onto (0, z/(1+z)], with the only
    // possible singularity at the origin.
    const double cut = z / (1.0 + z);
    const QuadResult tail = integrate(
        [=](double u) {
            return std::pow(1.0 - u, g) * std::pow(u, prob.e.lambda - g - 2.0);
        },
        0.0, cut);
    return std::pow(std::pow(eps, eps), 1.0 / p) * tail.value;
}

// Upper bound for the continuous operator norm, 1 < p <= q < infinity.  The
// same two-weight test as the discrete case, but rows and columns are exact
// half-line integrals, so both constants are Beta values with no envelope
// correction; the exponent bookkeeping closes only on the scaling line, which
// is also where the classifier places every bounded continuous tuple.
inline double continuous_schur_upper_bound(const Problem& prob, const SchurParams& sp) {
    if (prob.setting != Setting::continuous)
        throw std::invalid_argument("continuous_schur_upper_bound: problem is not continuous");
    const double p = prob.source.p;
    const double q = prob.target.p;
    if (prob.source.is_sup() || prob.target.is_sup() || !(p > 1.0) || !(p <= q))
        throw std::invalid_argument("continuous_schur_upper_bound: needs 1 < p <= q < inf");

    const double lambda = prob.e.lambda;
    const double mu = prob.e.mu;
    const double nu = prob.e.nu;
    const double alpha = prob.source.theta;
    const double beta_w = prob.target.theta;
    const double inf = std::numeric_limits<double>::infinity();

    const double target = mu + nu + 1.0 + (beta_w + 1.0) / q - (alpha + 1.0) / p;
    if (detail::scaled_residual(lambda, target) > detail::equality_rel_tol) return inf;

    const double pc = conjugate_exponent(p);
    const double tau1 = mu * pc / sp.s + pc * sp.a;
    const double lam1 = lambda * pc / sp.s;
    const double cap_b = q * (nu / sp.s + mu / sp.s + sp.a + 1.0 / pc - lambda / sp.s);
    const double tau2 = nu * q / sp.t + cap_b + beta_w;
    const double lam2 = lambda * q / sp.t;
    if (!(tau1 > -1.0) || !(lam1 - tau1 - 1.0 > 0.0)) return inf;
    if (!(tau2 > -1.0) || !(lam2 - tau2 - 1.0 > 0.0)) return inf;

    const double c1 = beta(tau1 + 1.0, lam1 - tau1 - 1.0);
    const double c2 = beta(tau2 + 1.0, lam2 - tau2 - 1.0);
    return std::pow(c1, 1.0 / pc) * std::pow(c2, 1.0 / q);
}

// p = 1 variant.  The sup constant is exact here: x^{a3} y^{c3} / (x+y)^{L}
// with a3 + c3 = L is scale-invariant, so the sup over the quarter-plane is
// the one-variable maximum a3^{a3} c3^{c3} / L^L, no lattice search and no
// safety factor.  sp.a plays the role of D.
inline double continuous_schur_upper_bound_p1(const Problem& prob, const SchurParams& sp) {
    if (prob.setting != Setting::continuous)
        throw std::invalid_argument(
            "continuous_schur_upper_bound_p1: problem is not continuous");
    const double q = prob.target.p;
    if (prob.source.p != 1.0 || prob.target.is_sup())
        throw std::invalid_argument("continuous_schur_upper_bound_p1: needs p = 1 <= q < inf");

    const double lambda = prob.e.lambda;
    const double mu = prob.e.mu;
    const double nu = prob.e.nu;
    const double alpha = prob.source.theta;
    const double beta_w = prob.target.theta;
    const double inf = std::numeric_limits<double>::infinity();

    const double target = mu + nu + (beta_w + 1.0) / q - alpha;
    if (detail::scaled_residual(lambda, target) > detail::equality_rel_tol) return inf;

    const double d = sp.a;
    const double a3 = (lambda - nu) / sp.s + d;
    const double c3 = nu / sp.s - d;
    if (!(a3 > 0.0) || !(c3 > 0.0)) return inf;
    const double tau4 = nu * q / sp.t + q * d + beta_w;
    const double lam4 = lambda * q / sp.t;
    if (!(tau4 + 1.0 > 0.0) || !(lam4 - tau4 - 1.0 > 0.0)) return inf;

    const double ray_sup =
        std::exp(a3 * std::log(a3) + c3 * std::log(c3) - (a3 + c3) * std::log(a3 + c3));
    const double c4 = beta(tau4 + 1.0, lam4 - tau4 - 1.0);
    return ray_sup * std::pow(c4, 1.0 / q);
}

// Minimise the continuous upper bound over the free test parameters.
inline SchurSearchResult optimize_continuous_schur(const Problem& prob, int grid_density) {
    if (grid_density < 2)
        throw std::domain_error("optimize_continuous_schur: density must be >= 2");
    if (prob.setting != Setting::continuous)
        throw std::invalid_argument("optimize_continuous_schur: problem is not continuous");
    const double p = prob.source.p;
    if (prob.source.is_sup() || prob.target.is_sup() || !(p <= prob.target.p))
        throw std::invalid_argument("optimize_continuous_schur: needs 1 <= p <= q < inf");
    const bool p_is_one = p == 1.0;
    return detail::schur_search(prob, grid_density, p_is_one, [&](double t, double a) {
        const SchurParams sp(conjugate_exponent(t), t, a);
        return p_is_one ? continuous_schur_upper_bound_p1(prob, sp)
                        : continuous_schur_upper_bound(prob, sp);
    });
}

// Two-sided enclosure of the continuous operator norm for p = q problems.
// Lower bounds come from the tail functional along the z schedule; the upper
// bound is the parameter-search value, displaced by the closed-form constant
// whenever the classifier grants one (the constant is the exact norm).
inline NormBracket continuous_norm_bracket(const Problem& prob,
                                           const std::vector<double>& z_schedule,
                                           int grid_density) {
    if (prob.setting != Setting::continuous)
        throw std::invalid_argument("continuous_norm_bracket: problem is not continuous");
    if (prob.source.is_sup() || prob.target.is_sup() || prob.source.p != prob.target.p)
        throw std::invalid_argument("continuous_norm_bracket: requires p = q finite");
    if (z_schedule.empty()) throw std::invalid_argument("continuous_norm_bracket: empty schedule");

    NormBracket br;
    char label[96];
    for (double z : z_schedule) {
        double v;
        try {
            v = continuous_lower_bound(prob, z);
        } catch (const divergent_integral&) {
            continue;  // this z sees a divergent tail; others may not
        }
        if (v > br.lower) {
            br.lower = v;
            std::snprintf(label, sizeof label, "extremal z=%g", z);
            br.lower_method = label;
        }
    }

    const SchurSearchResult search = optimize_continuous_schur(prob, grid_density);
    if (search.admissible_found && search.best < br.upper) {
        br.upper = search.best;
        std::snprintf(label, sizeof label, "schur s=%.6g t=%.6g A=%.6g", search.params.s,
                      search.params.t, search.params.a);
        br.upper_method = label;
        br.schur_params = search.params;
    }
    if (const auto sharp = sharp_norm(prob); sharp) {
        br.upper = *sharp;
        br.upper_method = "sharp-constant";
        br.schur_params.reset();
    }

    if (br.lower > br.upper + 1e-9)
        throw std::logic_error("continuous_norm_bracket: lower bound exceeds upper bound");
    return br;
}

}  // namespace hilbertop
