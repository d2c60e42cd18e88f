#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "hilbertop/operator.hpp"
#include "hilbertop/specfun.hpp"

namespace hilbertop {

enum class Status { bounded, unbounded, inapplicable };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::bounded:
            return "bounded";
        case Status::unbounded:
            return "unbounded";
        default:
            return "inapplicable";
    }
}

// In the discrete p <= q regime, alpha + 1 > p(mu + 1 - lambda) is known to be
// necessary for boundedness, but the two-condition criterion we apply does not
// list it.  Whether the criterion already implies it is open, so bounded
// verdicts carry the side condition for auditing instead of silently
// strengthening the rule.
struct Advisory {
    bool applicable = false;       // only bounded discrete p <= q verdicts carry information
    bool condition_holds = false;  // alpha + 1 > p(mu + 1 - lambda)
};

struct Verdict {
    Status status = Status::inapplicable;
    std::optional<double> sharp_norm;  // present only when bounded with a sharp constant
    std::string rule;                  // dispatch branch that decided, stable identifier
    std::string reason;                // grounds for inapplicable verdicts
    Advisory advisory;
    std::optional<double> equality_residual;  // scaled residual of the lambda equality test
};

namespace detail {

// Users type lambda as a rounded decimal, so the lambda = f(p, q, ...) equality
// tests accept a relative slack; every inequality stays exact on the given
// binary64 values.
constexpr double equality_rel_tol = 1e-12;

inline double scaled_residual(double x, double y) {
    return std::fabs(x - y) / std::fmax(1.0, std::fmax(std::fabs(x), std::fabs(y)));
}

inline bool exponents_valid(const Exponents& e) {
    return !std::isnan(e.lambda) && !std::isnan(e.mu) && !std::isnan(e.nu);
}

// The shared sharp constant B(mu + 1 - (alpha+1)/p, nu + (beta+1)/p), absent
// when an argument falls outside the Beta domain (possible only on exact
// boundary tuples admitted by the equality slack).
inline std::optional<double> beta_norm(double p, double mu, double nu, double alpha,
                                       double beta_w) {
    const double x = mu + 1.0 - (alpha + 1.0) / p;
    const double y = nu + (beta_w + 1.0) / p;
    if (!(x > 0.0) || !(y > 0.0)) return std::nullopt;
    return beta(x, y);
}

}  // namespace detail

// Boundedness of the discrete operator l^p_alpha -> l^q_beta, decided by the
// closed-form criteria for each (p, q) shape.  Inapplicable is a verdict, not
// an error: it marks parameter regions the criteria do not decide.
inline Verdict classify_discrete(const Problem& prob) {
    if (prob.setting != Setting::discrete)
        throw std::invalid_argument("classify_discrete: problem is not discrete");

    const double p = prob.source.p;
    const double q = prob.target.p;
    const double lambda = prob.e.lambda;
    const double mu = prob.e.mu;
    const double nu = prob.e.nu;
    const double alpha = prob.source.theta;
    const double beta_w = prob.target.theta;

    Verdict v;
    if (!detail::exponents_valid(prob.e)) {
        v.rule = "discrete:invalid";
        v.reason = "kernel exponents must not be NaN";
        return v;
    }

    const bool p_inf = prob.source.is_sup();
    const bool q_inf = prob.target.is_sup();

    if (p_inf && q_inf) {
        v.rule = "discrete:p=q=inf";
        if (!(mu > -1.0)) {
            v.reason = "criterion requires mu > -1";
            return v;
        }
        v.status = (lambda >= mu + nu + 1.0 && lambda > mu + 1.0) ? Status::bounded
                                                                  : Status::unbounded;
        return v;
    }
    if (p_inf) {
        v.rule = "discrete:p>q";
        v.reason = "no criterion for p > q";
        return v;
    }
    if (q_inf) {
        if (p == 1.0) {
            v.rule = "discrete:p=1,q=inf";
            // Equivalent to finiteness of sup m^{mu-alpha} n^{nu} / (m+n)^lambda.
            v.status = (lambda >= mu + nu - alpha && lambda >= nu && lambda >= mu - alpha)
                           ? Status::bounded
                           : Status::unbounded;
            return v;
        }
        v.rule = "discrete:1<p<inf,q=inf";
        if (!(alpha + 1.0 < p * (mu + 1.0))) {
            v.reason = "criterion requires alpha + 1 < p(mu + 1)";
            return v;
        }
        v.status = (lambda >= mu + nu + 1.0 - (alpha + 1.0) / p &&
                    p * (mu + 1.0 - lambda) < alpha + 1.0)
                       ? Status::bounded
                       : Status::unbounded;
        return v;
    }

    if (p > q) {
        v.rule = "discrete:p>q";
        v.reason = "no criterion for p > q";
        return v;
    }

    v.rule = "discrete:p<=q<inf";
    if (!(beta_w + 1.0 > -q * nu)) {
        v.reason = "undecided when beta + 1 <= -q nu";
        return v;
    }
    const bool scale_ok = lambda >= mu + nu + 1.0 + (beta_w + 1.0) / q - (alpha + 1.0) / p;
    const bool window_ok = beta_w + 1.0 < q * (lambda - nu);
    v.status = (scale_ok && window_ok) ? Status::bounded : Status::unbounded;

    if (v.status == Status::bounded) {
        v.advisory.applicable = true;
        v.advisory.condition_holds = alpha + 1.0 > p * (mu + 1.0 - lambda);

        if (p == q) {
            const double target = mu + nu + 1.0 + (beta_w - alpha) / p;
            const double residual = detail::scaled_residual(lambda, target);
            v.equality_residual = residual;
            const bool on_scaling_line = residual <= detail::equality_rel_tol;
            const bool window = -p * nu < beta_w + 1.0 && beta_w + 1.0 < p * (lambda - nu);
            const bool corner = alpha + 1.0 >= p * mu && beta_w + 1.0 <= p * (1.0 - nu);
            if (on_scaling_line && window && corner)
                v.sharp_norm = detail::beta_norm(p, mu, nu, alpha, beta_w);
        }
    }
    return v;
}

// Boundedness of the continuous operator L^p_alpha -> L^q_beta.  Unlike the
// discrete case, boundedness forces the exact scaling relation
// lambda = mu + nu + 1 + (beta+1)/q - (alpha+1)/p, so the verdict hinges on an
// equality test plus a strict window.
inline Verdict classify_continuous(const Problem& prob) {
    if (prob.setting != Setting::continuous)
        throw std::invalid_argument("classify_continuous: problem is not continuous");

    const double p = prob.source.p;
    const double q = prob.target.p;
    const double lambda = prob.e.lambda;
    const double mu = prob.e.mu;
    const double nu = prob.e.nu;
    const double alpha = prob.source.theta;
    const double beta_w = prob.target.theta;

    Verdict v;
    if (!detail::exponents_valid(prob.e)) {
        v.rule = "continuous:invalid";
        v.reason = "kernel exponents must not be NaN";
        return v;
    }

    const bool p_inf = prob.source.is_sup();
    const bool q_inf = prob.target.is_sup();

    if (!p_inf && !q_inf && p <= q) {
        v.rule = "continuous:p<=q<inf";
        const double target = mu + nu + 1.0 + (beta_w + 1.0) / q - (alpha + 1.0) / p;
        const double residual = detail::scaled_residual(lambda, target);
        v.equality_residual = residual;
        const bool on_scaling_line = residual <= detail::equality_rel_tol;
        const bool window = -q * nu < beta_w + 1.0 && beta_w + 1.0 < q * (lambda - nu);
        v.status = (on_scaling_line && window) ? Status::bounded : Status::unbounded;
        if (v.status == Status::bounded && p == q)
            v.sharp_norm = detail::beta_norm(p, mu, nu, alpha, beta_w);
        return v;
    }
    if (!p_inf && q_inf && p > 1.0) {
        v.rule = "continuous:1<p<inf,q=inf";
        const double target = mu + nu + 1.0 - (alpha + 1.0) / p;
        const double residual = detail::scaled_residual(lambda, target);
        v.equality_residual = residual;
        v.status = (residual <= detail::equality_rel_tol && 0.0 < nu && nu < lambda)
                       ? Status::bounded
                       : Status::unbounded;
        return v;
    }

    v.rule = "continuous:unsupported-shape";
    v.reason = "no criterion for this (p, q) shape";
    return v;
}

inline Verdict classify(const Problem& prob) {
    return prob.setting == Setting::discrete ? classify_discrete(prob)
                                             : classify_continuous(prob);
}

// The sharp operator norm when one is known, independent of how the caller
// phrases the problem.
inline std::optional<double> sharp_norm(const Problem& prob) {
    return classify(prob).sharp_norm;
}

}  // namespace hilbertop
