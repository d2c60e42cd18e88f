#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hilbertop/compensated.hpp"
#include "hilbertop/errors.hpp"
#include "hilbertop/quadrature.hpp"
#include "hilbertop/specfun.hpp"

namespace hilbertop {

// Exponent triple of the kernel k(m, n) = m^mu n^nu / (m + n)^lambda.
struct Exponents {
    double lambda = 0.0;
    double mu = 0.0;
    double nu = 0.0;
};

inline double kernel_eval(double m, double n, const Exponents& e) {
    if (!(m > 0.0) || !(n > 0.0))
        throw std::domain_error("kernel_eval: arguments must be positive");
    return std::exp(e.mu * std::log(m) + e.nu * std::log(n) - e.lambda * std::log(m + n));
}

// I(y) = int_0^inf x^tau / (x + y)^lambda dx, which converges exactly when
// tau > -1 and lambda - tau - 1 > 0 and then equals
// y^{tau+1-lambda} B(tau+1, lambda-tau-1).
inline double integral_I_closed(double y, double tau, double lambda) {
    if (!(y > 0.0)) throw std::domain_error("integral_I_closed: y must be positive");
    if (!(tau > -1.0) || !(lambda - tau - 1.0 > 0.0))
        throw divergent_integral(
            "integral_I_closed: requires tau > -1 and lambda - tau - 1 > 0");
    return std::exp((tau + 1.0 - lambda) * std::log(y)) * beta(tau + 1.0, lambda - tau - 1.0);
}

namespace detail {

// int_lo^inf t^tau (1 + t)^{-lambda} dt via u = 1/(1+t), which lands on the
// finite interval (0, 1/(1+lo)] with any power singularity sitting at u = 0.
inline QuadResult power_tail_integral(double lo, double tau, double lambda) {
    const double hi_u = 1.0 / (1.0 + lo);
    const double ue = lambda - tau - 2.0;  // exponent of u after substitution
    return integrate(
        [tau, ue](double u) { return std::exp(tau * std::log1p(-u) + ue * std::log(u)); }, 0.0,
        hi_u);
}

}  // namespace detail

// Partial sum of S(n) = sum_{m>=1} m^tau / (m+n)^lambda together with a
// certified bound on the dropped tail.
struct PartialSum {
    double partial = 0.0;
    double tail_hi = 0.0;
    long long terms_used = 0;
};

inline PartialSum sum_S_partial(double n, double tau, double lambda, long long terms) {
    if (!(n > 0.0)) throw std::domain_error("sum_S_partial: n must be positive");
    if (!(lambda - tau - 1.0 > 0.0))
        throw divergent_series("sum_S_partial: series diverges unless lambda - tau - 1 > 0");

    // The tail is compared against an integral, which is only valid where the
    // summand decreases; that kicks in at x = |tau/(lambda-tau)| n, so the
    // cut is pushed past that point if the caller asked for fewer terms.
    const double decreasing_from = std::fabs(tau / (lambda - tau)) * n;
    const long long min_terms = static_cast<long long>(std::ceil(decreasing_from)) + 1;
    PartialSum out;
    out.terms_used = std::max({terms, min_terms, 1LL});

    NeumaierSum acc;
    for (long long m = 1; m <= out.terms_used; ++m) {
        const double dm = static_cast<double>(m);
        acc.add(std::exp(tau * std::log(dm) - lambda * std::log(dm + n)));
    }
    out.partial = acc.value();

    // sum_{m > T} <= int_T^inf x^tau (x+n)^{-lambda} dx
    //             = n^{tau+1-lambda} int_{T/n}^inf t^tau (1+t)^{-lambda} dt.
    const double T = static_cast<double>(out.terms_used);
    const QuadResult q = detail::power_tail_integral(T / n, tau, lambda);
    out.tail_hi =
        std::exp((tau + 1.0 - lambda) * std::log(n)) * (q.value + q.abs_error_estimate);
    return out;
}

// Constant C with S(n) <= C n^{tau+1-lambda} for every n >= 1.  For
// -1 < tau <= 0 the envelope is the exact Beta integral; for tau > 0 the
// summand is not monotone, and splitting tau into an integer part plus a
// remainder in (-1, 0] yields a Beta term plus the explicit peak correction
// below.  No closed envelope of this shape exists for tau <= -1.
inline std::optional<double> sum_envelope_constant(double tau, double lambda) {
    if (!(lambda - tau - 1.0 > 0.0))
        throw divergent_series(
            "sum_envelope_constant: series diverges unless lambda - tau - 1 > 0");
    if (tau <= -1.0) return std::nullopt;
    if (tau <= 0.0) return beta(tau + 1.0, lambda - tau - 1.0);
    const double rem = tau - std::ceil(tau);  // in (-1, 0]
    const double peak = std::pow(lambda / (lambda - tau), tau) *
                        std::pow(tau / (lambda - tau), 1.0 - lambda);
    return peak + beta(rem + 1.0, lambda - tau - 1.0);
}

inline std::optional<double> sum_upper_bound(double n, double tau, double lambda) {
    if (!(n > 0.0)) throw std::domain_error("sum_upper_bound: n must be positive");
    const auto c = sum_envelope_constant(tau, lambda);
    if (!c) return std::nullopt;
    return *c * std::exp((tau + 1.0 - lambda) * std::log(n));
}

/// S(n) >= int_{cut}^inf x^tau (x+n)^{-lambda} dx with cut = |tau/(lambda-tau)| n + 1:
// beyond the cut each term of the series dominates the next unit slice of the
// integral.  The quadrature error estimate is subtracted so the returned
// number stays on the safe side.
inline double sum_lower_bound(double n, double tau, double lambda) {
    if (!(n > 0.0)) throw std::domain_error("sum_lower_bound: n must be positive");
    if (!(lambda - tau - 1.0 > 0.0))
        throw divergent_series("sum_lower_bound: series diverges unless lambda - tau - 1 > 0");
    const double cut = std::fabs(tau / (lambda - tau)) * n + 1.0;
    const QuadResult q = detail::power_tail_integral(cut / n, tau, lambda);
    const double scale = std::exp((tau + 1.0 - lambda) * std::log(n));
    return std::fmax(0.0, scale * (q.value - q.abs_error_estimate));
}

struct SupCheck {
    bool holds = false;
    double observed_sup = 0.0;
};

/// Finiteness test for sup_{m,n in N} m^a n^{-b} / (m+n)^lambda: the sup is
// finite iff lambda >= a - b, lambda >= a and lambda >= -b.  The observed
// maximum over {1..grid}^2 is reported alongside, computed in log space.
inline SupCheck kernel_sup_check(double a, double b, double lambda, int grid = 1000) {
    if (grid < 1) throw std::domain_error("kernel_sup_check: grid must be >= 1");
    SupCheck out;
    out.holds = (lambda >= a - b) && (lambda >= a) && (lambda >= -b);

    std::vector<double> lg(static_cast<std::size_t>(2 * grid) + 1, 0.0);
    for (std::size_t k = 1; k < lg.size(); ++k) lg[k] = std::log(static_cast<double>(k));
    double best = -std::numeric_limits<double>::infinity();
    for (int m = 1; m <= grid; ++m)
        for (int n = 1; n <= grid; ++n) {
            const double v = a * lg[m] - b * lg[n] - lambda * lg[m + n];
            if (v > best) best = v;
        }
    out.observed_sup = std::exp(best);
    return out;
}

}  // namespace hilbertop
