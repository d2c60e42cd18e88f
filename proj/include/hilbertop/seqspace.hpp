#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hilbertop/compensated.hpp"
#include "hilbertop/errors.hpp"

namespace hilbertop {

// One side of a mapping problem: the exponent-weighted sequence space with
// norm (sum_m m^theta |a_m|^p)^{1/p}.  p = infinity selects the sup norm,
// in which case theta is ignored.
struct SpaceIndex {
    double p = 2.0;
    double theta = 0.0;

    SpaceIndex() = default;
    SpaceIndex(double p_, double theta_) : p(p_), theta(theta_) {
        if (!(p >= 1.0)) throw std::domain_error("SpaceIndex: requires p >= 1");
        if (std::isnan(theta)) throw std::domain_error("SpaceIndex: theta must be a number");
    }
    bool is_sup() const { return std::isinf(p); }
};

// A sequence stored up to some cut N, indexed from 1.  tail_note, when
// present, is a certified bound on the weighted p-th power mass
// sum_{n>N} n^theta |a_n|^p of the dropped tail in the space the sequence
// was built for.
struct TruncatedSequence {
    std::vector<double> values;
    std::optional<double> tail_note;
};

namespace detail {

inline void check_sequence(const TruncatedSequence& a, const char* who) {
    if (a.values.empty())
        throw std::invalid_argument(std::string(who) + ": sequence must hold at least one term");
    for (double v : a.values)
        if (!std::isfinite(v))
            throw std::invalid_argument(std::string(who) + ": entries must be finite");
}

}  // namespace detail

// Weighted p-norm of the stored terms.  The sup norm is a different
// operation (sup_norm); asking for it here is a contract violation.
inline double weighted_norm(const TruncatedSequence& a, const SpaceIndex& s) {
    detail::check_sequence(a, "weighted_norm");
    if (s.is_sup())
        throw std::invalid_argument("weighted_norm: p = infinity has no weighted power norm");
    NeumaierSum acc;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double x = std::fabs(a.values[i]);
        if (x == 0.0) continue;
        const double m = static_cast<double>(i + 1);
        const double xp = (s.p == 1.0) ? x : (s.p == 2.0 ? x * x : std::pow(x, s.p));
        const double w = (s.theta == 0.0) ? 1.0 : std::pow(m, s.theta);
        acc.add(w * xp);
    }
    return std::pow(acc.value(), 1.0 / s.p);
}

inline double sup_norm(const TruncatedSequence& a) {
    detail::check_sequence(a, "sup_norm");
    double best = 0.0;
    for (double v : a.values) best = std::fmax(best, std::fabs(v));
    return best;
}

// Bound on the dropped tail of a pure power: sum_{n>N} n^e <= N^{e+1}/(-e-1),
// valid for e < -1 since x^e is decreasing.
inline double power_tail_bound(double exponent, long long N) {
    if (N < 1) throw std::domain_error("power_tail_bound: N must be >= 1");
    if (!(exponent < -1.0))
        throw divergent_series("power_tail_bound: tail diverges unless exponent < -1");
    return std::exp((exponent + 1.0) * std::log(static_cast<double>(N))) / (-exponent - 1.0);
}

// The near-extremal test sequence a_n = n^{-(alpha+1)/p - eps/p}, truncated
// at N.  In the (p, alpha) space its p-th power mass is sum n^{-1-eps}, so
// the tail beyond N is certified by power_tail_bound(-1-eps, N) = N^{-eps}/eps.
inline TruncatedSequence extremal_sequence(double eps, double p, double alpha, long long N) {
    if (!(eps > 0.0)) throw std::domain_error("extremal_sequence: eps must be positive");
    if (!(p >= 1.0) || std::isinf(p))
        throw std::domain_error("extremal_sequence: requires finite p >= 1");
    if (N < 1) throw std::domain_error("extremal_sequence: N must be >= 1");

    TruncatedSequence a;
    a.values.resize(static_cast<std::size_t>(N));
    const double expo = -(alpha + 1.0 + eps) / p;
    for (long long n = 1; n <= N; ++n)
        a.values[static_cast<std::size_t>(n - 1)] =
            std::exp(expo * std::log(static_cast<double>(n)));
    a.tail_note = power_tail_bound(-1.0 - eps, N);
    return a;
}

}  // namespace hilbertop
