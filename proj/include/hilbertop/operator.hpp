#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "hilbertop/compensated.hpp"
#include "hilbertop/kernel.hpp"
#include "hilbertop/seqspace.hpp"

namespace hilbertop {

enum class Setting { discrete, continuous };

// A fully specified mapping problem: kernel exponents plus the source and
// target spaces.  source.theta plays the role of alpha, target.theta of beta.
struct Problem {
    Exponents e;
    SpaceIndex source;
    SpaceIndex target;
    Setting setting = Setting::discrete;
};

namespace detail {

// Natural logs of 1..n, shared by the row loops below.
inline std::vector<double> log_table(std::size_t n) {
    std::vector<double> lg(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) lg[k] = std::log(static_cast<double>(k));
    return lg;
}

}  // namespace detail

// (H a)(n) = sum_{m=1}^{N} m^mu n^nu / (m+n)^lambda a_m for n = 1..out_len,
// treating the input as exactly its stored terms.  Each row accumulates with
// compensation, so results are reproducible to ~1e-15 and independent of any
// evaluation interleaving.
inline TruncatedSequence apply(const TruncatedSequence& a, const Exponents& e,
                               std::size_t out_len) {
    detail::check_sequence(a, "apply");
    if (out_len < 1) throw std::invalid_argument("apply: out_len must be >= 1");
    const std::size_t N = a.values.size();
    const auto lg = detail::log_table(N + out_len);

    std::vector<double> w(N);  // m^mu a_m
    for (std::size_t m = 1; m <= N; ++m)
        w[m - 1] = a.values[m - 1] * std::exp(e.mu * lg[m]);

    TruncatedSequence out;
    out.values.resize(out_len);
    for (std::size_t n = 1; n <= out_len; ++n) {
        NeumaierSum row;
        if (e.lambda == 1.0) {
            for (std::size_t m = 1; m <= N; ++m) row.add(w[m - 1] / static_cast<double>(m + n));
        } else if (e.lambda == 2.0) {
            for (std::size_t m = 1; m <= N; ++m) {
                const double d = static_cast<double>(m + n);
                row.add(w[m - 1] / (d * d));
            }
        } else {
            for (std::size_t m = 1; m <= N; ++m)
                row.add(w[m - 1] * std::exp(-e.lambda * lg[m + n]));
        }
        out.values[n - 1] = row.value() * std::exp(e.nu * lg[n]);
    }
    return out;
}

// The weighted adjoint: (H* b)(m) = sum_n n^{nu+beta} m^{mu-alpha} / (m+n)^lambda b_n.
// With these exponents, sum_n n^beta (H a)(n) b_n = sum_m m^alpha a_m (H* b)(m)
// term by term over any finite index box.
inline TruncatedSequence apply_adjoint(const TruncatedSequence& b, const Problem& prob,
                                       std::size_t out_len) {
    if (prob.setting != Setting::discrete)
        throw std::invalid_argument("apply_adjoint: defined for discrete problems");
    const Exponents adj{prob.e.lambda, prob.e.nu + prob.target.theta,
                        prob.e.mu - prob.source.theta};
    return apply(b, adj, out_len);
}

// Relative defect of the duality identity above, evaluated on the finite box
// {1..len(a)} x {1..len(b)}.  Exact adjointness makes this zero up to
// accumulation noise.
inline double duality_gap(const TruncatedSequence& a, const TruncatedSequence& b,
                          const Problem& prob) {
    detail::check_sequence(a, "duality_gap");
    detail::check_sequence(b, "duality_gap");
    const double alpha = prob.source.theta;
    const double beta = prob.target.theta;

    const TruncatedSequence Ha = apply(a, prob.e, b.values.size());
    const TruncatedSequence Hb = apply_adjoint(b, prob, a.values.size());

    NeumaierSum lhs;
    for (std::size_t n = 1; n <= b.values.size(); ++n)
        lhs.add(std::pow(static_cast<double>(n), beta) * Ha.values[n - 1] * b.values[n - 1]);
    NeumaierSum rhs;
    for (std::size_t m = 1; m <= a.values.size(); ++m)
        rhs.add(std::pow(static_cast<double>(m), alpha) * a.values[m - 1] * Hb.values[m - 1]);

    const double l = lhs.value();
    return std::fabs(l - rhs.value()) / std::fmax(1.0, std::fabs(l));
}

struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

// The N x N section of the weight-conjugated kernel
//   M[n][m] = n^{beta/2} k(m, n) m^{-alpha/2},
// whose l2 -> l2 operator norm equals that of H: l2_alpha -> l2_beta on the
// same section.  Only meaningful for p = q = 2.
inline DenseMatrix assemble_l2_matrix(const Problem& prob, std::size_t N) {
    if (prob.setting != Setting::discrete)
        throw std::invalid_argument("assemble_l2_matrix: defined for discrete problems");
    if (prob.source.p != 2.0 || prob.target.p != 2.0)
        throw std::invalid_argument("assemble_l2_matrix: requires p = q = 2");
    if (N < 1) throw std::invalid_argument("assemble_l2_matrix: N must be >= 1");

    const double alpha = prob.source.theta;
    const double beta = prob.target.theta;
    const auto lg = detail::log_table(2 * N);
    DenseMatrix M(N, N);
    for (std::size_t n = 1; n <= N; ++n) {
        const double rowlog = (0.5 * beta + prob.e.nu) * lg[n];
        for (std::size_t m = 1; m <= N; ++m)
            M(n - 1, m - 1) = std::exp(rowlog + (prob.e.mu - 0.5 * alpha) * lg[m] -
                                       prob.e.lambda * lg[m + n]);
    }
    return M;
}

}  // namespace hilbertop
