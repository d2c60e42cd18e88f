#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hilbertop/classifier.hpp"
#include "hilbertop/fft.hpp"
#include "hilbertop/operator.hpp"

namespace hilbertop {

inline double conjugate_exponent(double x) { return x / (x - 1.0); }

// Free parameters of the row/column test-weight construction: a conjugate
// pair (s, t) and the weight exponent A.  The p = 1 variant reuses the A slot
// for its constant D.
struct SchurParams {
    double s;
    double t;
    double a;

    SchurParams(double s_, double t_, double a_) : s(s_), t(t_), a(a_) {
        if (!(s_ > 1.0) || !(t_ > 1.0))
            throw std::domain_error("SchurParams: s and t must exceed 1");
        if (std::fabs(1.0 / s_ + 1.0 / t_ - 1.0) > 1e-14)
            throw std::domain_error("SchurParams: 1/s + 1/t must equal 1");
    }
};

struct SchurEvaluation {
    double bound = std::numeric_limits<double>::infinity();
    bool admissible = false;
    bool head_beta_branch = false;  // row envelope used the exact Beta constant
    bool tail_beta_branch = false;  // column envelope likewise
};

namespace detail {

constexpr int c3_grid = 10000;          // lattice box for the p = 1 sup constant
constexpr double c3_safety = 1.01;      // sup is observed, not certified
constexpr std::size_t fft_cutover = 4096;
constexpr std::size_t stream_cutover = 32768;
constexpr std::size_t fft_max_size = std::size_t{1} << 25;

inline const std::vector<double>& c3_log_table() {
    static const std::vector<double> lg = log_table(2 * c3_grid);
    return lg;
}

// Exact maximum of m^a n^c / (m+n)^L over the integer box {1..G}^2.  For fixed
// m the function is unimodal in n with peak near c m / (L - c), so checking
// the two neighbouring integers and the box edges per m suffices: O(G) work.
inline double lattice_kernel_sup(double a, double c, double L, int G) {
    const auto& lg = c3_log_table();
    double best = -std::numeric_limits<double>::infinity();
    auto probe = [&](int m, long long n) {
        if (n < 1 || n > G) return;
        const double v = a * lg[static_cast<std::size_t>(m)] +
                         c * lg[static_cast<std::size_t>(n)] -
                         L * lg[static_cast<std::size_t>(m) + static_cast<std::size_t>(n)];
        if (v > best) best = v;
    };
    for (int m = 1; m <= G; ++m) {
        if (c <= 0.0 || !(L > c)) {
            probe(m, 1);
            continue;
        }
        const double peak = c * m / (L - c);
        const long long base = static_cast<long long>(std::floor(peak));
        probe(m, 1);
        probe(m, base);
        probe(m, base + 1);
        probe(m, G);
    }
    return std::exp(best);
}

}  // namespace detail

// Upper bound for the discrete operator norm, 1 < p <= q < infinity.  The
// two-sided weight test gives C1^{1/p'} C2^{1/q} where C1, C2 envelope the row
// and column sums; inadmissible parameters or a failing scale hypothesis give
// +infinity, never an invalid certificate.
inline SchurEvaluation evaluate_schur(const Problem& prob, const SchurParams& sp) {
    if (prob.setting != Setting::discrete)
        throw std::invalid_argument("evaluate_schur: problem is not discrete");
    const double p = prob.source.p;
    const double q = prob.target.p;
    if (prob.source.is_sup() || prob.target.is_sup() || !(p > 1.0) || !(p <= q))
        throw std::invalid_argument("evaluate_schur: needs 1 < p <= q < inf");

    const double lambda = prob.e.lambda;
    const double mu = prob.e.mu;
    const double nu = prob.e.nu;
    const double alpha = prob.source.theta;
    const double beta_w = prob.target.theta;

    SchurEvaluation out;
    if (!(lambda >= mu + nu + 1.0 + (beta_w + 1.0) / q - (alpha + 1.0) / p)) return out;

    const double pc = conjugate_exponent(p);  // p'
    const double tau1 = mu * pc / sp.s + pc * sp.a;
    const double lam1 = lambda * pc / sp.s;
    const double cap_b = q * (nu / sp.s + mu / sp.s + sp.a + 1.0 / pc - lambda / sp.s);
    const double tau2 = nu * q / sp.t + cap_b + beta_w;
    const double lam2 = lambda * q / sp.t;
    if (!(tau1 > -1.0) || !(lam1 - tau1 - 1.0 > 0.0)) return out;
    if (!(tau2 > -1.0) || !(lam2 - tau2 - 1.0 > 0.0)) return out;

    const double c1 = *sum_envelope_constant(tau1, lam1);
    const double c2 = *sum_envelope_constant(tau2, lam2);
    out.bound = std::pow(c1, 1.0 / pc) * std::pow(c2, 1.0 / q);
    out.admissible = true;
    out.head_beta_branch = tau1 <= 0.0;
    out.tail_beta_branch = tau2 <= 0.0;
    return out;
}

inline double schur_upper_bound(const Problem& prob, const SchurParams& sp) {
    return evaluate_schur(prob, sp).bound;
}

// p = 1 variant: a one-sided sup estimate (constant C3, observed on a lattice
// box and widened by a safety factor) times a column envelope C4^{1/q}.
// sp.a plays the role of D.
inline double schur_upper_bound_p1(const Problem& prob, const SchurParams& sp) {
    if (prob.setting != Setting::discrete)
        throw std::invalid_argument("schur_upper_bound_p1: problem is not discrete");
    const double q = prob.target.p;
    if (prob.source.p != 1.0 || prob.target.is_sup())
        throw std::invalid_argument("schur_upper_bound_p1: needs p = 1 <= q < inf");

    const double lambda = prob.e.lambda;
    const double mu = prob.e.mu;
    const double nu = prob.e.nu;
    const double alpha = prob.source.theta;
    const double beta_w = prob.target.theta;
    const double inf = std::numeric_limits<double>::infinity();

    if (!(lambda >= mu + nu + (beta_w + 1.0) / q - alpha)) return inf;

    const double d = sp.a;
    const double a3 = (lambda - nu) / sp.s + d;
    const double c3 = nu / sp.s - d;
    if (!(a3 > 0.0) || !(c3 > 0.0)) return inf;
    const double tau4 = nu * q / sp.t + q * d + beta_w;
    const double lam4 = lambda * q / sp.t;
    if (!(tau4 + 1.0 > 0.0) || !(lam4 - tau4 - 1.0 > 0.0)) return inf;

    const double sup3 =
        detail::c3_safety * detail::lattice_kernel_sup(a3, c3, lambda / sp.s, detail::c3_grid);
    const double c4 = *sum_envelope_constant(tau4, lam4);
    return sup3 * std::pow(c4, 1.0 / q);
}

struct SchurSearchResult {
    double best = std::numeric_limits<double>::infinity();
    SchurParams params{2.0, 2.0, 0.0};
    bool admissible_found = false;
    std::string note;
};

namespace detail {

// Admissible A-interval (intersection of both windows) at a given conjugate
// pair; empty means no test weight exists there.
inline std::pair<double, double> schur_window(const Problem& prob, double s, double t,
                                              bool p_is_one) {
    const double lambda = prob.e.lambda;
    const double mu = prob.e.mu;
    const double nu = prob.e.nu;
    const double beta_w = prob.target.theta;
    const double q = prob.target.p;
    if (p_is_one) {
        const double lo = std::fmax(-nu / t - (beta_w + 1.0) / q, (nu - lambda) / s);
        const double hi = std::fmin((lambda - nu) / t - (beta_w + 1.0) / q, nu / s);
        return {lo, hi};
    }
    const double pc = conjugate_exponent(prob.source.p);
    const double base = -(beta_w + 1.0) / q - nu - mu / s - 1.0 / pc;
    const double lo = std::fmax(-1.0 / pc - mu / s, base + lambda / s);
    const double hi = std::fmin(-1.0 / pc - mu / s + lambda / s, base + lambda);
    return {lo, hi};
}

}  // namespace detail

namespace detail {

// Search skeleton shared by the discrete and continuous bound families.
// Coarse pass: t - 1 on a log grid over [1e-2, 10 q], A uniform across the
// admissible window with half-cell offsets.  The evaluator returns +infinity
// at inadmissible points, which the search treats as absent.  Deterministic
// for a given density.
template <typename Eval>
inline SchurSearchResult schur_search(const Problem& prob, int grid_density, bool p_is_one,
                                      Eval&& eval) {
    const double q = prob.target.p;
    const double inf = std::numeric_limits<double>::infinity();

    SchurSearchResult result;
    double best_lt = 0.0;  // log(t - 1) at the best coarse point

    const double lt_lo = std::log(1e-2);
    const double lt_hi = std::log(10.0 * q);
    const int n = grid_density;

    for (int i = 0; i < n; ++i) {
        const double lt = lt_lo + (lt_hi - lt_lo) * double(i) / (n - 1);
        const double t = 1.0 + std::exp(lt);
        const auto [wlo, whi] = detail::schur_window(prob, conjugate_exponent(t), t, p_is_one);
        if (!(wlo < whi)) continue;
        for (int j = 0; j < n; ++j) {
            const double a = wlo + (whi - wlo) * (j + 0.5) / n;
            const double v = eval(t, a);
            if (v < result.best) {
                result.best = v;
                result.params = SchurParams(conjugate_exponent(t), t, a);
                result.admissible_found = true;
                best_lt = lt;
            }
        }
    }
    if (!result.admissible_found) {
        result.note = "no admissible grid point";
        return result;
    }

    constexpr double gold = 0.61803398874989485;
    constexpr int golden_iters = 48;
    auto golden = [&](auto&& f, double lo, double hi) {
        double x1 = hi - gold * (hi - lo), x2 = lo + gold * (hi - lo);
        double f1 = f(x1), f2 = f(x2);
        for (int it = 0; it < golden_iters; ++it) {
            if (f1 <= f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gold * (hi - lo);
                f1 = f(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gold * (hi - lo);
                f2 = f(x2);
            }
        }
        return f1 <= f2 ? std::pair{f1, x1} : std::pair{f2, x2};
    };

    // Inner problem: minimise over A at fixed t.  Each bound factor is
    // log-convex in A on its Beta branch, so after a 9-point scan localises
    // the basin, golden section finishes the job.
    auto profile = [&](double lt) {
        const double t = 1.0 + std::exp(lt);
        const auto [wlo, whi] = detail::schur_window(prob, conjugate_exponent(t), t, p_is_one);
        if (!(wlo < whi)) return std::pair{inf, 0.0};
        const double span = whi - wlo;
        double sv = inf, sa = 0.5 * (wlo + whi);
        for (int j = 0; j < 9; ++j) {
            const double a = wlo + span * (j + 0.5) / 9.0;
            const double v = eval(t, a);
            if (v < sv) {
                sv = v;
                sa = a;
            }
        }
        const auto [gv, ga] = golden([&](double a) { return eval(t, a); },
                                     std::fmax(wlo, sa - span / 9.0),
                                     std::fmin(whi, sa + span / 9.0));
        return gv < sv ? std::pair{gv, ga} : std::pair{sv, sa};
    };

    // Outer problem: descend the profile min_A bound(t, A) in log(t - 1),
    // scanning the +-1-cell neighbourhood of the coarse best first.
    const double step = (lt_hi - lt_lo) / (n - 1);
    double scan_lt = best_lt, scan_val = inf;
    for (int i = 0; i < 9; ++i) {
        const double lt = best_lt - step + 2.0 * step * i / 8.0;
        const double v = profile(lt).first;
        if (v < scan_val) {
            scan_val = v;
            scan_lt = lt;
        }
    }
    const auto [ov, olt] = golden([&](double lt) { return profile(lt).first; },
                                  scan_lt - step / 4.0, scan_lt + step / 4.0);
    const double final_lt = ov < scan_val ? olt : scan_lt;
    const auto [fv, fa] = profile(final_lt);
    if (fv < result.best) {
        const double t = 1.0 + std::exp(final_lt);
        result.best = fv;
        result.params = SchurParams(conjugate_exponent(t), t, fa);
    }
    return result;
}

}  // namespace detail

// Minimise the discrete upper bound over the free test parameters.
inline SchurSearchResult optimize_schur(const Problem& prob, int grid_density) {
    if (grid_density < 2) throw std::domain_error("optimize_schur: density must be >= 2");
    if (prob.setting != Setting::discrete)
        throw std::invalid_argument("optimize_schur: problem is not discrete");
    const double p = prob.source.p;
    if (prob.source.is_sup() || prob.target.is_sup() || !(p <= prob.target.p))
        throw std::invalid_argument("optimize_schur: needs 1 <= p <= q < inf");
    const bool p_is_one = p == 1.0;
    return detail::schur_search(prob, grid_density, p_is_one, [&](double t, double a) {
        const SchurParams sp(conjugate_exponent(t), t, a);
        return p_is_one ? schur_upper_bound_p1(prob, sp) : schur_upper_bound(prob, sp);
    });
}

namespace detail {

// ||(H a)|_N||_{q,beta} via one Hankel correlation: with w_m = m^mu a_m and
// h_j = j^{-lambda}, the image is (H a)(n) = n^nu sum_m w_m h_{m+n}.
inline double image_norm_fft(const TruncatedSequence& a, const Problem& prob) {
    const std::size_t N = a.values.size();
    if (next_pow2(3 * N) > fft_max_size)
        throw std::length_error("image_norm_fft: transform too large");
    const auto lg = log_table(2 * N);

    std::vector<double> w(N), hrev(2 * N - 1);
    for (std::size_t m = 1; m <= N; ++m)
        w[m - 1] = a.values[m - 1] * std::exp(prob.e.mu * lg[m]);
    for (std::size_t k = 0; k + 2 <= 2 * N; ++k)
        hrev[k] = std::exp(-prob.e.lambda * lg[2 * N - k]);  // h_{2N-k}

    const std::vector<double> conv = convolve(w, hrev);
    TruncatedSequence img;
    img.values.resize(N);
    for (std::size_t nn = 1; nn <= N; ++nn)
        img.values[nn - 1] = std::exp(prob.e.nu * lg[nn]) * conv[2 * N - 1 - nn];
    return weighted_norm(img, prob.target);
}

// p = q = 1, lambda = 1, nu + beta = 0: summing the image against n^beta
// collapses, by reordering the positive double sum, to
// sum_m m^{mu - alpha - 1 - eps} (H_{m+N} - H_m), and the harmonic difference
// obeys a two-term recurrence.  O(N) time, O(1) memory, no sequence stored.
inline double extremal_streaming_harmonic(const Problem& prob, double eps, std::size_t N) {
    const double mu = prob.e.mu;
    const double alpha = prob.source.theta;

    NeumaierSum harmonic;
    for (std::size_t k = 1; k <= N + 1; ++k) harmonic.add(1.0 / static_cast<double>(k));
    double tail = harmonic.value() - 1.0;  // H_{N+1} - H_1

    NeumaierSum num, den;
    const bool same_weight = mu == alpha;
    for (std::size_t m = 1; m <= N; ++m) {
        if (m > 1)
            tail += 1.0 / static_cast<double>(N + m) - 1.0 / static_cast<double>(m);
        const double lm = std::log(static_cast<double>(m));
        const double norm_term = std::exp((-1.0 - eps) * lm);
        den.add(norm_term);
        num.add(same_weight ? norm_term * tail
                            : std::exp((mu - alpha - 1.0 - eps) * lm) * tail);
    }
    return num.value() / den.value();
}

}  // namespace detail

// Lower bound for the operator norm from the near-critical test sequence
// a_n = n^{-(alpha+1+eps)/p} truncated at N.  Truncation keeps the quotient a
// genuine Rayleigh quotient, so the value is unconditionally a lower bound;
// larger N and smaller eps only tighten it.
inline double extremal_lower_bound(const Problem& prob, double eps, std::size_t N) {
    if (prob.setting != Setting::discrete)
        throw std::invalid_argument("extremal_lower_bound: problem is not discrete");
    if (prob.source.is_sup() || prob.target.is_sup() || prob.source.p != prob.target.p)
        throw std::invalid_argument("extremal_lower_bound: requires p = q finite");

    const double p = prob.source.p;
    const bool harmonic = p == 1.0 && prob.e.lambda == 1.0 &&
                          prob.e.nu + prob.target.theta == 0.0;
    if (harmonic && N >= detail::stream_cutover) {
        if (!(eps > 0.0)) throw std::domain_error("extremal_lower_bound: eps must be > 0");
        return detail::extremal_streaming_harmonic(prob, eps, N);
    }

    const TruncatedSequence a = extremal_sequence(eps, p, prob.source.theta, N);
    const double denom = weighted_norm(a, prob.source);
    const double num = N >= detail::fft_cutover
                           ? detail::image_norm_fft(a, prob)
                           : weighted_norm(apply(a, prob.e, N), prob.target);
    return num / denom;
}

// Quotient ||H a||_{q,beta} / ||a||_{p,alpha} for one explicit test vector,
// with the image truncated at out_len.
inline double rayleigh_quotient(const TruncatedSequence& a, const Problem& prob,
                                std::size_t out_len) {
    if (prob.setting != Setting::discrete)
        throw std::invalid_argument("rayleigh_quotient: problem is not discrete");
    if (prob.source.is_sup() || prob.target.is_sup())
        throw std::invalid_argument("rayleigh_quotient: requires finite p and q");
    const double denom = weighted_norm(a, prob.source);
    if (denom == 0.0) throw std::domain_error("rayleigh_quotient: zero test vector");
    return weighted_norm(apply(a, prob.e, out_len), prob.target) / denom;
}

// Largest singular value of the N-section of the weight-conjugated kernel,
// equal to the operator norm of the truncated problem when p = q = 2.  Power
// iteration on M^T M from the normalized all-ones vector; the estimate
// ||M v|| is nondecreasing and always a valid lower bound for the section
// norm, so early stopping stays sound.
inline double spectral_norm_l2(const Problem& prob, std::size_t N, std::size_t iters) {
    if (iters < 1) throw std::domain_error("spectral_norm_l2: iters must be >= 1");
    const DenseMatrix M = assemble_l2_matrix(prob, N);

    std::vector<double> v(N, 1.0 / std::sqrt(static_cast<double>(N)));
    std::vector<double> u(N), w(N);
    double est = 0.0;
    double prev = -1.0;
    for (std::size_t it = 0; it < iters; ++it) {
        for (std::size_t i = 0; i < N; ++i) {
            NeumaierSum row;
            for (std::size_t j = 0; j < N; ++j) row.add(M(i, j) * v[j]);
            u[i] = row.value();
        }
        double uu = 0.0;
        for (double x : u) uu += x * x;
        est = std::sqrt(uu);
        if (std::fabs(est - prev) < 1e-10) break;
        prev = est;

        std::fill(w.begin(), w.end(), 0.0);
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) w[j] += M(i, j) * u[i];
        double ww = 0.0;
        for (double x : w) ww += x * x;
        const double scale = 1.0 / std::sqrt(ww);
        for (std::size_t j = 0; j < N; ++j) v[j] = w[j] * scale;
    }
    return est;
}

struct SchedulePoint {
    double eps = 1e-2;
    std::size_t trunc = 2048;
};

struct NormBracket {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    std::string lower_method;
    std::string upper_method;
    std::optional<SchurParams> schur_params;
    bool upper_certified = true;  // false once the observed sup constant enters
};

// Two-sided enclosure of the operator norm for p = q problems: best lower
// bound across the schedule (plus the spectral section value when p = 2)
// against the best upper bound (parameter search, then the closed-form
// constant when one applies).
inline NormBracket norm_bracket(const Problem& prob, const std::vector<SchedulePoint>& schedule,
                                int grid_density) {
    if (prob.setting != Setting::discrete)
        throw std::invalid_argument("norm_bracket: problem is not discrete");
    if (prob.source.is_sup() || prob.target.is_sup() || prob.source.p != prob.target.p)
        throw std::invalid_argument("norm_bracket: requires p = q finite");
    if (schedule.empty()) throw std::invalid_argument("norm_bracket: empty schedule");

    NormBracket br;
    char label[96];
    for (const auto& pt : schedule) {
        const double v = extremal_lower_bound(prob, pt.eps, pt.trunc);
        if (v > br.lower) {
            br.lower = v;
            std::snprintf(label, sizeof label, "extremal eps=%g N=%zu", pt.eps, pt.trunc);
            br.lower_method = label;
        }
    }
    if (prob.source.p == 2.0) {
        std::size_t nspec = 1;
        for (const auto& pt : schedule) nspec = std::max(nspec, pt.trunc);
        nspec = std::min<std::size_t>(nspec, 2048);
        const double v = spectral_norm_l2(prob, nspec, 2000);
        if (v > br.lower) {
            br.lower = v;
            std::snprintf(label, sizeof label, "spectral N=%zu", nspec);
            br.lower_method = label;
        }
    }

    const SchurSearchResult search = optimize_schur(prob, grid_density);
    if (search.admissible_found && search.best < br.upper) {
        br.upper = search.best;
        std::snprintf(label, sizeof label, "schur s=%.6g t=%.6g A=%.6g", search.params.s,
                      search.params.t, search.params.a);
        br.upper_method = label;
        br.schur_params = search.params;
        br.upper_certified = prob.source.p > 1.0;
    }
    // When the hypotheses grant a sharp constant it equals the norm exactly,
    // and the Schur family can only sit above it; a search value that lands
    // below is rounding noise, so the constant wins outright.
    if (const auto sharp = sharp_norm(prob); sharp) {
        br.upper = *sharp;
        br.upper_method = "sharp-constant";
        br.schur_params.reset();
        br.upper_certified = true;
    }

    if (br.lower > br.upper + 1e-9)
        throw std::logic_error("norm_bracket: lower bound exceeds upper bound");
    return br;
}

}  // namespace hilbertop
