#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hilbertop/classifier.hpp"
#include "hilbertop/config.hpp"
#include "hilbertop/continuous.hpp"
#include "hilbertop/normest.hpp"

namespace hilbertop::cli {

// Process exit codes.  0/1/2 mirror the three verdicts; 64 and 73 follow the
// usual usage-error and cantcreat conventions.
constexpr int exit_bounded = 0;
constexpr int exit_unbounded = 1;
constexpr int exit_inapplicable = 2;
constexpr int exit_bad_flags = 64;
constexpr int exit_unwritable = 73;

inline int exit_code(Status s) {
    switch (s) {
        case Status::bounded:
            return exit_bounded;
        case Status::unbounded:
            return exit_unbounded;
        default:
            return exit_inapplicable;
    }
}

// Full binary64 round-trip rendering, used for every number in CSV output.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// p and q are rendered as strings so that "inf" has a stable representation.
inline std::string format_exponent(double v) {
    return std::isinf(v) ? "inf" : format_double(v);
}

inline nlohmann::json inputs_json(const Problem& prob) {
    nlohmann::json in;
    in["setting"] = prob.setting == Setting::discrete ? "discrete" : "continuous";
    in["lambda"] = prob.e.lambda;
    in["mu"] = prob.e.mu;
    in["nu"] = prob.e.nu;
    in["p"] = format_exponent(prob.source.p);
    in["alpha"] = prob.source.theta;
    in["q"] = format_exponent(prob.target.p);
    in["beta"] = prob.target.theta;
    return in;
}

// The classify schema is fixed: the same five keys with the same types appear
// for every verdict, with null standing in for an absent sharp constant.
inline nlohmann::json verdict_json(const Problem& prob, const Verdict& v) {
    nlohmann::json j;
    j["status"] = to_string(v.status);
    j["theorem"] = v.rule;
    j["sharp_norm"] = v.sharp_norm ? nlohmann::json(*v.sharp_norm) : nlohmann::json(nullptr);
    j["advisory"] = {{"applicable", v.advisory.applicable},
                     {"condition_holds", v.advisory.condition_holds}};
    j["inputs"] = inputs_json(prob);
    return j;
}

inline int cmd_classify(const Problem& prob, std::ostream& out, std::ostream& err) {
    const Verdict v = classify(prob);
    out << verdict_json(prob, v).dump(2) << "\n";
    if (v.status == Status::inapplicable && !v.reason.empty())
        err << "inapplicable: " << v.reason << "\n";
    return exit_code(v.status);
}

namespace detail {

// Why a bounded discrete p = q verdict still has no sharp constant, phrased as
// the first failing hypothesis.
inline std::string sharp_blocker(const Problem& prob) {
    const double p = prob.source.p;
    const double lambda = prob.e.lambda, mu = prob.e.mu, nu = prob.e.nu;
    const double alpha = prob.source.theta, beta_w = prob.target.theta;
    const double target = mu + nu + 1.0 + (beta_w - alpha) / p;
    if (hilbertop::detail::scaled_residual(lambda, target) > hilbertop::detail::equality_rel_tol)
        return "exponents sit off the scaling line lambda = mu + nu + 1 + (beta - alpha)/p";
    if (!(-p * nu < beta_w + 1.0 && beta_w + 1.0 < p * (lambda - nu)))
        return "sharp-constant window -p nu < beta + 1 < p(lambda - nu) fails";
    if (!(alpha + 1.0 >= p * mu && beta_w + 1.0 <= p * (1.0 - nu)))
        return "weight-balance conditions alpha + 1 >= p mu and beta + 1 <= p(1 - nu) fail";
    return "the sharp constant's Beta arguments fall outside (0, inf)";
}

inline bool pq_finite_equal(const Problem& prob) {
    return !prob.source.is_sup() && !prob.target.is_sup() && prob.source.p == prob.target.p;
}

inline bool pq_search_shape(const Problem& prob) {
    return !prob.source.is_sup() && !prob.target.is_sup() && prob.source.p <= prob.target.p;
}

}  // namespace detail

// One JSON schema serves every method: `value` is the headline number, the
// lower/upper pair records whatever side of the norm the method certifies,
// and null marks a side the method does not provide.
inline int cmd_norm(const Problem& prob, const std::string& method, const Config& cfg,
                    std::ostream& out, std::ostream& err) {
    const bool continuous = prob.setting == Setting::continuous;
    nlohmann::json j;
    j["method"] = method;
    j["value"] = nullptr;
    j["lower"] = nullptr;
    j["upper"] = nullptr;
    j["lower_method"] = "";
    j["upper_method"] = "";
    j["certified"] = false;
    j["inputs"] = inputs_json(prob);

    const auto reject = [&err](const std::string& reason) {
        err << "method not applicable: " << reason << "\n";
        return exit_inapplicable;
    };

    try {
        if (method == "sharp") {
            if (!detail::pq_finite_equal(prob))
                return reject("the closed-form norm requires p = q finite");
            const Verdict v = classify(prob);
            if (!v.sharp_norm) {
                if (v.status == Status::bounded && !continuous)
                    return reject(detail::sharp_blocker(prob));
                if (v.status == Status::bounded)
                    return reject("the sharp constant's Beta arguments fall outside (0, inf)");
                return reject(v.status == Status::unbounded
                                  ? "operator is unbounded, no finite norm exists"
                                  : "no boundedness criterion applies: " + v.reason);
            }
            j["value"] = j["lower"] = j["upper"] = *v.sharp_norm;
            j["lower_method"] = j["upper_method"] = "sharp-constant";
            j["certified"] = true;
        } else if (method == "schur") {
            if (!detail::pq_search_shape(prob))
                return reject("the parameter search requires 1 <= p <= q < inf");
            const SchurSearchResult r = continuous
                                            ? optimize_continuous_schur(prob, cfg.grid_density)
                                            : optimize_schur(prob, cfg.grid_density);
            char label[96];
            if (r.admissible_found) {
                std::snprintf(label, sizeof label, "schur s=%.6g t=%.6g A=%.6g", r.params.s,
                              r.params.t, r.params.a);
                j["value"] = j["upper"] = r.best;
                j["upper_method"] = label;
                j["certified"] = continuous || prob.source.p > 1.0;
            } else {
                j["upper_method"] = r.note;
            }
        } else if (method == "extremal") {
            if (!detail::pq_finite_equal(prob))
                return reject("test-vector lower bounds require p = q finite");
            char label[64];
            double v = 0.0;
            if (continuous) {
                if (!(cfg.eps <= 1.0))
                    return reject("the half-line lower bound needs eps <= 1 (cutoff z = 1/eps)");
                v = continuous_lower_bound(prob, 1.0 / cfg.eps);
                std::snprintf(label, sizeof label, "extremal z=%g", 1.0 / cfg.eps);
            } else {
                v = extremal_lower_bound(prob, cfg.eps, cfg.trunc);
                std::snprintf(label, sizeof label, "extremal eps=%g N=%zu", cfg.eps, cfg.trunc);
            }
            j["value"] = j["lower"] = v;
            j["lower_method"] = label;
            j["certified"] = true;
        } else if (method == "spectral") {
            if (continuous || !detail::pq_finite_equal(prob) || prob.source.p != 2.0)
                return reject("finite sections require the discrete p = q = 2 case");
            const double v = spectral_norm_l2(prob, cfg.trunc, cfg.iters);
            j["value"] = j["lower"] = v;
            j["lower_method"] = "spectral N=" + std::to_string(cfg.trunc);
            j["certified"] = true;
        } else if (method == "bracket") {
            if (!detail::pq_finite_equal(prob))
                return reject("norm brackets require p = q finite");
            NormBracket br;
            if (continuous) {
                br = continuous_norm_bracket(prob, cfg.z_schedule, cfg.grid_density);
            } else {
                std::vector<SchedulePoint> schedule;
                for (double e : cfg.eps_schedule) schedule.push_back({e, cfg.trunc});
                br = norm_bracket(prob, schedule, cfg.grid_density);
            }
            j["lower"] = br.lower;
            j["upper"] = std::isfinite(br.upper) ? nlohmann::json(br.upper)
                                                 : nlohmann::json(nullptr);
            j["lower_method"] = br.lower_method;
            j["upper_method"] = br.upper_method;
            j["certified"] = br.upper_certified && std::isfinite(br.upper);
        } else {
            err << "unknown method '" << method
                << "' (expected sharp|schur|extremal|spectral|bracket)\n";
            return exit_bad_flags;
        }
    } catch (const std::exception& e) {
        return reject(e.what());
    }

    out << j.dump(2) << "\n";
    return 0;
}

// A one-dimensional parameter sweep: which exponent varies, over which grid,
// around which fixed problem, and where the CSV goes.
struct SweepSpec {
    std::string varying;  // lambda | mu | nu | alpha | beta
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;
    Problem base;
    bool with_schur = false;
    bool with_lower = false;
    std::string output_path;
};

inline std::vector<double> sweep_values(double start, double stop, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("sweep: step must be > 0");
    if (!(start <= stop)) throw std::invalid_argument("sweep: start must be <= stop");
    // The slack keeps grids like [0.5, 3] / 0.25 from losing their last row
    // to rounding; a row never lands more than ~1e-9 steps past stop.
    const auto n = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    for (long long i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
}

inline double* sweep_field(Problem& prob, const std::string& name) {
    if (name == "lambda") return &prob.e.lambda;
    if (name == "mu") return &prob.e.mu;
    if (name == "nu") return &prob.e.nu;
    if (name == "alpha") return &prob.source.theta;
    if (name == "beta") return &prob.target.theta;
    return nullptr;
}

// The header is fixed; the schur_best and lower columns stay empty unless
// requested, and any cell whose computation does not apply is left empty.
inline int cmd_sweep(const SweepSpec& spec, const Config& cfg, std::ostream& err) {
    std::vector<double> values;
    Problem probe = spec.base;
    try {
        if (!sweep_field(probe, spec.varying))
            throw std::invalid_argument("sweep: unknown parameter '" + spec.varying +
                                        "' (expected lambda|mu|nu|alpha|beta)");
        values = sweep_values(spec.start, spec.stop, spec.step);
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return exit_bad_flags;
    }

    std::ofstream out(spec.output_path);
    if (!out) {
        err << "cannot write '" << spec.output_path << "'\n";
        return exit_unwritable;
    }
    out << "value,status,sharp_norm,schur_best,lower\n";

    const bool continuous = spec.base.setting == Setting::continuous;
    for (double value : values) {
        Problem prob = spec.base;
        *sweep_field(prob, spec.varying) = value;
        const Verdict v = classify(prob);

        std::string schur_cell, lower_cell;
        if (spec.with_schur && detail::pq_search_shape(prob)) {
            try {
                const SchurSearchResult r = continuous
                                                ? optimize_continuous_schur(prob, cfg.grid_density)
                                                : optimize_schur(prob, cfg.grid_density);
                if (r.admissible_found) schur_cell = format_double(r.best);
            } catch (const std::exception&) {
            }
        }
        if (spec.with_lower && detail::pq_finite_equal(prob)) {
            try {
                const double lo = continuous ? continuous_lower_bound(prob, 1.0 / cfg.eps)
                                             : extremal_lower_bound(prob, cfg.eps, cfg.trunc);
                lower_cell = format_double(lo);
            } catch (const std::exception&) {
            }
        }

        out << format_double(value) << ',' << to_string(v.status) << ','
            << (v.sharp_norm ? format_double(*v.sharp_norm) : std::string()) << ','
            << schur_cell << ',' << lower_cell << '\n';
    }

    out.flush();
    if (!out.good()) {
        err << "write to '" << spec.output_path << "' failed\n";
        return exit_unwritable;
    }
    return 0;
}

}  // namespace hilbertop::cli
