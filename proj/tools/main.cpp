#include <CLI11.hpp>

#include <iostream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "hilbertop/cli_support.hpp"
#include "hilbertop/verify.hpp"

namespace {

using namespace hilbertop;

struct ProblemFlags {
    std::string p = "2";
    std::string q = "2";
    double lambda = 1, mu = 0, nu = 0, alpha = 0, beta = 0;
    bool continuous = false;
    CLI::Option* opts[5] = {};  // lambda, mu, nu, alpha, beta, for presence checks
};

double parse_space_exponent(const std::string& s, const char* flag) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    double v = std::numeric_limits<double>::quiet_NaN();
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size())
        throw std::invalid_argument(std::string(flag) + ": expected a number or 'inf', got '" +
                                    s + "'");
    return v;
}

Problem build_problem(const ProblemFlags& f) {
    return {Exponents{f.lambda, f.mu, f.nu},
            SpaceIndex(parse_space_exponent(f.p, "--p"), f.alpha),
            SpaceIndex(parse_space_exponent(f.q, "--q"), f.beta),
            f.continuous ? Setting::continuous : Setting::discrete};
}

void add_problem_flags(CLI::App* cmd, ProblemFlags& f, bool exponents_required) {
    cmd->add_option("--p", f.p, "source space exponent (number >= 1 or 'inf')")->required();
    cmd->add_option("--q", f.q, "target space exponent (number >= 1 or 'inf')")->required();
    f.opts[0] = cmd->add_option("--lambda", f.lambda, "kernel decay exponent");
    f.opts[1] = cmd->add_option("--mu", f.mu, "row weight exponent of the kernel");
    f.opts[2] = cmd->add_option("--nu", f.nu, "column weight exponent of the kernel");
    f.opts[3] = cmd->add_option("--alpha", f.alpha, "source space weight exponent");
    f.opts[4] = cmd->add_option("--beta", f.beta, "target space weight exponent");
    if (exponents_required)
        for (CLI::Option* o : f.opts) o->required();
    cmd->add_flag("--continuous", f.continuous,
                  "half-line integral operator instead of the series");
}

struct ConfigFlags {
    std::string path;
    unsigned long long trunc = 0;
    double eps = 0;
    int grid = 0;
    unsigned long long iters = 0;
    CLI::Option *o_path, *o_trunc, *o_eps, *o_grid, *o_iters;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& c) {
    c.o_path = cmd->add_option("--config", c.path, "key = value configuration file");
    c.o_trunc = cmd->add_option("--trunc", c.trunc, "truncation length N");
    c.o_eps = cmd->add_option("--eps", c.eps, "extremal epsilon (half-line cutoff is z = 1/eps)");
    c.o_grid = cmd->add_option("--grid", c.grid, "parameter search grid density");
    c.o_iters = cmd->add_option("--iters", c.iters, "power iteration cap");
}

Config resolve_config(const ConfigFlags& c) {
    Config cfg;
    if (c.o_path->count()) cfg = load_config_file(c.path, cfg);
    if (c.o_trunc->count()) {
        if (c.trunc < 1) throw std::invalid_argument("--trunc must be >= 1");
        cfg.trunc = c.trunc;
    }
    if (c.o_eps->count()) {
        if (!(c.eps > 0)) throw std::invalid_argument("--eps must be > 0");
        cfg.eps = c.eps;
    }
    if (c.o_grid->count()) {
        if (c.grid < 2) throw std::invalid_argument("--grid must be >= 2");
        cfg.grid_density = c.grid;
    }
    if (c.o_iters->count()) {
        if (c.iters < 1) throw std::invalid_argument("--iters must be >= 1");
        cfg.iters = c.iters;
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"boundedness verdicts and certified norm bounds for Hilbert-type operators"};
    app.require_subcommand(1);

    auto* cls = app.add_subcommand("classify", "decide boundedness, print the JSON verdict");
    ProblemFlags cls_f;
    add_problem_flags(cls, cls_f, true);

    auto* norm = app.add_subcommand("norm", "compute a norm estimate by the chosen method");
    ProblemFlags norm_f;
    std::string method;
    ConfigFlags norm_c;
    add_problem_flags(norm, norm_f, true);
    norm->add_option("--method", method, "sharp | schur | extremal | spectral | bracket")
        ->required();
    add_config_flags(norm, norm_c);

    auto* sweep = app.add_subcommand("sweep", "vary one exponent, write a CSV of verdicts");
    ProblemFlags sweep_f;
    ConfigFlags sweep_c;
    std::string param, out_path;
    double start = 0, stop = 0, step = 1;
    bool with_schur = false, with_lower = false;
    add_problem_flags(sweep, sweep_f, false);
    sweep->add_option("--param", param, "which of lambda|mu|nu|alpha|beta varies")->required();
    sweep->add_option("--start", start, "first grid value")->required();
    sweep->add_option("--stop", stop, "last grid value")->required();
    sweep->add_option("--step", step, "grid spacing (> 0)")->required();
    sweep->add_option("--out", out_path, "output CSV path")->required();
    sweep->add_flag("--with-schur", with_schur, "fill the schur_best column");
    sweep->add_flag("--with-lower", with_lower, "fill the lower column");
    add_config_flags(sweep, sweep_c);

    auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
    std::vector<std::string> only;
    bool list = false;
    verify->add_option("--only", only, "run just the named criteria");
    verify->add_flag("--list", list, "print criterion identifiers without running");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // --help and friends
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return hilbertop::cli::exit_bad_flags;
    }

    try {
        if (app.got_subcommand(cls))
            return cli::cmd_classify(build_problem(cls_f), std::cout, std::cerr);

        if (app.got_subcommand(norm))
            return cli::cmd_norm(build_problem(norm_f), method, resolve_config(norm_c),
                                 std::cout, std::cerr);

        if (app.got_subcommand(sweep)) {
            // Every exponent except the varying one must be pinned explicitly.
            static const char* names[] = {"--lambda", "--mu", "--nu", "--alpha", "--beta"};
            for (int i = 0; i < 5; ++i) {
                if (names[i] + 2 == param) continue;
                if (sweep_f.opts[i]->count() == 0) {
                    std::cerr << names[i] << " is required when it is not the swept parameter\n";
                    return hilbertop::cli::exit_bad_flags;
                }
            }
            cli::SweepSpec spec{param,       start,      stop,     step,
                                build_problem(sweep_f), with_schur, with_lower, out_path};
            return cli::cmd_sweep(spec, resolve_config(sweep_c), std::cerr);
        }

        if (app.got_subcommand(verify)) {
            if (list) {
                for (const std::string& id : verify_ids()) std::cout << id << "\n";
                return 0;
            }
            const VerifyReport report = run_verification(only);
            print_report(report, std::cout);
            return report.all_passed ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return hilbertop::cli::exit_bad_flags;
    }
    return hilbertop::cli::exit_bad_flags;
}
