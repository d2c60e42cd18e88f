// A short tour of the library: classify a few parameter tuples, then enclose
// the operator norm of the classical kernel from both sides.

#include <cstdio>

#include "hilbertop/classifier.hpp"
#include "hilbertop/continuous.hpp"
#include "hilbertop/normest.hpp"

using namespace hilbertop;

namespace {

Problem make(double lambda, double mu, double nu, double p, double alpha, double q,
             double beta, Setting setting) {
    return {Exponents{lambda, mu, nu}, SpaceIndex(p, alpha), SpaceIndex(q, beta), setting};
}

void show(const char* label, const Problem& prob) {
    const Verdict v = classify(prob);
    std::printf("%-34s %-12s", label, to_string(v.status));
    if (v.sharp_norm)
        std::printf(" norm = %.12f", *v.sharp_norm);
    else if (!v.reason.empty())
        std::printf(" (%s)", v.reason.c_str());
    std::printf("\n");
}

}  // namespace

int main() {
    std::printf("verdicts\n--------\n");
    show("classical, p = q = 2", make(1, 0, 0, 2, 0, 2, 0, Setting::discrete));
    show("classical, p = q = 1", make(1, 0, 0, 1, 0, 1, 0, Setting::discrete));
    show("lambda = 2, discrete", make(2, 0, 0, 2, 0, 2, 0, Setting::discrete));
    show("lambda = 2, half line", make(2, 0, 0, 2, 0, 2, 0, Setting::continuous));
    show("weighted, p = 2 -> q = 3", make(2, 0.25, -0.25, 2, 0.5, 3, 0.25, Setting::discrete));
    show("p = 2 -> q = 1 (no criterion)", make(1, 0, 0, 2, 0, 1, 0, Setting::discrete));

    std::printf("\nnorm enclosures\n---------------\n");
    const Problem classical = make(1, 0, 0, 2, 0, 2, 0, Setting::discrete);
    const NormBracket br =
        norm_bracket(classical, {{1e-1, 1024}, {1e-2, 2048}, {1e-3, 2048}}, 48);
    std::printf("classical p = 2:   %.9f <= norm <= %.9f\n", br.lower, br.upper);
    std::printf("                   lower from %s, upper from %s\n", br.lower_method.c_str(),
                br.upper_method.c_str());

    Problem squared = classical;
    squared.e.lambda = 2;
    const NormBracket br2 = norm_bracket(squared, {{1e-2, 2048}}, 48);
    std::printf("lambda = 2:        %.9f <= norm <= %.9f (%s)\n", br2.lower, br2.upper,
                br2.upper_certified ? "certified" : "heuristic");

    Problem half = classical;
    half.setting = Setting::continuous;
    const NormBracket br3 = continuous_norm_bracket(half, {1, 10, 100, 1000}, 48);
    std::printf("classical, half line: %.9f <= norm <= %.9f\n", br3.lower, br3.upper);
    return 0;
}
