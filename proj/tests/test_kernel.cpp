#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hilbertop/kernel.hpp"

using namespace hilbertop;

namespace {
// Brute-force reference sums, computed once with compensated summation and
// frozen here.  S(n, tau, lambda) = sum_m m^tau / (m+n)^lambda.
//   S(100, 0.5, 3): 1e8 terms, analytic leftover < 6.7e-13
//   S(50,  2,   5): 1e7 terms, leftover < 5e-15
//   S(10,  1,   4): 1e7 terms, leftover < 5e-15
constexpr double kS_100_05_3 = 0.00039249196442842711;
constexpr double kS_50_2_5 = 3.3333330665216943e-05;
constexpr double kS_10_1_4 = 0.0016584153115795862;
const double kS_1_0_2 = M_PI * M_PI / 6.0 - 1.0;
}  // namespace

TEST_CASE("kernel_eval basics", "[kernel]") {
    CHECK(kernel_eval(1.0, 1.0, {2.0, 0.0, 0.0}) == Catch::Approx(0.25).epsilon(1e-14));
    CHECK(kernel_eval(2.0, 3.0, {3.0, 1.0, 0.5}) ==
          Catch::Approx(2.0 * std::sqrt(3.0) / 125.0).epsilon(1e-13));
    CHECK_THROWS_AS(kernel_eval(0.0, 1.0, {1.0, 0.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(kernel_eval(1.0, -2.0, {1.0, 0.0, 0.0}), std::domain_error);
}

TEST_CASE("integral_I_closed values and domain", "[kernel]") {
    CHECK(integral_I_closed(1.0, 0.0, 2.0) == Catch::Approx(1.0).epsilon(1e-13));
    // y^{tau+1-lambda} B(tau+1, lambda-tau-1) at (2, 0.5, 3)
    CHECK(integral_I_closed(2.0, 0.5, 3.0) ==
          Catch::Approx(std::pow(2.0, -1.5) * beta(1.5, 1.5)).epsilon(1e-13));
    CHECK_THROWS_AS(integral_I_closed(1.0, -1.0, 2.0), divergent_integral);
    CHECK_THROWS_AS(integral_I_closed(1.0, 1.0, 2.0), divergent_integral);
    CHECK_THROWS_AS(integral_I_closed(-1.0, 0.0, 2.0), std::domain_error);
}

TEST_CASE("sum_S_partial brackets the true sum", "[kernel]") {
    // Classical check: S(1, 0, 2) = pi^2/6 - 1.
    auto ps = sum_S_partial(1.0, 0.0, 2.0, 1000000);
    CHECK(ps.terms_used == 1000000);
    CHECK(ps.partial == Catch::Approx(kS_1_0_2).margin(1.1e-6));
    CHECK(ps.partial <= kS_1_0_2);
    CHECK(kS_1_0_2 <= ps.partial + ps.tail_hi + 1e-15);
    CHECK(ps.tail_hi < 1.01e-6);

    // Frozen brute-force oracle at (100, 0.5, 3) for several cut points.
    for (long long terms : {10000LL, 100000LL, 1000000LL}) {
        auto p = sum_S_partial(100.0, 0.5, 3.0, terms);
        CAPTURE(terms);
        CHECK(p.partial <= kS_100_05_3 + 1e-12);
        CHECK(kS_100_05_3 <= p.partial + p.tail_hi + 1e-12);
    }
}

TEST_CASE("sum_S_partial raises the cut into the decreasing region", "[kernel]") {
    // |tau/(lambda-tau)| n = (2/3)*1000, so at least 668 terms are needed
    // before the integral tail comparison applies.
    auto ps = sum_S_partial(1000.0, 2.0, 5.0, 10);
    CHECK(ps.terms_used >= 668);
    CHECK_THROWS_AS(sum_S_partial(1.0, 1.0, 2.0, 100), divergent_series);
}

TEST_CASE("sum_upper_bound dominates the true sum", "[kernel]") {
    // tau <= 0 branch is an exact Beta envelope.
    CHECK(*sum_upper_bound(1.0, 0.0, 2.0) == Catch::Approx(1.0).epsilon(1e-13));
    CHECK(*sum_upper_bound(10.0, 0.0, 2.0) == Catch::Approx(0.1).epsilon(1e-13));
    CHECK(*sum_upper_bound(1.0, 0.0, 2.0) >= kS_1_0_2);

    // tau > 0 branch: peak correction plus Beta remainder.
    CHECK(*sum_upper_bound(100.0, 0.5, 3.0) >= kS_100_05_3);
    CHECK(*sum_upper_bound(50.0, 2.0, 5.0) >= kS_50_2_5);
    CHECK(*sum_upper_bound(10.0, 1.0, 4.0) >= kS_10_1_4);

    // No envelope of this shape once tau <= -1 (series still converges).
    CHECK_FALSE(sum_upper_bound(5.0, -1.2, 1.0).has_value());
    CHECK_THROWS_AS(sum_upper_bound(5.0, 1.0, 2.0), divergent_series);
}

TEST_CASE("sum_lower_bound stays below the true sum", "[kernel]") {
    // cut = 1 for tau = 0, so the bound is exactly int_1^inf (x+n)^{-2} dx.
    CHECK(sum_lower_bound(1.0, 0.0, 2.0) == Catch::Approx(0.5).epsilon(1e-8));
    CHECK(sum_lower_bound(4.0, 0.0, 2.0) == Catch::Approx(0.2).epsilon(1e-8));
    CHECK(sum_lower_bound(1.0, 0.0, 2.0) <= kS_1_0_2);

    CHECK(sum_lower_bound(100.0, 0.5, 3.0) <= kS_100_05_3);
    CHECK(sum_lower_bound(100.0, 0.5, 3.0) > 0.0);
    CHECK(sum_lower_bound(10.0, 1.0, 4.0) <= kS_10_1_4);
    CHECK(sum_lower_bound(10.0, 1.0, 4.0) > 0.0);
    CHECK_THROWS_AS(sum_lower_bound(5.0, 2.0, 3.0), divergent_series);
}

TEST_CASE("bounds sandwich the certified interval on a grid", "[kernel]") {
    const double taus[] = {-0.5, 0.0, 0.5, 2.0};
    const double lams[] = {1.5, 2.0, 3.0, 5.0};
    for (int i = 0; i < 4; ++i)
        for (double n : {1.0, 10.0, 100.0, 1000.0}) {
            const double tau = taus[i], lam = lams[i];
            CAPTURE(tau, lam, n);
            auto ps = sum_S_partial(n, tau, lam, 200000);
            const double lo = sum_lower_bound(n, tau, lam);
            const auto hi = sum_upper_bound(n, tau, lam);
            REQUIRE(hi.has_value());
            // The true sum lives inside [partial, partial + tail_hi]; the
            // closed-form bounds must bracket that interval from outside.
            CHECK(lo <= ps.partial + ps.tail_hi + 1e-14);
            CHECK(ps.partial <= *hi * (1.0 + 1e-12));
        }
}

TEST_CASE("kernel_sup_check criterion and observed grid sup", "[kernel]") {
    // Unbounded case: lambda < a, sup grows with the grid.
    auto bad100 = kernel_sup_check(2.0, 0.0, 1.0, 100);
    auto bad200 = kernel_sup_check(2.0, 0.0, 1.0, 200);
    CHECK_FALSE(bad100.holds);
    CHECK(bad200.observed_sup > bad100.observed_sup);
    CHECK(bad100.observed_sup == Catch::Approx(100.0 * 100.0 / 101.0).epsilon(1e-12));

    // Bounded case: peak sits at m = n = 1 here.
    auto ok = kernel_sup_check(0.5, 0.5, 1.0, 400);
    CHECK(ok.holds);
    CHECK(ok.observed_sup == Catch::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(kernel_sup_check(0.0, 0.0, 1.0, 0), std::domain_error);
}
