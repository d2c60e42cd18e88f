#pragma once

#include <cmath>
#include <stdexcept>

namespace hilbertop {

namespace detail {

// Rational Lanczos approximation to Gamma for double precision
// (g = 6.0246..., 13 terms).  The denominator is z(z+1)...(z+11).
// Accurate to a few ulp over the whole positive axis.
inline double lanczos_sum(double z) {
    static const double num[13] = {
        23531376880.41075968857200767445163675473,
        42919803642.64909876895789904700198885093,
        35711959237.35566804944018545154716670596,
        17921034426.03720969991975575445893111267,
        6039542586.35202800506429164430729792107,
        1439720407.311721673663223072794912393972,
        248874557.8620541565114603864132294232163,
        31426415.58540019438061423162831820536287,
        2876370.628935372441225409051620849613599,
        186056.2653952234950402949897160456992822,
        8071.672002365816210638002902272250613822,
        210.8242777515793458725097339207133627117,
        2.506628274631000270164908177133837338626,
    };
    static const double den[13] = {
        0.0,       39916800.0, 120543840.0, 150917976.0, 105258076.0,
        45995730.0, 13339535.0, 2637558.0,   357423.0,    32670.0,
        1925.0,     66.0,       1.0,
    };
    double s1, s2;
    if (z <= 1.0) {
        s1 = num[12];
        s2 = den[12];
        for (int i = 11; i >= 0; --i) {
            s1 = s1 * z + num[i];
            s2 = s2 * z + den[i];
        }
    } else {
        // Evaluate in 1/z so the Horner recurrences stay well conditioned
        // for large arguments.
        const double r = 1.0 / z;
        s1 = num[0];
        s2 = den[0];
        for (int i = 1; i < 13; ++i) {
            s1 = s1 * r + num[i];
            s2 = s2 * r + den[i];
        }
    }
    return s1 / s2;
}

inline constexpr double lanczos_g = 6.024680040776729583740234375;

}  // namespace detail

// ln Gamma(x) for x > 0.
inline double ln_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("ln_gamma: argument must be positive");
    const double zgh = x + detail::lanczos_g - 0.5;
    return (x - 0.5) * std::log(zgh) - zgh + std::log(detail::lanczos_sum(x));
}

// Euler Beta function B(x, y) for x, y > 0, computed in log space so that
// large arguments do not overflow intermediate Gamma values.
inline double beta(double x, double y) {
    if (!(x > 0.0) || !(y > 0.0)) throw std::domain_error("beta: arguments must be positive");
    return std::exp(ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y));
}

}  // namespace hilbertop
