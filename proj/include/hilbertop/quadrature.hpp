#pragma once

#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

namespace hilbertop {

// Outcome of an adaptive quadrature run.  abs_error_estimate is the sum of
// the per-interval estimates and is intended as a bound on the true error,
// not just an indicator.
struct QuadResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t subdivisions = 0;
};

namespace detail {

// 15-point Kronrod rule with embedded 7-point Gauss rule on [-1, 1].
// Abscissae in decreasing order; odd indices (plus the centre) carry the
// embedded Gauss points.
inline constexpr double gk15_x[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
inline constexpr double gk15_wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr double gk15_wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

// Evaluates both rules on [a, b].  The returned error estimate follows the
// QUADPACK heuristic: the raw Gauss/Kronrod gap is sharpened through the
// (200 e)^{3/2} rescaling against the centred absolute integral, which in
// practice over- rather than under-states the true error.
template <class F>
double gk15_apply(F& f, double a, double b, double& err) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double fc = f(centre);
    double resg = gk15_wg[3] * fc;
    double resk = gk15_wk[7] * fc;
    double resabs = gk15_wk[7] * std::fabs(fc);

    double fv[7][2];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * gk15_x[j];
        fv[j][0] = f(centre - dx);
        fv[j][1] = f(centre + dx);
        const double fsum = fv[j][0] + fv[j][1];
        resk += gk15_wk[j] * fsum;
        resabs += gk15_wk[j] * (std::fabs(fv[j][0]) + std::fabs(fv[j][1]));
        if (j % 2 == 1) resg += gk15_wg[j / 2] * fsum;
    }

    const double reskh = resk * 0.5;
    double resasc = gk15_wk[7] * std::fabs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += gk15_wk[j] * (std::fabs(fv[j][0] - reskh) + std::fabs(fv[j][1] - reskh));

    resabs *= std::fabs(half);
    resasc *= std::fabs(half);
    err = std::fabs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::fmin(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = 2.220446049250313e-16;
    if (resabs > 0.0) err = std::fmax(err, 50.0 * eps * resabs);
    return resk * half;
}

struct QuadInterval {
    double a, b, value, err;
    bool operator<(const QuadInterval& o) const { return err < o.err; }
};

}  // namespace detail

// Globally adaptive integration of f over the finite interval [a, b]:
// the interval with the worst local error estimate is bisected until the
// total estimate drops below max(abs_tol, rel_tol * |value|) or the
// subdivision cap is hit.  Endpoints are never evaluated, so integrable
// endpoint singularities are fine.
template <class F>
QuadResult integrate(F&& f, double a, double b, double abs_tol = 1e-10,
                     double rel_tol = 1e-10, std::size_t max_subdivisions = 1000000) {
    QuadResult res;
    if (a == b) return res;

    // An abscissa can round exactly onto a singular endpoint once intervals
    // shrink to a few ulp; drop such samples instead of poisoning the sum.
    // The surrounding interval keeps a large error estimate either way.
    auto safe = [&f](double x) {
        const double v = f(x);
        return std::isfinite(v) ? v : 0.0;
    };

    std::priority_queue<detail::QuadInterval> heap;
    double err0 = 0.0;
    const double v0 = detail::gk15_apply(safe, a, b, err0);
    heap.push({a, b, v0, err0});
    double total_value = v0;
    double total_err = err0;

    while (total_err > std::fmax(abs_tol, rel_tol * std::fabs(total_value)) &&
           res.subdivisions < max_subdivisions) {
        const detail::QuadInterval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval no longer splittable in double precision; put it back
            // and stop refining.
            heap.push(worst);
            break;
        }
        double el = 0.0, er = 0.0;
        const double vl = detail::gk15_apply(safe, worst.a, mid, el);
        const double vr = detail::gk15_apply(safe, mid, worst.b, er);
        total_value += (vl + vr) - worst.value;
        total_err += (el + er) - worst.err;
        heap.push({worst.a, mid, vl, el});
        heap.push({mid, worst.b, vr, er});
        ++res.subdivisions;
    }

    // Re-accumulate from the heap to shed cancellation noise gathered by the
    // incremental updates.
    double value = 0.0, err = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        err += heap.top().err;
        heap.pop();
    }
    res.value = value;
    res.abs_error_estimate = err;
    return res;
}

}  // namespace hilbertop
