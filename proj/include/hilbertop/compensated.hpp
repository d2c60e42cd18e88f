#pragma once

#include <cmath>

namespace hilbertop {

// Neumaier's variant of Kahan summation: a running sum plus a correction
// term that also survives the case |x| > |s|.
struct NeumaierSum {
    double s = 0.0;
    double c = 0.0;

    void add(double x) {
        const double t = s + x;
        if (std::fabs(s) >= std::fabs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }

    double value() const { return s + c; }
};

}  // namespace hilbertop
