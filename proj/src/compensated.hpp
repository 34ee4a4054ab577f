#pragma once

#include <cmath>

namespace quantsine {

// Neumaier compensated accumulator
struct CompSum {
    double s = 0.0;
    double c = 0.0;
    void add(double v) {
        const double t = s + v;
        if (std::abs(s) >= std::abs(v))
            c += (s - t) + v;
        else
            c += (v - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

}  // namespace quantsine
