// Compensated (Neumaier) summation.  Every sum over primes in this project
// goes through this accumulator so that results are reproducible to
// ~1e-16 relative regardless of band size.

#pragma once

#include <cmath>

namespace zrf {

struct NeumaierSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }

    double value() const { return sum + comp; }
};

}  // namespace zrf
