#pragma once

#include <cmath>
#include <complex>

namespace lpl {

// Neumaier compensated accumulator; error stays O(eps) independent of count.
struct neumaier_sum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

struct complex_sum {
    neumaier_sum re, im;

    void add(std::complex<double> z) {
        re.add(z.real());
        im.add(z.imag());
    }
    std::complex<double> value() const { return {re.value(), im.value()}; }
};

} // namespace lpl
