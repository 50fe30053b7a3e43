#ifndef ERGOLAT_TEST_UTIL_HPP
#define ERGOLAT_TEST_UTIL_HPP

#include <cmath>

namespace testutil {

// True when a and b are equal or adjacent doubles (at most one ulp apart).
inline bool within_one_ulp(double a, double b) {
    if (a == b) return true;
    return a == std::nextafter(b, a);
}

// Composite Simpson quadrature over [lo, hi] with n (even) subintervals:
// the independent oracle for closed-form integrals in these tests.
template <class F>
double simpson(F f, double lo, double hi, int n) {
    const double h = (hi - lo) / n;
    double acc = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) acc += f(lo + i * h) * ((i % 2 == 1) ? 4.0 : 2.0);
    return acc * h / 3.0;
}

} // namespace testutil

#endif // ERGOLAT_TEST_UTIL_HPP
