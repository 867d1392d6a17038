#include "lifeins/numerics/roots.hpp"

#include <cmath>

#include "lifeins/errors.hpp"

namespace lifeins::numerics {

double bisect(const std::function<double(double)>& f, double lo, double hi, double abs_tol) {
    if (!(lo <= hi)) throw DomainError("bisect requires lo <= hi");
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi)) throw DomainError("bisect: root not bracketed");
    // The cap only matters for pathological tolerances below the spacing of doubles.
    for (int it = 0; it < 200 && hi - lo > abs_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace lifeins::numerics
