#include "lifeins/numerics/quadrature.hpp"

#include <cmath>
#include <sstream>

#include "lifeins/errors.hpp"

namespace lifeins::numerics {

namespace {

constexpr int kMaxDepth = 40;
constexpr int kInitialPanels = 8;

struct Simpson {
    const std::function<double(double)>& f;

    double eval(double x) const {
        const double v = f(x);
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "integrand not finite at x=" << x;
            throw DomainError(os.str());
        }
        return v;
    }

    // fa, fm, fb are f at a, (a+b)/2, b; whole is the Simpson estimate on [a,b].
    double refine(double a, double b, double fa, double fm, double fb, double whole, double eps,
                  int depth) const {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = eval(lm), frm = eval(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double diff = left + right - whole;
        if (std::abs(diff) <= 15.0 * eps) return left + right + diff / 15.0;
        if (depth >= kMaxDepth) {
            std::ostringstream os;
            os << "adaptive quadrature did not converge on [" << a << ", " << b << "]";
            throw AccuracyError(os.str());
        }
        return refine(a, m, fa, flm, fm, left, 0.5 * eps, depth + 1) +
               refine(m, b, fm, frm, fb, right, 0.5 * eps, depth + 1);
    }
};

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol) {
    if (!(a <= b)) throw DomainError("integrate_adaptive requires a <= b");
    if (!(tol > 0.0)) throw DomainError("integrate_adaptive requires tol > 0");
    if (a == b) return 0.0;

    Simpson s{f};
    const double h = (b - a) / kInitialPanels;
    double xs[2 * kInitialPanels + 1];
    double fs[2 * kInitialPanels + 1];
    for (int k = 0; k <= 2 * kInitialPanels; ++k) {
        xs[k] = a + 0.5 * h * k;
        fs[k] = s.eval(xs[k]);
    }
    xs[2 * kInitialPanels] = b;

    double coarse = 0.0;
    double panels[kInitialPanels];
    for (int p = 0; p < kInitialPanels; ++p) {
        panels[p] = (xs[2 * p + 2] - xs[2 * p]) / 6.0 * (fs[2 * p] + 4.0 * fs[2 * p + 1] + fs[2 * p + 2]);
        coarse += panels[p];
    }
    // Absolute target from the coarse magnitude; a third of the budget is held back.
    const double eps = tol * (1.0 + std::abs(coarse)) / (1.5 * kInitialPanels);
    double total = 0.0;
    for (int p = 0; p < kInitialPanels; ++p)
        total += s.refine(xs[2 * p], xs[2 * p + 2], fs[2 * p], fs[2 * p + 1], fs[2 * p + 2], panels[p], eps, 0);
    return total;
}

}  // namespace lifeins::numerics
