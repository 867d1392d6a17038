#include "lifeins/numerics/ode.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "lifeins/errors.hpp"

namespace lifeins::numerics {

namespace {

double checked(const std::function<double(double)>& f, double t, const char* name) {
    const double v = f(t);
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "ODE coefficient " << name << " not finite at t=" << t;
        throw AccuracyError(os.str());
    }
    return v;
}

}  // namespace

Curve solve_backward_linear_ode(const std::function<double(double)>& H,
                                const std::function<double(double)>& K, double terminal,
                                std::span<const double> grid) {
    if (grid.size() < 2) throw InputError("ODE grid needs at least two knots");
    if (!std::isfinite(terminal)) throw InputError("ODE terminal value not finite");
    const std::size_t n = grid.size();
    std::vector<double> y(n), slope(n);

    auto rhs = [&](double t, double v) { return checked(H, t, "H") * v - checked(K, t, "K"); };

    y[n - 1] = terminal;
    slope[n - 1] = rhs(grid[n - 1], terminal);
    for (std::size_t k = n - 1; k > 0; --k) {
        const double t1 = grid[k];
        const double h = grid[k - 1] - t1;  // negative step
        const double yk = y[k];
        const double k1 = slope[k];
        const double k2 = rhs(t1 + 0.5 * h, yk + 0.5 * h * k1);
        const double k3 = rhs(t1 + 0.5 * h, yk + 0.5 * h * k2);
        const double k4 = rhs(t1 + h, yk + h * k3);
        y[k - 1] = yk + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        slope[k - 1] = rhs(grid[k - 1], y[k - 1]);
        if (!std::isfinite(y[k - 1]) || !std::isfinite(slope[k - 1])) {
            std::ostringstream os;
            os << "ODE solution overflowed at t=" << grid[k - 1];
            throw AccuracyError(os.str());
        }
    }
    return Curve::hermite(std::vector<double>(grid.begin(), grid.end()), std::move(y), std::move(slope));
}

}  // namespace lifeins::numerics
