#include "lifeins/numerics/curve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lifeins/errors.hpp"

namespace lifeins::numerics {

namespace {

void check_knots(const std::vector<double>& knots, std::size_t n_values) {
    if (knots.empty()) throw InputError("curve needs at least one knot");
    if (knots.size() != n_values) throw InputError("curve knot/value count mismatch");
    for (std::size_t k = 0; k < knots.size(); ++k) {
        if (!std::isfinite(knots[k])) throw InputError("curve knots must be finite");
        if (k > 0 && !(knots[k] > knots[k - 1]))
            throw InputError("curve knots must be strictly increasing");
    }
}

void check_finite(const std::vector<double>& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw InputError(std::string("curve ") + what + " must be finite");
}

}  // namespace

Curve::Curve(Interpolation interp, std::vector<double> knots, std::vector<double> values,
             std::vector<double> slopes)
    : interp_(interp), knots_(std::move(knots)), values_(std::move(values)), slopes_(std::move(slopes)) {
    check_knots(knots_, values_.size());
    check_finite(values_, "values");
    check_finite(slopes_, "slopes");
    const std::size_t n = knots_.size();
    if (n >= 2) {
        const double span = knots_.back() - knots_.front();
        const double h = span / static_cast<double>(n - 1);
        uniform_ = true;
        for (std::size_t k = 0; k < n && uniform_; ++k)
            uniform_ = std::abs(knots_[k] - (knots_.front() + static_cast<double>(k) * h)) <= 1e-12 * span;
        inv_step_ = 1.0 / h;
    }
}

Curve Curve::constant(double value) { return Curve(Interpolation::Constant, {0.0}, {value}, {}); }

Curve Curve::step(std::vector<double> knots, std::vector<double> values) {
    return Curve(Interpolation::Constant, std::move(knots), std::move(values), {});
}

Curve Curve::linear(std::vector<double> knots, std::vector<double> values) {
    return Curve(Interpolation::Linear, std::move(knots), std::move(values), {});
}

Curve Curve::monotone_cubic(std::vector<double> knots, std::vector<double> values) {
    check_knots(knots, values.size());
    auto slopes = monotone_slopes(knots, values);
    return Curve(Interpolation::MonotoneCubic, std::move(knots), std::move(values), std::move(slopes));
}

Curve Curve::hermite(std::vector<double> knots, std::vector<double> values, std::vector<double> slopes) {
    if (slopes.size() != values.size()) throw InputError("hermite curve slope count mismatch");
    return Curve(Interpolation::Hermite, std::move(knots), std::move(values), std::move(slopes));
}

bool Curve::contains(double t) const noexcept {
    if (is_constant()) return true;
    const double slack = 1e-10 * std::max(1.0, back() - front());
    return t >= front() - slack && t <= back() + slack;
}

double Curve::clamp_to_domain(double t) const {
    if (!contains(t)) {
        std::ostringstream os;
        os << "curve evaluated at t=" << t << " outside [" << front() << ", " << back() << "]";
        throw DomainError(os.str());
    }
    return std::clamp(t, front(), back());
}

std::size_t Curve::locate(double t) const noexcept {
    const std::size_t last = knots_.size() - 2;
    std::size_t k;
    if (uniform_) {
        const double pos = (t - knots_.front()) * inv_step_;
        k = pos <= 0.0 ? 0 : std::min(static_cast<std::size_t>(pos), last);
        while (k > 0 && t < knots_[k]) --k;
        while (k < last && t > knots_[k + 1]) ++k;
    } else {
        auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
        const auto idx = static_cast<std::size_t>(std::distance(knots_.begin(), it));
        k = idx == 0 ? 0 : std::min(idx - 1, last);
    }
    return k;
}

double Curve::operator()(double t) const {
    if (is_constant()) {
        if (!std::isfinite(t)) throw DomainError("curve evaluated at non-finite time");
        return values_[0];
    }
    t = clamp_to_domain(t);
    const std::size_t k = locate(t);
    const double t0 = knots_[k], t1 = knots_[k + 1];
    const double y0 = values_[k], y1 = values_[k + 1];
    switch (interp_) {
        case Interpolation::Constant:
            return t >= t1 ? y1 : y0;
        case Interpolation::Linear: {
            const double w = (t - t0) / (t1 - t0);
            return y0 + w * (y1 - y0);
        }
        case Interpolation::MonotoneCubic:
        case Interpolation::Hermite: {
            const double h = t1 - t0;
            const double s = (t - t0) / h;
            const double s2 = s * s, s3 = s2 * s;
            const double h00 = 2 * s3 - 3 * s2 + 1;
            const double h10 = s3 - 2 * s2 + s;
            const double h01 = -2 * s3 + 3 * s2;
            const double h11 = s3 - s2;
            return h00 * y0 + h10 * h * slopes_[k] + h01 * y1 + h11 * h * slopes_[k + 1];
        }
    }
    return y0;
}

double Curve::derivative(double t) const {
    if (is_constant()) return 0.0;
    t = clamp_to_domain(t);
    const std::size_t k = locate(t);
    const double t0 = knots_[k], t1 = knots_[k + 1];
    const double y0 = values_[k], y1 = values_[k + 1];
    const double h = t1 - t0;
    switch (interp_) {
        case Interpolation::Constant:
            return 0.0;
        case Interpolation::Linear:
            return (y1 - y0) / h;
        case Interpolation::MonotoneCubic:
        case Interpolation::Hermite: {
            const double s = (t - t0) / h;
            const double s2 = s * s;
            const double d00 = (6 * s2 - 6 * s) / h;
            const double d10 = 3 * s2 - 4 * s + 1;
            const double d01 = (-6 * s2 + 6 * s) / h;
            const double d11 = 3 * s2 - 2 * s;
            return d00 * y0 + d10 * slopes_[k] + d01 * y1 + d11 * slopes_[k + 1];
        }
    }
    return 0.0;
}

double Curve::min_value() const { return *std::min_element(values_.begin(), values_.end()); }
double Curve::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

std::vector<double> monotone_slopes(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    std::vector<double> m(n, 0.0);
    if (n < 2) return m;
    std::vector<double> delta(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) delta[k] = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
    m[0] = delta[0];
    m[n - 1] = delta[n - 2];
    for (std::size_t k = 1; k + 1 < n; ++k)
        m[k] = delta[k - 1] * delta[k] <= 0.0 ? 0.0 : 0.5 * (delta[k - 1] + delta[k]);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (delta[k] == 0.0) {
            m[k] = 0.0;
            m[k + 1] = 0.0;
            continue;
        }
        const double a = m[k] / delta[k];
        const double b = m[k + 1] / delta[k];
        const double r2 = a * a + b * b;
        if (r2 > 9.0) {
            const double tau = 3.0 / std::sqrt(r2);
            m[k] = tau * a * delta[k];
            m[k + 1] = tau * b * delta[k];
        }
    }
    return m;
}

std::vector<double> uniform_grid(double a, double b, std::size_t n) {
    if (n == 0) throw InputError("uniform grid needs at least one step");
    std::vector<double> g(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        g[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(n);
    g[n] = b;
    return g;
}

}  // namespace lifeins::numerics
