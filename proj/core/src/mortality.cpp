#include "lifeins/mortality.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lifeins/errors.hpp"
#include "lifeins/numerics/random.hpp"
#include "lifeins/numerics/roots.hpp"

namespace lifeins {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_time(double t, const char* what) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        std::ostringstream os;
        os << what << ": time must be finite and >= 0 (got " << t << ")";
        throw DomainError(os.str());
    }
}

void require_order(double s, double t, const char* what) {
    require_time(t, what);
    if (!(s >= t) || !std::isfinite(s)) {
        std::ostringstream os;
        os << what << ": requires s >= t (got s=" << s << ", t=" << t << ")";
        throw DomainError(os.str());
    }
}

// Integral of a piecewise-constant hazard over [0, t].
double piecewise_cumulative(const PiecewiseConstantHazard& h, double t) {
    double total = 0.0;
    const std::size_t n = h.times.size();
    for (std::size_t k = 0; k < n && h.times[k] < t; ++k) {
        const double end = k + 1 < n ? std::min(h.times[k + 1], t) : t;
        total += h.rates[k] * (end - h.times[k]);
    }
    return total;
}

}  // namespace

MortalityModel MortalityModel::gompertz_makeham(double base, double scale, double growth) {
    if (!std::isfinite(base) || !std::isfinite(scale) || !std::isfinite(growth))
        throw InputError("Gompertz-Makeham parameters must be finite");
    if (base < 0.0 || scale < 0.0) throw InputError("Gompertz-Makeham base and scale must be >= 0");
    if (!(base + scale > 0.0)) throw InputError("Gompertz-Makeham hazard must be positive");
    if (growth < 0.0) throw InputError("Gompertz-Makeham growth must be >= 0");
    return MortalityModel(GompertzMakeham{base, scale, growth});
}

MortalityModel MortalityModel::piecewise_constant(const std::vector<std::pair<double, double>>& knots) {
    if (knots.empty()) throw InputError("piecewise hazard needs at least one knot");
    PiecewiseConstantHazard h;
    for (const auto& [t, rate] : knots) {
        if (!std::isfinite(t) || !std::isfinite(rate)) throw InputError("piecewise hazard knots must be finite");
        if (!(rate > 0.0)) throw InputError("piecewise hazard rates must be > 0");
        if (!h.times.empty() && !(t > h.times.back()))
            throw InputError("piecewise hazard knot times must be strictly increasing");
        h.times.push_back(t);
        h.rates.push_back(rate);
    }
    if (h.times.front() != 0.0) throw InputError("piecewise hazard must start at t = 0");
    return MortalityModel(std::move(h));
}

MortalityModel MortalityModel::constant(double rate) { return piecewise_constant({{0.0, rate}}); }

double MortalityModel::hazard(double t) const {
    require_time(t, "hazard");
    return std::visit(overloaded{
                          [t](const GompertzMakeham& g) { return g.base + g.scale * std::exp(g.growth * t); },
                          [t](const PiecewiseConstantHazard& h) {
                              auto it = std::upper_bound(h.times.begin(), h.times.end(), t);
                              return h.rates[static_cast<std::size_t>(it - h.times.begin()) - 1];
                          },
                      },
                      form_);
}

double MortalityModel::cumulative_hazard(double t, double s) const {
    require_order(s, t, "cumulative_hazard");
    return std::visit(overloaded{
                          [&](const GompertzMakeham& g) {
                              const double d = s - t;
                              const double gomp = g.growth == 0.0
                                                      ? g.scale * d
                                                      : g.scale / g.growth * std::exp(g.growth * t) *
                                                            std::expm1(g.growth * d);
                              return g.base * d + gomp;
                          },
                          [&](const PiecewiseConstantHazard& h) {
                              return piecewise_cumulative(h, s) - piecewise_cumulative(h, t);
                          },
                      },
                      form_);
}

double MortalityModel::conditional_survival(double s, double t) const {
    return std::exp(-cumulative_hazard(t, s));
}

double MortalityModel::conditional_density(double s, double t) const {
    return hazard(s) * conditional_survival(s, t);
}

double MortalityModel::sample_death_time(double t0, std::uint64_t seed) const {
    const numerics::Philox4x32 gen(seed);
    const auto block = gen({0u, 0u, 0u, 0x6d6f7274u});
    return death_time_from_uniform(t0, numerics::uniform_pair(block).first);
}

double MortalityModel::death_time_from_uniform(double t0, double u) const {
    require_time(t0, "death_time_from_uniform");
    if (!(u > 0.0 && u < 1.0)) throw DomainError("death_time_from_uniform: u must lie in (0, 1)");
    const double target = -std::log(u);
    double span = 1.0;
    while (cumulative_hazard(t0, t0 + span) < target) {
        span *= 2.0;
        if (!std::isfinite(span)) throw AccuracyError("death time bracket diverged");
    }
    return numerics::bisect([&](double tau) { return cumulative_hazard(t0, tau) - target; }, t0, t0 + span,
                            1e-12);
}

}  // namespace lifeins
