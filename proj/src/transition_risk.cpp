#include "setr/transition_risk.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "setr/errors.hpp"

namespace setr {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxTailSteps = 400;

bool bounded_support(const ArrivalProcess& a) {
    return std::holds_alternative<PointMass>(a.kind()) ||
           std::holds_alternative<EmpiricalHistogram>(a.kind());
}

void require_same_origin(const ArrivalProcess& a, const PremiumModel& m) {
    SETR_REQUIRE(a.origin() == m.origin(), DomainError,
                 "arrival and premium must share the origin t0");
}

// Walks T outward from the survival-based cutoff until integrand(T) / decay(T)
// (the tail mass of an integrand with local exponential decay rate `decay`)
// is below tail_cutoff * scale.
template <class Value, class Decay>
Truncation search_truncation(const ArrivalProcess& a, const NumericsPolicy& policy, double scale,
                             Value integrand, Decay decay) {
    const Time t0 = a.origin();
    Time t = a.truncation_point(policy.tail_cutoff);
    const double target = 10.0 * policy.tail_cutoff * scale;
    for (int step = 0; step < kMaxTailSteps; ++step) {
        if (a.survival(t) <= policy.hazard_floor)
            throw DivergentExpectation(
                "integrand tail could not be bounded before the arrival survival underflowed");
        const double r = decay(t);
        if (r > 0.0) {
            const double tail = integrand(t) / r;
            if (tail <= target) return Truncation{t, tail};
        }
        t = t0 + 1.25 * (t - t0);
    }
    throw DivergentExpectation("integrand did not decay within the tail search budget");
}

}  // namespace

std::string_view to_string(SetrMethod m) noexcept {
    switch (m) {
        case SetrMethod::WeakConstant: return "weak_constant";
        case SetrMethod::GeometricPremium: return "geometric";
        case SetrMethod::StrongCurvePoint: return "strong_curve";
        case SetrMethod::ResidualCheck: return "residual";
    }
    return "unknown";
}

void check_premium_convergence(const ArrivalProcess& a, const PremiumModel& m,
                               const NumericsPolicy& policy) {
    (void)a.mean();  // finite mean is required even for a constant premium
    const double lambda = m.growth_rate();
    if (lambda == 0.0 || m.initial_rate() == 0.0 || bounded_support(a)) return;

    const std::string diag = "premium growth rate lambda = " + std::to_string(lambda) +
                             " outgrows the " + std::string(a.kind_name()) + " arrival tail";
    if (const auto* e = std::get_if<Exponential>(&a.kind())) {
        if (lambda * e->scale >= 1.0)
            throw DivergentExpectation(diag + " (requires lambda < 1/scale)");
        return;
    }
    if (const auto* w = std::get_if<Weibull>(&a.kind())) {
        if (w->shape < 1.0) throw DivergentExpectation(diag + " (weibull shape < 1)");
        if (w->shape == 1.0 && lambda * w->scale >= 1.0)
            throw DivergentExpectation(diag + " (requires lambda < 1/scale)");
        return;
    }
    // Numerical decay test on log(p(s) * survival(s)) over the last decade.
    const Time t0 = a.origin();
    const Time t_end = a.truncation_point(policy.tail_cutoff);
    const Time t_start = t0 + 0.1 * (t_end - t0);
    constexpr int kProbes = 16;
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kProbes; ++i) {
        const Time t = t_start + (t_end - t_start) * i / kProbes;
        const double log_g = lambda * (t - t0) + std::log(a.survival(t));
        if (!(log_g < prev)) throw DivergentExpectation(diag + " (integrand not decaying)");
        prev = log_g;
    }
    if (a.hazard(t_end, policy.hazard_floor) <= lambda)
        throw DivergentExpectation(diag + " (hazard below growth rate at the truncation point)");
}

Truncation earnings_truncation(const ArrivalProcess& a, const PremiumModel& m,
                               const NumericsPolicy& policy) {
    if (bounded_support(a)) return Truncation{a.breakpoints().back(), 0.0};
    const double lambda = m.growth_rate();
    const double scale = m.initial_rate() * (a.mean() - a.origin());
    if (scale == 0.0) return Truncation{a.truncation_point(policy.tail_cutoff), 0.0};
    return search_truncation(
        a, policy, scale, [&](Time t) { return m.rate_at(t) * a.survival(t); },
        [&](Time t) { return a.hazard(t, policy.hazard_floor) - lambda; });
}

SetrResult expected_premium_earnings(const ArrivalProcess& a, const PremiumModel& m,
                                     const NumericsPolicy& policy) {
    require_same_origin(a, m);
    check_premium_convergence(a, m, policy);
    const SetrMethod method = std::holds_alternative<ConstantPremium>(m.kind())
                                  ? SetrMethod::WeakConstant
                                  : SetrMethod::GeometricPremium;
    const Truncation tr = earnings_truncation(a, m, policy);
    const auto bps = a.breakpoints();
    const QuadratureResult q = integrate_halfline(
        [&](double s) { return m.rate_at(s) * a.survival(s); }, a.origin(), tr.point,
        tr.tail_bound, QuadratureOptions::from(policy), bps);
    return SetrResult{q.value, q.abs_error_estimate, method, q.evaluations};
}

SetrResult setr_weak_constant(const ArrivalProcess& a, double p) {
    SETR_REQUIRE(std::isfinite(p) && p >= 0.0, DomainError,
                 "premium must be finite and nonnegative");
    const double horizon = a.mean() - a.origin();
    const double value = p * horizon;
    return SetrResult{value, 4.0 * kEps * std::fabs(value), SetrMethod::WeakConstant, 0};
}

SetrResult setr_geometric(const ArrivalProcess& a, double p0, double lambda,
                          const NumericsPolicy& policy) {
    const PremiumModel m = PremiumModel::geometric(p0, lambda, a.origin());
    check_premium_convergence(a, m, policy);
    const Time t0 = a.origin();
    Truncation tr{0.0, 0.0};
    if (bounded_support(a)) {
        tr = Truncation{a.breakpoints().back(), 0.0};
    } else if (p0 == 0.0) {
        tr = Truncation{a.truncation_point(policy.tail_cutoff), 0.0};
    } else {
        // f * A decays at rate hazard - A'/A (up to the density's own curvature).
        tr = search_truncation(
            a, policy, p0 * (a.mean() - t0),
            [&](Time t) { return a.pdf(t) * m.cumulative(t); },
            [&](Time t) {
                return a.hazard(t, policy.hazard_floor) - m.rate_at(t) / m.cumulative(t);
            });
    }
    const QuadratureResult q = a.expectation([&](double t) { return m.cumulative(t); }, tr.point,
                                             tr.tail_bound, QuadratureOptions::from(policy));
    return SetrResult{q.value, q.abs_error_estimate, SetrMethod::GeometricPremium, q.evaluations};
}

SetrCurve setr_strong_curve(const ArrivalProcess& a, double p, std::span<const Time> grid,
                            const NumericsPolicy& policy) {
    SETR_REQUIRE(std::isfinite(p) && p >= 0.0, DomainError,
                 "premium must be finite and nonnegative");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        SETR_REQUIRE(std::isfinite(grid[i]) && grid[i] >= a.origin(), DomainError,
                     "curve grid points must be finite and not below t0");
        SETR_REQUIRE(i == 0 || grid[i] > grid[i - 1], DomainError,
                     "curve grid must be strictly increasing");
    }
    SetrCurve curve;
    for (const Time t : grid) {
        if (!a.has_density()) {
            curve.skipped.push_back({t, "arrival has no density (point mass)"});
            continue;
        }
        double h = 0.0;
        try {
            h = a.hazard(t, policy.hazard_floor);
        } catch (const TailUndefined&) {
            curve.skipped.push_back({t, "survival below hazard floor"});
            continue;
        }
        if (!(h > 0.0)) {
            curve.skipped.push_back({t, "density vanishes"});
            continue;
        }
        curve.grid.push_back(t);
        curve.values.push_back(p == 0.0 ? 0.0 : p / h);
    }
    return curve;
}

SetrResult noarb_residual(const ArrivalProcess& a, const PremiumModel& m, double phi,
                          const NumericsPolicy& policy) {
    SETR_REQUIRE(std::isfinite(phi), DomainError, "phi must be finite");
    const SetrResult earned = expected_premium_earnings(a, m, policy);
    return SetrResult{earned.value - phi, earned.abs_error_estimate, SetrMethod::ResidualCheck,
                      earned.evaluations};
}

}  // namespace setr
