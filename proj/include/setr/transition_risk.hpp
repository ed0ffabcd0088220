#pragma once

// Single Event Transition Risk: the one-shot loss phi that balances the
// expected carbon-premium earnings under no-arbitrage.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "setr/arrival.hpp"
#include "setr/numerics.hpp"
#include "setr/premium.hpp"

namespace setr {

enum class SetrMethod { WeakConstant, GeometricPremium, StrongCurvePoint, ResidualCheck };

std::string_view to_string(SetrMethod m) noexcept;

struct SetrResult {
    double value = 0.0;  ///< price units, share normalized to 1 at t0
    double abs_error_estimate = 0.0;
    SetrMethod method = SetrMethod::WeakConstant;
    std::size_t evaluations = 0;
};

struct SkippedPoint {
    Time t_prime;
    std::string reason;
};

struct SetrCurve {
    std::vector<Time> grid;      ///< kept points, strictly increasing
    std::vector<double> values;  ///< phi(t') at each kept point
    std::vector<SkippedPoint> skipped;
};

/// Upper integration limit and the neglected tail mass for a half-line integral.
struct Truncation {
    Time point;
    double tail_bound;
};

/// Throws DivergentExpectation when premium growth outruns the arrival tail,
/// i.e. when E[A(tau)] is infinite. Exponential and Weibull are decided in
/// closed form; LogNormal by checking that the integrand decays over the
/// last decade before the truncation point.
void check_premium_convergence(const ArrivalProcess& a, const PremiumModel& m,
                               const NumericsPolicy& policy = {});

/// Truncation for the integral of p(s) * survival(s).
Truncation earnings_truncation(const ArrivalProcess& a, const PremiumModel& m,
                               const NumericsPolicy& policy = {});

/// E[A(tau)] computed as the single integral of p(s) * survival(s) over
/// [t0, inf), which equals the nested form by exchanging the order of
/// integration.
///
/// The method tag is WeakConstant for a constant premium and
/// GeometricPremium otherwise, since this is the SETR implied by the weak
/// no-arbitrage identity for a constant phi.
SetrResult expected_premium_earnings(const ArrivalProcess& a, const PremiumModel& m,
                                     const NumericsPolicy& policy = {});

/// phi = p * (E[tau] - t0).
SetrResult setr_weak_constant(const ArrivalProcess& a, double p);

/// phi = E[(p0 / lambda) * (exp(lambda * (tau - t0)) - 1)], integrated
/// against the density (the route independent of expected_premium_earnings).
SetrResult setr_geometric(const ArrivalProcess& a, double p0, double lambda,
                          const NumericsPolicy& policy = {});

/// phi(t') = p * survival(t') / pdf(t') = p / hazard(t') on each grid point.
/// Points with an exhausted tail or a vanishing density are skipped and listed.
/// DomainError unless the grid is strictly increasing and not below t0.
SetrCurve setr_strong_curve(const ArrivalProcess& a, double p, std::span<const Time> grid,
                            const NumericsPolicy& policy = {});

/// E[A(tau)] - phi; zero exactly when the weak no-arbitrage identity holds for
/// the constant loss phi.
SetrResult noarb_residual(const ArrivalProcess& a, const PremiumModel& m, double phi,
                          const NumericsPolicy& policy = {});

}  // namespace setr
