#pragma once

// Arrival process of the transition event: a distribution of the event time
// on [t0, inf) with total mass one.

#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "setr/numerics.hpp"

namespace setr {

struct Exponential {
    double scale;  ///< days
};

struct Weibull {
    double shape;
    double scale;  ///< days
};

/// log(t - t0) ~ Normal(log_mean, log_sd)
struct LogNormal {
    double log_mean;
    double log_sd;
};

struct PointMass {
    double event_time;  ///< absolute, days
};

/// Piecewise-constant density; bin i spans [bin_edges[i], bin_edges[i+1]).
struct EmpiricalHistogram {
    std::vector<double> bin_edges;
    std::vector<double> masses;
};

using ArrivalKind = std::variant<Exponential, Weibull, LogNormal, PointMass, EmpiricalHistogram>;

/// One realization of the risk process: the unique time at which it jumps to 1.
struct RiskProcessSample {
    Time transition_time;
};

class ArrivalProcess {
public:
    /// Validates parameters; throws DomainError on any violated invariant.
    ArrivalProcess(ArrivalKind kind, Time t0);

    static ArrivalProcess exponential(double scale, Time t0 = 0.0);
    static ArrivalProcess weibull(double shape, double scale, Time t0 = 0.0);
    static ArrivalProcess lognormal(double log_mean, double log_sd, Time t0 = 0.0);
    static ArrivalProcess point_mass(Time event_time, Time t0 = 0.0);
    static ArrivalProcess histogram(std::vector<double> bin_edges, std::vector<double> masses,
                                    Time t0 = 0.0);

    const ArrivalKind& kind() const noexcept { return kind_; }
    std::string_view kind_name() const noexcept;
    Time origin() const noexcept { return t0_; }

    /// False for PointMass, which has no density.
    bool has_density() const noexcept;

    double pdf(Time t) const;
    /// P(tau <= t)
    double cdf(Time t) const;
    /// P(tau < t); differs from cdf only at an atom.
    double cdf_before(Time t) const;
    /// P(tau > t); 1 for t <= t0 (PointMass: for t below the atom).
    double survival(Time t) const;

    /// P(tA < tau <= tB). tB may be +inf. DomainError unless t0 <= tA <= tB.
    double probability_between(Time tA, Time tB) const;

    /// pdf / survival. TailUndefined when survival <= hazard_floor, and for a
    /// PointMass at or past its atom.
    double hazard(Time t, double hazard_floor = NumericsPolicy{}.hazard_floor) const;

    /// E[tau], closed form. DivergentExpectation if it overflows.
    Time mean() const;

    /// E[tau | tau > t'] = t' + (integral of survival over [t', inf)) / survival(t').
    Time conditional_mean_after(Time t_prime, const NumericsPolicy& policy = {}) const;

    /// Smallest t with survival(t) <= q for continuous laws; the end of the
    /// support for PointMass and EmpiricalHistogram.
    Time inverse_survival(double q) const;

    /// Upper limit T* for half-line integrals: survival(T*) <= tail_cutoff.
    Time truncation_point(double tail_cutoff) const;

    /// Estimate of the integral of survival beyond t (survival(t)/hazard(t);
    /// exact for Exponential, an upper bound for non-decreasing hazards).
    double survival_tail_estimate(Time t) const;

    /// Points where the density or survival function is not smooth.
    std::vector<Time> breakpoints() const;

    /// E[g(tau)] over [t0, truncation_point]. PointMass evaluates g at the atom.
    QuadratureResult expectation(const Integrand& g, Time truncation_point,
                                 double tail_mass_bound, const QuadratureOptions& opts) const;

    /// Inverse-CDF draw from the counter stream keyed by `seed`; a pure
    /// function of (process, seed).
    RiskProcessSample sample(std::uint64_t seed) const;

    /// Inverse-survival transform of u in (0, 1).
    Time from_uniform(double u) const;

private:
    ArrivalKind kind_;
    Time t0_;
    // EmpiricalHistogram: cumulative mass before bin i and mass after bin i.
    std::vector<double> mass_before_;
    std::vector<double> mass_after_;
};

}  // namespace setr
