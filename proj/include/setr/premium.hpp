#pragma once

// Carbon premium rate p(s) and its accumulation A(t) on a share normalized to
// S(t0) = 1. Rates are absolute price increments per day.

#include <string_view>
#include <variant>

#include "setr/numerics.hpp"

namespace setr {

struct ConstantPremium {
    double p;  ///< per day
};

/// p(s) = p0 * exp(lambda * (s - t0))
struct GeometricPremium {
    double p0;      ///< per day, value at t0
    double lambda;  ///< per day
};

class PremiumModel {
public:
    using Kind = std::variant<ConstantPremium, GeometricPremium>;

    /// DomainError for negative or non-finite parameters.
    PremiumModel(Kind kind, Time t0);

    static PremiumModel constant(double p, Time t0 = 0.0);
    static PremiumModel geometric(double p0, double lambda, Time t0 = 0.0);

    const Kind& kind() const noexcept { return kind_; }
    std::string_view kind_name() const noexcept;
    Time origin() const noexcept { return t0_; }

    /// Rate at t0.
    double initial_rate() const noexcept;
    /// Exponential growth rate; 0 for a constant premium.
    double growth_rate() const noexcept;

    /// p(s). DomainError for s < t0.
    double rate_at(Time s) const;

    /// A(t), the premium accrued over [t0, t]. DomainError for t < t0.
    double cumulative(Time t) const;

private:
    Kind kind_;
    Time t0_;
};

/// Below this growth rate the geometric accrual uses the exact linear limit.
inline constexpr double kLinearLimitLambda = 1e-14;

}  // namespace setr
