#include "setr/premium.hpp"

#include <cmath>

#include "setr/errors.hpp"

namespace setr {

PremiumModel::PremiumModel(Kind kind, Time t0) : kind_(kind), t0_(t0) {
    SETR_REQUIRE(std::isfinite(t0_), DomainError, "premium origin t0 must be finite");
    if (const auto* c = std::get_if<ConstantPremium>(&kind_)) {
        SETR_REQUIRE(std::isfinite(c->p) && c->p >= 0.0, DomainError,
                     "constant premium must be finite and nonnegative");
    } else {
        const auto& g = std::get<GeometricPremium>(kind_);
        SETR_REQUIRE(std::isfinite(g.p0) && g.p0 >= 0.0, DomainError,
                     "geometric premium p0 must be finite and nonnegative");
        SETR_REQUIRE(std::isfinite(g.lambda) && g.lambda >= 0.0, DomainError,
                     "geometric premium lambda must be finite and nonnegative");
    }
}

PremiumModel PremiumModel::constant(double p, Time t0) { return {ConstantPremium{p}, t0}; }

PremiumModel PremiumModel::geometric(double p0, double lambda, Time t0) {
    return {GeometricPremium{p0, lambda}, t0};
}

std::string_view PremiumModel::kind_name() const noexcept {
    return std::holds_alternative<ConstantPremium>(kind_) ? "constant" : "geometric";
}

double PremiumModel::initial_rate() const noexcept {
    if (const auto* c = std::get_if<ConstantPremium>(&kind_)) return c->p;
    return std::get<GeometricPremium>(kind_).p0;
}

double PremiumModel::growth_rate() const noexcept {
    if (const auto* g = std::get_if<GeometricPremium>(&kind_)) return g->lambda;
    return 0.0;
}

double PremiumModel::rate_at(Time s) const {
    SETR_REQUIRE(s >= t0_, DomainError, "premium rate requested before its origin t0");
    if (const auto* c = std::get_if<ConstantPremium>(&kind_)) return c->p;
    const auto& g = std::get<GeometricPremium>(kind_);
    return g.p0 * std::exp(g.lambda * (s - t0_));
}

double PremiumModel::cumulative(Time t) const {
    SETR_REQUIRE(t >= t0_, DomainError, "premium accrual requested before its origin t0");
    const double dt = t - t0_;
    if (const auto* c = std::get_if<ConstantPremium>(&kind_)) return c->p * dt;
    const auto& g = std::get<GeometricPremium>(kind_);
    if (g.lambda < kLinearLimitLambda) return g.p0 * dt;
    return g.p0 * (std::expm1(g.lambda * dt) / g.lambda);
}

}  // namespace setr
