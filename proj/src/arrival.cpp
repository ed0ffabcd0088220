#include "setr/arrival.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "setr/errors.hpp"
#include "setr/rng.hpp"

namespace setr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

// Upper standard-normal quantile: z with P(Z > z) = q.
double upper_normal_quantile(double q) {
    return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * q);
}

std::size_t bin_index(const std::vector<double>& edges, double t) {
    auto it = std::upper_bound(edges.begin(), edges.end(), t);
    return static_cast<std::size_t>(std::distance(edges.begin(), it)) - 1;
}

}  // namespace

ArrivalProcess::ArrivalProcess(ArrivalKind kind, Time t0) : kind_(std::move(kind)), t0_(t0) {
    SETR_REQUIRE(std::isfinite(t0_), DomainError, "arrival origin t0 must be finite");
    std::visit(
        Overloaded{
            [](const Exponential& e) {
                SETR_REQUIRE(positive_finite(e.scale), DomainError,
                             "exponential scale must be positive and finite");
            },
            [](const Weibull& w) {
                SETR_REQUIRE(positive_finite(w.shape), DomainError,
                             "weibull shape must be positive and finite");
                SETR_REQUIRE(positive_finite(w.scale), DomainError,
                             "weibull scale must be positive and finite");
            },
            [](const LogNormal& l) {
                SETR_REQUIRE(std::isfinite(l.log_mean), DomainError,
                             "lognormal log_mean must be finite");
                SETR_REQUIRE(positive_finite(l.log_sd), DomainError,
                             "lognormal log_sd must be positive and finite");
            },
            [this](const PointMass& p) {
                SETR_REQUIRE(std::isfinite(p.event_time) && p.event_time > t0_, DomainError,
                             "point-mass event time must be finite and after t0");
            },
            [this](EmpiricalHistogram& h) {
                SETR_REQUIRE(h.masses.size() >= 1 && h.bin_edges.size() == h.masses.size() + 1,
                             DomainError, "histogram needs n masses and n + 1 bin edges");
                SETR_REQUIRE(h.bin_edges.front() >= t0_, DomainError,
                             "histogram bin edges must not precede t0");
                for (std::size_t i = 0; i + 1 < h.bin_edges.size(); ++i)
                    SETR_REQUIRE(std::isfinite(h.bin_edges[i + 1]) &&
                                     h.bin_edges[i + 1] > h.bin_edges[i],
                                 DomainError, "histogram bin edges must be strictly increasing");
                double total = 0.0;
                for (double m : h.masses) {
                    SETR_REQUIRE(std::isfinite(m) && m >= 0.0, DomainError,
                                 "histogram masses must be nonnegative");
                    total += m;
                }
                SETR_REQUIRE(std::fabs(total - 1.0) <= 1e-12, DomainError,
                             "histogram masses must sum to 1 within 1e-12");
                for (double& m : h.masses) m /= total;
                const std::size_t n = h.masses.size();
                mass_before_.assign(n, 0.0);
                mass_after_.assign(n, 0.0);
                for (std::size_t i = 1; i < n; ++i)
                    mass_before_[i] = mass_before_[i - 1] + h.masses[i - 1];
                for (std::size_t i = n - 1; i-- > 0;)
                    mass_after_[i] = mass_after_[i + 1] + h.masses[i + 1];
            },
        },
        kind_);
}

ArrivalProcess ArrivalProcess::exponential(double scale, Time t0) {
    return {Exponential{scale}, t0};
}
ArrivalProcess ArrivalProcess::weibull(double shape, double scale, Time t0) {
    return {Weibull{shape, scale}, t0};
}
ArrivalProcess ArrivalProcess::lognormal(double log_mean, double log_sd, Time t0) {
    return {LogNormal{log_mean, log_sd}, t0};
}
ArrivalProcess ArrivalProcess::point_mass(Time event_time, Time t0) {
    return {PointMass{event_time}, t0};
}
ArrivalProcess ArrivalProcess::histogram(std::vector<double> bin_edges, std::vector<double> masses,
                                         Time t0) {
    return {EmpiricalHistogram{std::move(bin_edges), std::move(masses)}, t0};
}

std::string_view ArrivalProcess::kind_name() const noexcept {
    return std::visit(Overloaded{
                          [](const Exponential&) { return std::string_view("exponential"); },
                          [](const Weibull&) { return std::string_view("weibull"); },
                          [](const LogNormal&) { return std::string_view("lognormal"); },
                          [](const PointMass&) { return std::string_view("point_mass"); },
                          [](const EmpiricalHistogram&) { return std::string_view("histogram"); },
                      },
                      kind_);
}

bool ArrivalProcess::has_density() const noexcept {
    return !std::holds_alternative<PointMass>(kind_);
}

double ArrivalProcess::pdf(Time t) const {
    if (t < t0_) return 0.0;
    const double dt = t - t0_;
    return std::visit(
        Overloaded{
            [&](const Exponential& e) { return std::exp(-dt / e.scale) / e.scale; },
            [&](const Weibull& w) {
                const double x = dt / w.scale;
                if (x == 0.0) return w.shape < 1.0 ? kInf : (w.shape == 1.0 ? 1.0 / w.scale : 0.0);
                const double xk = std::pow(x, w.shape);
                return (w.shape / w.scale) * (xk / x) * std::exp(-xk);
            },
            [&](const LogNormal& l) {
                if (dt <= 0.0) return 0.0;
                const double z = (std::log(dt) - l.log_mean) / l.log_sd;
                return std::exp(-0.5 * z * z) /
                       (dt * l.log_sd * std::sqrt(2.0 * std::numbers::pi));
            },
            [](const PointMass&) { return 0.0; },
            [&](const EmpiricalHistogram& h) {
                if (t < h.bin_edges.front() || t >= h.bin_edges.back()) return 0.0;
                const std::size_t i = bin_index(h.bin_edges, t);
                return h.masses[i] / (h.bin_edges[i + 1] - h.bin_edges[i]);
            },
        },
        kind_);
}

double ArrivalProcess::cdf(Time t) const {
    if (t <= t0_) return 0.0;
    const double dt = t - t0_;
    return std::visit(
        Overloaded{
            [&](const Exponential& e) { return -std::expm1(-dt / e.scale); },
            [&](const Weibull& w) { return -std::expm1(-std::pow(dt / w.scale, w.shape)); },
            [&](const LogNormal& l) {
                const double z = (std::log(dt) - l.log_mean) / l.log_sd;
                return 0.5 * std::erfc(-z / std::numbers::sqrt2);
            },
            [&](const PointMass& p) { return t >= p.event_time ? 1.0 : 0.0; },
            [&](const EmpiricalHistogram& h) {
                if (t < h.bin_edges.front()) return 0.0;
                if (t >= h.bin_edges.back()) return 1.0;
                const std::size_t i = bin_index(h.bin_edges, t);
                const double frac = (t - h.bin_edges[i]) / (h.bin_edges[i + 1] - h.bin_edges[i]);
                return std::min(1.0, mass_before_[i] + h.masses[i] * frac);
            },
        },
        kind_);
}

double ArrivalProcess::cdf_before(Time t) const {
    if (const auto* p = std::get_if<PointMass>(&kind_)) return t > p->event_time ? 1.0 : 0.0;
    return cdf(t);
}

double ArrivalProcess::survival(Time t) const {
    if (t <= t0_) return 1.0;
    const double dt = t - t0_;
    return std::visit(
        Overloaded{
            [&](const Exponential& e) { return std::exp(-dt / e.scale); },
            [&](const Weibull& w) { return std::exp(-std::pow(dt / w.scale, w.shape)); },
            [&](const LogNormal& l) {
                const double z = (std::log(dt) - l.log_mean) / l.log_sd;
                return 0.5 * std::erfc(z / std::numbers::sqrt2);
            },
            [&](const PointMass& p) { return t >= p.event_time ? 0.0 : 1.0; },
            [&](const EmpiricalHistogram& h) {
                if (t < h.bin_edges.front()) return 1.0;
                if (t >= h.bin_edges.back()) return 0.0;
                const std::size_t i = bin_index(h.bin_edges, t);
                const double frac = (t - h.bin_edges[i]) / (h.bin_edges[i + 1] - h.bin_edges[i]);
                return std::min(1.0, mass_after_[i] + h.masses[i] * (1.0 - frac));
            },
        },
        kind_);
}

double ArrivalProcess::probability_between(Time tA, Time tB) const {
    SETR_REQUIRE(!std::isnan(tA) && !std::isnan(tB), DomainError, "interval bounds are NaN");
    SETR_REQUIRE(tA >= t0_, DomainError, "interval starts before the arrival origin t0");
    SETR_REQUIRE(tA <= tB, DomainError, "interval requires tA <= tB");
    if (tA == tB) return 0.0;
    const double upper = std::isinf(tB) ? 0.0 : survival(tB);
    return std::clamp(survival(tA) - upper, 0.0, 1.0);
}

double ArrivalProcess::hazard(Time t, double hazard_floor) const {
    if (const auto* p = std::get_if<PointMass>(&kind_)) {
        if (t >= p->event_time)
            throw TailUndefined("hazard undefined at or past the point-mass atom");
        return 0.0;
    }
    const double s = survival(t);
    if (s <= hazard_floor)
        throw TailUndefined("survival " + std::to_string(s) + " at t = " + std::to_string(t) +
                            " is below the hazard floor");
    const double dt = std::max(t - t0_, 0.0);
    return std::visit(Overloaded{
                          [](const Exponential& e) { return 1.0 / e.scale; },
                          [&](const Weibull& w) {
                              const double x = dt / w.scale;
                              if (w.shape == 1.0) return 1.0 / w.scale;
                              if (x == 0.0) return w.shape < 1.0 ? kInf : 0.0;
                              return (w.shape / w.scale) * std::pow(x, w.shape - 1.0);
                          },
                          [&](const auto&) { return pdf(t) / s; },
                      },
                      kind_);
}

Time ArrivalProcess::mean() const {
    const Time m = std::visit(
        Overloaded{
            [&](const Exponential& e) { return t0_ + e.scale; },
            [&](const Weibull& w) { return t0_ + w.scale * std::tgamma(1.0 + 1.0 / w.shape); },
            [&](const LogNormal& l) {
                return t0_ + std::exp(l.log_mean + 0.5 * l.log_sd * l.log_sd);
            },
            [](const PointMass& p) { return p.event_time; },
            [](const EmpiricalHistogram& h) {
                double s = 0.0;
                for (std::size_t i = 0; i < h.masses.size(); ++i)
                    s += h.masses[i] * 0.5 * (h.bin_edges[i] + h.bin_edges[i + 1]);
                return s;
            },
        },
        kind_);
    if (!std::isfinite(m))
        throw DivergentExpectation("arrival mean is infinite for " + std::string(kind_name()) +
                                   " parameters");
    return m;
}

Time ArrivalProcess::inverse_survival(double q) const {
    SETR_REQUIRE(q > 0.0 && q < 1.0, DomainError, "tail probability must lie in (0, 1)");
    return std::visit(
        Overloaded{
            [&](const Exponential& e) { return t0_ - e.scale * std::log(q); },
            [&](const Weibull& w) {
                return t0_ + w.scale * std::pow(-std::log(q), 1.0 / w.shape);
            },
            [&](const LogNormal& l) {
                return t0_ + std::exp(l.log_mean + l.log_sd * upper_normal_quantile(q));
            },
            [](const PointMass& p) { return p.event_time; },
            [](const EmpiricalHistogram& h) { return h.bin_edges.back(); },
        },
        kind_);
}

Time ArrivalProcess::truncation_point(double tail_cutoff) const {
    return inverse_survival(tail_cutoff);
}

double ArrivalProcess::survival_tail_estimate(Time t) const {
    if (std::holds_alternative<PointMass>(kind_) ||
        std::holds_alternative<EmpiricalHistogram>(kind_)) {
        const auto bps = breakpoints();
        // Bounded support: the tail is zero at or past the last breakpoint.
        if (t >= bps.back()) return 0.0;
    }
    const double s = survival(t);
    if (s == 0.0) return 0.0;
    const double f = pdf(t);
    if (!(f > 0.0)) return kInf;
    return s * s / f;
}

std::vector<Time> ArrivalProcess::breakpoints() const {
    return std::visit(Overloaded{
                          [](const PointMass& p) { return std::vector<Time>{p.event_time}; },
                          [](const EmpiricalHistogram& h) { return h.bin_edges; },
                          [](const auto&) { return std::vector<Time>{}; },
                      },
                      kind_);
}

Time ArrivalProcess::conditional_mean_after(Time t_prime, const NumericsPolicy& policy) const {
    SETR_REQUIRE(t_prime >= t0_, DomainError, "conditioning time precedes t0");
    const double s = survival(t_prime);
    if (s <= policy.hazard_floor)
        throw TailUndefined("survival at t' = " + std::to_string(t_prime) +
                            " is below the hazard floor");
    if (const auto* p = std::get_if<PointMass>(&kind_)) return p->event_time;
    const Time upper = std::max(truncation_point(policy.tail_cutoff), t_prime);
    const auto bps = breakpoints();
    const QuadratureResult r =
        integrate_halfline([this](double t) { return survival(t); }, t_prime, upper,
                           survival_tail_estimate(upper), QuadratureOptions::from(policy), bps);
    return t_prime + r.value / s;
}

QuadratureResult ArrivalProcess::expectation(const Integrand& g, Time truncation_point,
                                             double tail_mass_bound,
                                             const QuadratureOptions& opts) const {
    if (const auto* p = std::get_if<PointMass>(&kind_)) {
        const double v = g(p->event_time);
        if (!std::isfinite(v)) throw NonFiniteIntegrand("expectation integrand is not finite");
        return QuadratureResult{v, 0.0, 1};
    }
    const auto bps = breakpoints();
    return integrate_halfline([&](double t) { return pdf(t) * g(t); }, t0_, truncation_point,
                              tail_mass_bound, opts, bps);
}

Time ArrivalProcess::from_uniform(double u) const {
    return std::visit(
        Overloaded{
            [&](const EmpiricalHistogram& h) {
                // Inverse cdf at v = 1 - u; bins with zero mass are never hit.
                const double v = 1.0 - u;
                std::size_t i = 0;
                while (i + 1 < h.masses.size() && mass_before_[i + 1] <= v) ++i;
                while (h.masses[i] == 0.0 && i > 0) --i;
                const double frac = h.masses[i] > 0.0 ? (v - mass_before_[i]) / h.masses[i] : 0.0;
                const double w = h.bin_edges[i + 1] - h.bin_edges[i];
                return h.bin_edges[i] + std::clamp(frac, 0.0, 1.0) * w;
            },
            [&](const auto&) { return inverse_survival(u); },
        },
        kind_);
}

RiskProcessSample ArrivalProcess::sample(std::uint64_t seed) const {
    const rng::CounterStream stream(seed);
    return RiskProcessSample{from_uniform(stream.uniform(0))};
}

}  // namespace setr
