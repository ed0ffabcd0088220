#pragma once

// Adaptive quadrature on finite intervals and truncated half-lines.

#include <cstddef>
#include <functional>
#include <span>

namespace setr {

using Time = double;  ///< days
using Real = double;

using Integrand = std::function<double(double)>;

/// Tolerance policy shared by every module. Overridable from scenario configs.
struct NumericsPolicy {
    double rel_tol = 1e-8;
    /// Survival probability beyond which half-line integrals are truncated.
    double tail_cutoff = 1e-12;
    /// Survival values at or below this are treated as an exhausted tail.
    double hazard_floor = 1e-300;
    std::size_t max_evaluations = 1'000'000;
};

/// Checks the ranges below and throws ValidationError naming the field:
/// rel_tol in (0,1), tail_cutoff in (0,1e-6], hazard_floor in (0,1e-100],
/// max_evaluations >= 15.
void validate(const NumericsPolicy& policy);

struct QuadratureOptions {
    double rel_tol = 1e-8;
    double abs_tol = 0.0;
    std::size_t max_evaluations = 1'000'000;

    static QuadratureOptions from(const NumericsPolicy& p) {
        return QuadratureOptions{p.rel_tol, 0.0, p.max_evaluations};
    }
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t evaluations = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod integration of fn over [a, b].
///
/// Subdivision stops once the summed error estimate is below
/// max(rel_tol * |value|, abs_tol, roundoff floor). Interior breakpoints (where
/// fn has kinks or jumps) seed the initial partition; points outside (a, b)
/// are ignored.
///
/// Throws NonConvergence when max_evaluations would be exceeded or an interval
/// can no longer be bisected, NonFiniteIntegrand when fn returns NaN/inf, and
/// DomainError for a > b or non-finite limits.
QuadratureResult integrate(const Integrand& fn, double a, double b,
                           const QuadratureOptions& opts = {},
                           std::span<const double> breakpoints = {});

/// Integral of fn over [a, inf) computed on [a, truncation_point]. The caller
/// guarantees the neglected tail is at most tail_mass_bound; that bound is
/// added to abs_error_estimate.
QuadratureResult integrate_halfline(const Integrand& fn, double a, double truncation_point,
                                    double tail_mass_bound, const QuadratureOptions& opts = {},
                                    std::span<const double> breakpoints = {});

}  // namespace setr
